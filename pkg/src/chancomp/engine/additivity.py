"""Tensor additivity of complete complexity on product systems, checked on intervals.

Given witnesses w_i for the two factors, the Hermitian dilations
``f_i = [[0, w_i], [w_i^dagger, 0]]`` keep the Lipschitz norm and mean-zero
property, and (Phi_i^* - id)(f_i) is Hermitian with largest eigenvalue
||(Phi_i^* - id)(w_i)||.  The product witness

    F = f_1 (x) I + I (x) f_2      (ancillas regrouped in front)

has |||F||| <= 1 for the joined resources and

    lambda_max((Phi_1 (x) Phi_2)^* - id)(F) = lambda_max(.. f_1) + lambda_max(.. f_2),

so the lower bounds add exactly.
"""
from __future__ import annotations

import numpy as np

from ..channels import QuantumChannel, tensor
from ..linalg import dag, kron_all
from ..resources import LipschitzStructure, amplify_resource, build_structure, join_resources, lipschitz_norm
from .estimate import SCOPE_ALL, SolveOptions, all_level_upper, cb_complexity_estimate

PRODUCT_MAX_ITER = 5


def hermitian_dilation(w: np.ndarray) -> np.ndarray:
    D = w.shape[0]
    z = np.zeros((D, D), dtype=complex)
    return np.block([[z, w], [dag(w), z]])


def product_witness(f1: np.ndarray, n1: int, d1: int, f2: np.ndarray, n2: int, d2: int) -> np.ndarray:
    """F = f1 (x) I + I (x) f2 with factor order (n1, n2, d1, d2)."""
    D1, D2 = n1 * d1, n2 * d2
    F = np.kron(f1, np.eye(D2)) + np.kron(np.eye(D1), f2)
    T = F.reshape(n1, d1, n2, d2, n1, d1, n2, d2).transpose(0, 2, 1, 3, 4, 6, 5, 7)
    D = D1 * D2
    return T.reshape(D, D)


def _dual_minus_id(kraus, n: int, F: np.ndarray) -> np.ndarray:
    """(id_n (x) Phi^* - id)(F) from Kraus operators, without forming superoperators."""
    eye = np.eye(n)
    out = -F
    for K in kraus:
        A = np.kron(eye, K)
        out = out + dag(A) @ F @ A
    return out


def tensor_additivity_check(phi1: QuantumChannel, L1: LipschitzStructure,
                            phi2: QuantumChannel, L2: LipschitzStructure,
                            opts: SolveOptions | None = None, tol: float = 1e-3) -> dict:
    """Compare product-system bounds with the sums of the factor bounds."""
    opts = opts or SolveOptions()
    comp_opts = opts if opts.levels else SolveOptions(**{**opts.__dict__, "levels": (1, 2)})
    e1 = cb_complexity_estimate(phi1, L1, comp_opts)
    e2 = cb_complexity_estimate(phi2, L2, comp_opts)
    d1, d2 = L1.dim, L2.dim
    phi12 = tensor(phi1, phi2)
    S12 = join_resources([L1.resource, L2.resource])
    L12 = build_structure(S12)
    # the product lower bound comes from the product witness below; the direct
    # ascent on the product system only needs a short budget
    prod_opts = SolveOptions(**{**opts.__dict__, "levels": (1,), "restarts": 0,
                                "max_iter": min(opts.max_iter, PRODUCT_MAX_ITER)})
    e12 = cb_complexity_estimate(phi12, L12, prod_opts)

    # product witness from the factor witnesses
    n1, n2 = 2 * e1.level, 2 * e2.level
    f1 = hermitian_dilation(e1.witness) if e1.witness is not None else np.zeros((n1 * d1,) * 2)
    f2 = hermitian_dilation(e2.witness) if e2.witness is not None else np.zeros((n2 * d2,) * 2)
    F = product_witness(f1, n1, d1, f2, n2, d2)
    lip = lipschitz_norm(F, amplify_resource(S12, n1 * n2))
    Y = _dual_minus_id(phi12.kraus, n1 * n2, F)
    scale = max(lip, 1.0)
    value = float(np.linalg.norm(Y, 2)) / scale
    lam_max = float(np.linalg.eigvalsh((Y + dag(Y)) / 2)[-1]) / scale

    lower12 = max(e12.lower, value)
    # only certificates of the product channel itself; the factor sums are what is compared
    upper12 = all_level_upper(e12)
    sum_lower = e1.lower + e2.lower
    sum_upper = e1.upper + e2.upper
    return {
        "lower_1": e1.lower, "upper_1": e1.upper, "level_1": e1.level,
        "lower_2": e2.lower, "upper_2": e2.upper, "level_2": e2.level,
        "product_direct_lower": e12.lower,
        "product_witness_value": value,
        "product_witness_lambda_max": lam_max,
        "product_witness_lipschitz": lip,
        "product_witness_level": n1 * n2,
        "lower_12": lower12,
        "upper_12": upper12,
        "upper_12_scope": SCOPE_ALL,
        "sum_lower": sum_lower,
        "sum_upper": sum_upper,
        "lower_additive": bool(lower12 >= sum_lower - tol),
        "upper_subadditive": bool(upper12 <= sum_upper + tol),
        "passed": bool(lower12 >= sum_lower - tol and upper12 <= sum_upper + tol
                       and lower12 <= upper12 + 1e-9),
    }
