"""Operator norms of superoperators: diamond norm (SDP) and the infinity-to-infinity norm."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..channels import superop_to_choi
from ..errors import InputError
from ..linalg import as_matrix, dag, partial_trace, polar_unitary, random_unitary, top_singular_pair, unvec, vec
from .sdp import GAP_TOL, MAX_ITER, BlockSDP, hermitian_basis


@dataclass
class DiamondResult:
    value: float
    primal: float
    dual: float
    gap: float
    iterations: int

    def to_dict(self) -> dict:
        return {"value": self.value, "primal": self.primal, "dual": self.dual,
                "gap": self.gap, "iterations": self.iterations}


@dataclass
class NormInterval:
    lower: float
    upper: float
    witness: np.ndarray | None = None


def _superop_dim(S: np.ndarray) -> int:
    d = int(round(np.sqrt(S.shape[0])))
    if d * d != S.shape[0]:
        raise InputError(f"superoperator size {S.shape[0]} is not a square number")
    return d


def diamond_norm(S, gap_tol: float = GAP_TOL, max_iter: int = MAX_ITER) -> DiamondResult:
    """Diamond norm of a Hermitian-preserving superoperator (Schroedinger side).

    Solves ``min lambda  s.t.  Y >= J,  Y >= -J,  tr_out(Y) <= lambda I``
    where ``J`` is the Choi matrix; its dual maximizes ``<J, P0 - P1>`` over
    ``P0 + P1 <= rho (x) I``.  Raises ``ConvergenceError`` if the interior-point
    method does not reach the gap tolerance.
    """
    S = as_matrix(S, square=True, name="superoperator")
    d = _superop_dim(S)
    J = superop_to_choi(S)
    herm_res = np.abs(J - dag(J)).max()
    if herm_res > 1e-9 * max(1.0, np.abs(J).max()):
        raise InputError(f"map is not Hermitian-preserving (Choi asymmetry {herm_res:.3e})")
    J = (J + dag(J)) / 2
    n = d * d
    basis = hermitian_basis(n)
    eye_d = np.eye(d, dtype=complex)
    zero_d = np.zeros((d, d), dtype=complex)
    zero_n = np.zeros((n, n), dtype=complex)
    A = [[-H, -H, partial_trace(H, (d, d), keep=[0])] for H in basis]
    A.append([zero_n, zero_n, -eye_d])
    b = np.zeros(len(A))
    b[-1] = -1.0
    res = BlockSDP([-J, J, zero_d], A, b).solve(gap_tol=gap_tol, max_iter=max_iter)
    value = -res.dual
    return DiamondResult(float(max(value, 0.0)), float(-res.primal), float(-res.dual),
                         float(res.gap), res.iterations)


def inf_to_inf_norm(S, restarts: int = 8, max_iter: int = 200, seed: int = 0,
                    upper: bool = True) -> NormInterval:
    """Interval for the norm of x -> unvec(S vec x) from (M_d, ||.||_inf) to itself.

    Lower bound: monotone ascent over unitaries (extreme points of the unit
    ball): U <- polar(S^dagger(u v^dagger)) for the top singular pair (u, v)
    of S(U).  Upper bound: diamond norm of the preadjoint ``S^dagger``,
    which dominates the infinity-to-infinity norm.
    """
    S = as_matrix(S, square=True, name="superoperator")
    d = _superop_dim(S)
    Sd = dag(S)

    def f(U):
        return np.linalg.norm(unvec(S @ vec(U), (d, d)), 2)

    best, best_U = 0.0, np.eye(d, dtype=complex)
    starts = [np.eye(d, dtype=complex)]
    for r in range(restarts):
        starts.append(random_unitary(d, np.random.default_rng(np.random.SeedSequence([seed, r]))))
    for U in starts:
        val = f(U)
        for _ in range(max_iter):
            _, u, v = top_singular_pair(unvec(S @ vec(U), (d, d)))
            G = unvec(Sd @ vec(np.outer(u, v.conj())), (d, d))
            if np.abs(G).max() == 0:
                break
            Un = polar_unitary(G)
            vn = f(Un)
            if vn <= val * (1 + 1e-13):
                break
            U, val = Un, vn
        if val > best:
            best, best_U = val, U
    hi = np.inf
    if upper:
        hi = max(diamond_norm(Sd).value, best)
    return NormInterval(float(best), float(hi), best_U)
