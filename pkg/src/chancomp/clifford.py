"""Pauli resources on n qubits, the site-wise Lipschitz norm, and their comparisons.

Sites are numbered from 0 (leftmost tensor factor).  The single-site
partial trace ``tr_j`` is the conditional expectation that replaces site j
by its maximally mixed state; it equals the average of the adjoint actions
of I, X, Y, Z on that site.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, LemmaViolation
from .linalg import PAULI_X, PAULI_Y, PAULI_Z, embed, ginibre, kron_all, operator_norm
from .resources import ResourceSet, build_structure, lipschitz_norm, make_resource

MAX_QUBITS = 3
CROSS_CHECK_TOL = 1e-10
LOWER_CONST, UPPER_CONST = 0.25, 0.75


@dataclass(frozen=True, eq=False)
class PauliResource:
    n: int
    elements: tuple   # sigma^X_0, sigma^Y_0, sigma^Z_0, sigma^X_1, ...
    labels: tuple

    @property
    def dim(self) -> int:
        return 2 ** self.n

    def resource_set(self) -> ResourceSet:
        return make_resource("discrete", self.elements)


def _check_n(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUBITS:
        raise InputError(f"qubit count must be an integer in [1, {MAX_QUBITS}], got {n!r}")
    return int(n)


def pauli_resources(n: int) -> PauliResource:
    n = _check_n(n)
    dims = [2] * n
    els, labels = [], []
    for j in range(n):
        for name, P in (("X", PAULI_X), ("Y", PAULI_Y), ("Z", PAULI_Z)):
            els.append(embed(P, j, dims))
            labels.append(f"{name}{j}")
    return PauliResource(n, tuple(els), tuple(labels))


def _qubits_of(x: np.ndarray, n: int | None) -> int:
    d = x.shape[0]
    if n is None:
        n = int(round(np.log2(d)))
    if 2 ** n != d or x.shape != (d, d):
        raise InputError(f"matrix of shape {x.shape} is not an operator on {n} qubits")
    return n


def site_trace(x: np.ndarray, j: int, n: int | None = None) -> np.ndarray:
    """tr_j(x): partial trace over site j, tensored back with I/2 at site j."""
    x = np.asarray(x, dtype=complex)
    n = _qubits_of(x, n)
    if not 0 <= j < n:
        raise InputError(f"site {j} out of range for {n} qubits")
    T = x.reshape((2,) * (2 * n))
    red = np.trace(T, axis1=j, axis2=n + j)  # axes: other rows, other cols
    full = np.multiply.outer(red, np.eye(2) / 2)  # site row/col appended last
    rows = [k for k in range(n) if k != j]
    # source axis i goes to position order[i]
    order = rows + [k + n for k in rows] + [j, n + j]
    out = np.moveaxis(full, list(range(2 * n)), order)
    return out.reshape(2 ** n, 2 ** n)


def pauli_average(x: np.ndarray, j: int, n: int | None = None) -> np.ndarray:
    """(x + X_j x X_j + Y_j x Y_j + Z_j x Z_j) / 4."""
    x = np.asarray(x, dtype=complex)
    n = _qubits_of(x, n)
    dims = [2] * n
    out = x.copy()
    for P in (PAULI_X, PAULI_Y, PAULI_Z):
        Pj = embed(P, j, dims)
        out = out + Pj @ x @ Pj
    return out / 4


def l_norm(x, n: int | None = None, cross_check: bool = True) -> float:
    """max_j ||x - tr_j x||_inf, with tr_j cross-checked against the Pauli average."""
    x = np.asarray(x, dtype=complex)
    n = _qubits_of(x, n)
    best = 0.0
    for j in range(n):
        t = site_trace(x, j, n)
        if cross_check:
            dev = np.abs(t - pauli_average(x, j, n)).max()
            if dev > CROSS_CHECK_TOL * max(1.0, np.abs(x).max()):
                raise LemmaViolation(f"partial trace and Pauli average disagree by {dev:.3e} at site {j}",
                                     counterexample=x)
        best = max(best, operator_norm(x - t))
    return best


def edge_cases(n: int) -> list[np.ndarray]:
    P = pauli_resources(n)
    out = [np.eye(2 ** n, dtype=complex), P.elements[2]]
    if n >= 2:
        out.append(kron_all([PAULI_Z] * n))
    return out


def norm_equivalence_check(samples: int, n: int, seed: int) -> dict:
    """Check |||x|||_P / 4 <= ||x||_L <= 3 |||x|||_P / 4 on Ginibre samples and edge cases."""
    n = _check_n(n)
    if samples < 0:
        raise InputError("samples must be non-negative")
    R = pauli_resources(n).resource_set()
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), n]))
    xs = edge_cases(n) + [ginibre(2 ** n, rng) for _ in range(samples)]
    lo, hi, checked, skipped = np.inf, -np.inf, 0, 0
    for x in xs:
        lip = lipschitz_norm(x, R)
        ln = l_norm(x, n)
        if lip <= 1e-12:
            skipped += 1  # vacuous: both sides vanish on scalars
            continue
        ok = LOWER_CONST * lip <= ln + 1e-9 and ln <= UPPER_CONST * lip + 1e-9
        if not ok:
            raise LemmaViolation(f"norm equivalence violated: |||x|||={lip!r}, ||x||_L={ln!r}",
                                 counterexample=x)
        r = ln / lip
        lo, hi = min(lo, r), max(hi, r)
        checked += 1
    return {"qubits": n, "samples": samples, "checked": checked, "skipped": skipped,
            "min_ratio": float(lo), "max_ratio": float(hi), "violations": 0,
            "bounds": [LOWER_CONST, UPPER_CONST]}


def partial_trace_identity_check(samples: int, n: int, seed: int) -> dict:
    """Max deviation between tr_j and the Pauli average over random inputs and all sites."""
    n = _check_n(n)
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 100 + n]))
    worst = 0.0
    for _ in range(samples):
        x = ginibre(2 ** n, rng)
        for j in range(n):
            worst = max(worst, float(np.abs(site_trace(x, j, n) - pauli_average(x, j, n)).max()))
    return {"qubits": n, "samples": samples, "max_deviation": worst}


def principal_log_generator(c: np.ndarray) -> np.ndarray:
    """-i log c on the principal branch (-pi, pi], by eigendecomposition of a unitary c."""
    w, V = np.linalg.eig(c)
    ang = np.angle(w)
    ang[np.isclose(ang, -np.pi, atol=1e-12)] = np.pi  # eigenvalue -1 maps to pi
    return V @ np.diag(ang) @ np.linalg.inv(V)


def continuous_from_discrete(P: PauliResource, samples: int = 500, seed: int = 0):
    """Continuous resources a_j = -i log c_j = pi (I - c_j) / 2 with the comparison checks.

    Returns the continuous ``ResourceSet`` and a report confirming equal
    commutants and the sampled contraction |||x|||_S <= |||x|||_Delta.
    """
    gens = []
    for c in P.elements:
        if np.abs(c - c.conj().T).max() > 1e-9 or np.abs(c @ c - np.eye(P.dim)).max() > 1e-9:
            raise InputError("generators must be self-adjoint unitaries")
        a = np.pi * (np.eye(P.dim) - c) / 2
        dev = np.abs(a - principal_log_generator(c)).max()
        if dev > 1e-9:
            raise LemmaViolation(f"closed-form generator deviates from -i log c by {dev:.3e}")
        gens.append((a + a.conj().T) / 2)
    S = P.resource_set()
    Delta = make_resource("continuous", gens)
    dim_S = len(build_structure(S).commutant_basis)
    dim_D = len(build_structure(Delta).commutant_basis)
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 200 + P.n]))
    worst = -np.inf
    for _ in range(samples):
        x = ginibre(P.dim, rng)
        s_norm = lipschitz_norm(x, S)
        d_norm = lipschitz_norm(x, Delta)
        worst = max(worst, s_norm - d_norm)
        if s_norm > d_norm + 1e-9:
            raise LemmaViolation("contraction |||x|||_S <= |||x|||_Delta violated", counterexample=x)
    if dim_S != dim_D:
        raise LemmaViolation(f"commutant dimensions differ: {dim_S} vs {dim_D}")
    report = {"commutant_dim_discrete": dim_S, "commutant_dim_continuous": dim_D,
              "samples": samples, "max_excess": float(worst)}
    return Delta, report
