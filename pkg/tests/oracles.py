"""Independent reference computations used by the tests.

These deliberately avoid the package's solvers: brute-force maximization
over pure states, dense grids and exhaustive enumeration.
"""
from __future__ import annotations

import itertools

import numpy as np
import scipy.optimize


def apply_superop_dense(S: np.ndarray, x: np.ndarray) -> np.ndarray:
    d = x.shape[0]
    return (S @ x.reshape(-1, order="F")).reshape((d, d), order="F")


def ancilla_output(S: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """(id (x) Psi)(|psi><psi|) for psi in C^d (x) C^d, psi given as a d x d coefficient array."""
    d = psi.shape[0]
    out = np.zeros((d * d, d * d), dtype=complex)
    for j in range(d):
        for l in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[j, l] = 1
            block = apply_superop_dense(S, E)
            out += np.kron(np.outer(psi[:, j], psi[:, l].conj()), block)
    return out


def brute_force_diamond(S: np.ndarray, restarts: int = 20, seed: int = 0) -> float:
    """max over ancilla-assisted pure inputs of the trace norm of the output (a lower bound
    that is attained for Hermitian-preserving differences of channels)."""
    d = int(round(np.sqrt(S.shape[0])))
    rng = np.random.default_rng(seed)

    def neg(p):
        psi = (p[: d * d] + 1j * p[d * d:]).reshape(d, d)
        psi = psi / np.linalg.norm(psi)
        w = np.linalg.eigvalsh(ancilla_output(S, psi))
        return -float(np.abs(w).sum())

    best = 0.0
    for _ in range(restarts):
        p0 = rng.standard_normal(2 * d * d)
        res = scipy.optimize.minimize(neg, p0, method="Nelder-Mead",
                                      options={"maxiter": 4000, "xatol": 1e-10, "fatol": 1e-12})
        res = scipy.optimize.minimize(neg, res.x, method="BFGS")
        best = max(best, -res.fun)
    return best


def hermitian_wasserstein_grid(rho: np.ndarray, lipschitz, n: int = 41) -> float:
    """sup |tr(rho X)| over traceless Hermitian 2x2 X = a.sigma with |||X||| <= 1, on a grid of
    directions; the norm constraint is met by rescaling each direction."""
    from chancomp.linalg import PAULI_X, PAULI_Y, PAULI_Z

    best = 0.0
    th = np.linspace(0, np.pi, n)
    ph = np.linspace(0, 2 * np.pi, 2 * n)
    for t, p in itertools.product(th, ph):
        a = np.array([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)])
        X = a[0] * PAULI_X + a[1] * PAULI_Y + a[2] * PAULI_Z
        lip = lipschitz(X)
        if lip > 1e-12:
            best = max(best, abs(np.trace(rho @ X)) / lip)
    return best


def exhaustive_word_lengths(generators: list[np.ndarray], elements: list[np.ndarray], max_len: int,
                            same) -> list[int]:
    """Shortest product length for each element by enumerating all words up to max_len."""
    d = generators[0].shape[0]
    lengths = [None] * len(elements)
    for length in range(max_len + 1):
        for word in itertools.product(range(len(generators)), repeat=length):
            g = np.eye(d, dtype=complex)
            for k in word:
                g = g @ generators[k]
            for idx, e in enumerate(elements):
                if lengths[idx] is None and same(g, e):
                    lengths[idx] = length
    return lengths
