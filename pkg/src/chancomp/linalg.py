"""Dense complex linear algebra used by every other module.

Conventions
-----------
* Matrices are plain ``numpy.ndarray`` objects with ``complex128`` dtype.
* ``vec`` stacks columns: ``vec(A X B) = (B.T kron A) vec(X)``.
* Spectral routines return values sorted in descending order and fix the
  phase of vectors so the first significant component is real positive.
"""
from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import InputError

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}

# relative threshold deciding which component counts as "significant" for phase fixing
_PHASE_EPS = 1e-8


def as_matrix(M, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite complex 2-d array, raising ``InputError`` otherwise."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise InputError(f"{name} must be 2-dimensional, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError(f"{name} has non-finite entries")
    if square and A.shape[0] != A.shape[1]:
        raise InputError(f"{name} must be square, got shape {A.shape}")
    return A


def dag(M: np.ndarray) -> np.ndarray:
    return M.conj().T


def vec(M: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(M).reshape(-1, order="F")


def unvec(v: np.ndarray, shape: tuple[int, int] | None = None) -> np.ndarray:
    v = np.asarray(v)
    if shape is None:
        d = int(round(np.sqrt(v.size)))
        if d * d != v.size:
            raise InputError(f"cannot unvec a vector of length {v.size} into a square matrix")
        shape = (d, d)
    return v.reshape(shape, order="F")


def hs_inner(A: np.ndarray, B: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product tr(A^dagger B)."""
    return complex(np.vdot(A, B))


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def operator_norm(M) -> float:
    """Largest singular value (spectral norm)."""
    A = as_matrix(M)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def trace_norm(M) -> float:
    A = as_matrix(M)
    return float(np.sum(np.linalg.svd(A, compute_uv=False)))


def matrix_exp(M) -> np.ndarray:
    """exp(M) by scaling-and-squaring Pade (scipy's ``expm``)."""
    A = as_matrix(M, square=True)
    return scipy.linalg.expm(A)


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so its first significant entry is real positive."""
    v = np.asarray(v, dtype=complex)
    flat = v.reshape(-1, order="F")
    scale = np.max(np.abs(flat)) if flat.size else 0.0
    if scale == 0.0:
        return v
    idx = int(np.argmax(np.abs(flat) > _PHASE_EPS * scale))
    z = flat[idx]
    return v * (abs(z) / z)


def eigh_sorted(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition, eigenvalues descending, phase-fixed vectors."""
    H = as_matrix(H, square=True)
    w, V = np.linalg.eigh((H + dag(H)) / 2)
    order = np.argsort(-w, kind="stable")
    w, V = w[order], V[:, order]
    V = np.column_stack([fix_phase(V[:, k]) for k in range(V.shape[1])]) if V.size else V
    return w, V


def top_singular_pair(M: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Return (s, u, v) with M v = s u for the largest singular value s."""
    U, s, Vh = np.linalg.svd(M)
    return float(s[0]), U[:, 0], Vh[0].conj()


def polar_unitary(M: np.ndarray) -> np.ndarray:
    """Unitary factor W of the polar decomposition M = W |M|."""
    U, _, Vh = np.linalg.svd(M)
    return U @ Vh


def default_rank_tol(dim: int) -> float:
    # relative to the largest singular value; scales with problem size
    return 1e-9 * max(int(dim), 1)


def nullspace_basis(A, tol: float | None = None) -> list[np.ndarray]:
    """Orthonormal basis of ``{v : ||A v|| <= tol * ||A||}``.

    The basis is read off the null-space projector by column-pivoted QR, so
    it depends only on the subspace; each vector is phase-fixed.
    """
    A = as_matrix(A, name="A")
    n = A.shape[1]
    if tol is None:
        tol = default_rank_tol(n)
    if tol <= 0:
        raise InputError("tol must be positive")
    if A.shape[0] == 0:
        return [e for e in np.eye(n, dtype=complex)]
    _, s, Vh = np.linalg.svd(A, full_matrices=True)
    smax = s[0] if s.size else 0.0
    full_s = np.zeros(n)
    full_s[: s.size] = s
    null_mask = full_s <= tol * smax if smax > 0 else np.ones(n, dtype=bool)
    V0 = Vh[null_mask].conj().T
    r = V0.shape[1]
    if r == 0:
        return []
    P = V0 @ dag(V0)
    Q, _, _ = scipy.linalg.qr(P, pivoting=True)
    return [fix_phase(Q[:, k]) for k in range(r)]


def orthonormalize(vectors: Sequence[np.ndarray], tol: float = 1e-10) -> list[np.ndarray]:
    """Modified Gram-Schmidt, dropping vectors already in the span."""
    out: list[np.ndarray] = []
    for v in vectors:
        w = np.array(v, dtype=complex).reshape(-1)
        for q in out:
            w = w - np.vdot(q, w) * q
        for q in out:
            w = w - np.vdot(q, w) * q
        nrm = np.linalg.norm(w)
        if nrm > tol:
            out.append(w / nrm)
    return out


def check_shape(dim: int, factor_dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(k) for k in factor_dims)
    if any(k <= 0 for k in dims):
        raise InputError(f"factor dimensions must be positive, got {dims}")
    if int(np.prod(dims)) != dim:
        raise InputError(f"factor dims {dims} do not multiply to {dim}")
    return dims


def partial_trace(M, factor_dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every tensor factor not listed in ``keep``.

    ``factor_dims`` is the subsystem shape; kept factors stay in their
    original order.
    """
    A = as_matrix(M, square=True)
    dims = check_shape(A.shape[0], factor_dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise InputError(f"keep indices {keep} out of range for {n} factors")
    T = A.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n: 2 * n])
    for k in range(n):
        if k not in keep:
            col[k] = row[k]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    R = np.einsum("".join(row) + "".join(col) + "->" + out, T)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return R.reshape(dk, dk)


def embed(op: np.ndarray, site: int, factor_dims: Sequence[int]) -> np.ndarray:
    """Place ``op`` at tensor position ``site`` with identities elsewhere."""
    mats = [np.eye(k, dtype=complex) for k in factor_dims]
    mats[site] = np.asarray(op, dtype=complex)
    return kron_all(mats)


def is_unitary(U: np.ndarray, tol: float = 1e-9) -> bool:
    U = np.asarray(U)
    return U.shape[0] == U.shape[1] and np.abs(dag(U) @ U - np.eye(U.shape[0])).max() <= tol


def is_hermitian(H: np.ndarray, tol: float = 1e-9) -> bool:
    H = np.asarray(H)
    return H.shape[0] == H.shape[1] and np.abs(H - dag(H)).max() <= tol


def ginibre(dim: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix."""
    Q, R = np.linalg.qr(ginibre(dim, rng))
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def random_state(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    G = (rng.standard_normal((dim, rank or dim)) + 1j * rng.standard_normal((dim, rank or dim)))
    rho = G @ dag(G)
    return rho / np.trace(rho).real


def psd_sqrt_inv(H: np.ndarray, rel_tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Return (H^{-1/2} on the support, support projector) for PSD ``H``."""
    w, V = np.linalg.eigh((H + dag(H)) / 2)
    cut = rel_tol * max(w.max(initial=0.0), 0.0)
    keep = w > cut
    Vk = V[:, keep]
    return (Vk / np.sqrt(w[keep])) @ dag(Vk), Vk @ dag(Vk)


def logm_psd(H: np.ndarray, rel_tol: float = 1e-14) -> tuple[np.ndarray, np.ndarray]:
    """Matrix log on the support of a PSD matrix and the support projector."""
    w, V = np.linalg.eigh((H + dag(H)) / 2)
    keep = w > rel_tol * max(w.max(initial=0.0), 0.0)
    Vk = V[:, keep]
    return (Vk * np.log(w[keep])) @ dag(Vk), Vk @ dag(Vk)
