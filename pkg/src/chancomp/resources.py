"""Resource sets, commutants, conditional expectations and Lipschitz norms.

A discrete resource set holds unitaries and is closed under adjoints with
the identity adjoined.  A continuous resource set holds self-adjoint
generators used as given.  ``build_structure`` derives the commutant, the
mean-zero space and the trace-preserving conditional expectation onto the
commutant.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .channels import QuantumChannel, channel_from_superop, decode_matrix, encode_matrix
from .errors import ConditioningError, InputError
from .linalg import (
    as_matrix,
    dag,
    default_rank_tol,
    embed,
    is_hermitian,
    is_unitary,
    nullspace_basis,
    operator_norm,
    unvec,
    vec,
)

KINDS = ("discrete", "continuous")
VARIANTS = ("inf", "l2", "gradient")


@dataclass(frozen=True, eq=False)
class ResourceSet:
    kind: str
    elements: tuple
    dim: int
    symmetrized: bool = False

    @property
    def active(self) -> tuple:
        """Elements with a non-zero commutator action (scalars dropped)."""
        out = []
        for s in self.elements:
            c = np.trace(s) / self.dim
            if np.abs(s - c * np.eye(self.dim)).max() > 1e-12:
                out.append(s)
        return tuple(out)

    def __repr__(self):
        return f"ResourceSet(kind={self.kind!r}, dim={self.dim}, size={len(self.elements)})"


def _dedupe(mats: Sequence[np.ndarray], tol: float = 1e-9) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for m in mats:
        if not any(np.abs(m - o).max() <= tol for o in out):
            out.append(m)
    return out


def make_resource(kind: str, elements, symmetrize: bool = True) -> ResourceSet:
    """Validate a resource list; discrete sets are closed under adjoint and get I adjoined."""
    if kind not in KINDS:
        raise InputError(f"resource kind must be one of {KINDS}, got {kind!r}")
    els = [as_matrix(e, square=True, name="resource element") for e in elements]
    if not els:
        raise InputError("resource set is empty")
    d = els[0].shape[0]
    if any(e.shape != (d, d) for e in els):
        raise InputError("resource elements must share one dimension")
    if kind == "discrete":
        for e in els:
            if not is_unitary(e):
                raise InputError("discrete resources must be unitary")
        if symmetrize:
            els = _dedupe([np.eye(d, dtype=complex)] + els + [dag(e) for e in els])
    else:
        for e in els:
            if not is_hermitian(e):
                raise InputError("continuous resources must be self-adjoint")
        els = _dedupe(els)
    return ResourceSet(kind, tuple(els), d, symmetrized=(kind == "discrete" and symmetrize))


def ad_superop(s: np.ndarray) -> np.ndarray:
    """Superoperator of x -> [s, x] under column stacking."""
    d = s.shape[0]
    eye = np.eye(d)
    return np.kron(eye, s) - np.kron(s.T, eye)


@dataclass(frozen=True, eq=False)
class LipschitzStructure:
    """Commutant, mean-zero space and conditional expectation of a resource set.

    ``ambient_basis`` is set when the algebra is a proper *-subalgebra of
    M_d (e.g. diagonal matrices); bases are then taken inside it.
    """

    resource: ResourceSet
    commutant_basis: tuple
    mean_zero_basis: tuple
    E_fix: QuantumChannel
    ambient_basis: tuple | None = None
    tol: float = 0.0
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.resource.dim

    def mean_zero_matrix(self) -> np.ndarray:
        """Columns = vec of the orthonormal mean-zero basis."""
        if "B" not in self._cache:
            d2 = self.dim ** 2
            self._cache["B"] = (np.column_stack([vec(b) for b in self.mean_zero_basis])
                                if self.mean_zero_basis else np.zeros((d2, 0), dtype=complex))
        return self._cache["B"]

    def commutant_matrix(self) -> np.ndarray:
        if "C" not in self._cache:
            d2 = self.dim ** 2
            self._cache["C"] = (np.column_stack([vec(b) for b in self.commutant_basis])
                                if self.commutant_basis else np.zeros((d2, 0), dtype=complex))
        return self._cache["C"]


def _null_coords(A: np.ndarray, tol: float) -> list[np.ndarray]:
    basis = nullspace_basis(A, tol)
    looser = nullspace_basis(A, tol * 10)
    if len(basis) != len(looser):
        raise ConditioningError(
            f"commutant dimension unstable: {len(basis)} at tol={tol:.1e}, "
            f"{len(looser)} at tol={10 * tol:.1e}")
    return basis


def build_structure(S: ResourceSet, ambient=None, tol: float | None = None) -> LipschitzStructure:
    """Commutant as the joint null space of the commutator superoperators.

    ``ambient`` optionally lists an orthonormal (Hilbert-Schmidt) basis of a
    *-subalgebra N of M_d invariant under the resources; the commutant and
    mean-zero space are then computed inside N.
    """
    d = S.dim
    d2 = d * d
    if tol is None:
        tol = default_rank_tol(d2)
    active = S.active
    if ambient is None:
        N = np.eye(d2, dtype=complex)
        amb = None
    else:
        amb = tuple(as_matrix(a, square=True) for a in ambient)
        N = np.column_stack([vec(a) for a in amb])
    if active:
        stacked = np.vstack([ad_superop(s) for s in active]) @ N
        coords = _null_coords(stacked, tol)
    else:
        coords = [e for e in np.eye(N.shape[1], dtype=complex)]
    C = np.column_stack([N @ c for c in coords]) if coords else np.zeros((d2, 0), dtype=complex)
    # mean-zero space: orthogonal complement of the commutant inside N
    if C.shape[1]:
        mz_coords = nullspace_basis(dag(C) @ N, tol) if C.shape[1] < N.shape[1] else []
    else:
        mz_coords = [e for e in np.eye(N.shape[1], dtype=complex)]
    comm = tuple(unvec(C[:, k], (d, d)) for k in range(C.shape[1]))
    mz = tuple(unvec(N @ c, (d, d)) for c in mz_coords)
    if len(comm) + len(mz) != N.shape[1]:
        raise ConditioningError("commutant and mean-zero dimensions do not add up")
    P = C @ dag(C)
    E = channel_from_superop(P)
    return LipschitzStructure(S, comm, mz, E, amb, tol)


def mean_zero_project(x, L: LipschitzStructure) -> np.ndarray:
    """x - E_fix^*(x); the result is HS-orthogonal to the commutant."""
    x = as_matrix(x, square=True, name="x")
    if x.shape[0] != L.dim:
        raise InputError("dimension mismatch")
    C = L.commutant_matrix()
    v = vec(x)
    return unvec(v - C @ (dag(C) @ v), x.shape)


def gradient_form(x: np.ndarray, jumps: Sequence[np.ndarray]) -> np.ndarray:
    """Gamma_L(x, x) = sum_j [a_j, x]^dagger [a_j, x]."""
    out = np.zeros_like(x, dtype=complex)
    for a in jumps:
        c = a @ x - x @ a
        out += dag(c) @ c
    return out


def lipschitz_norm(x, L: LipschitzStructure | ResourceSet, variant: str = "inf") -> float:
    """Resource Lipschitz seminorm in one of three variants.

    ``inf``: max_s ||[s, x]||; ``l2``: ||(sum_s |[s, x]|^2)^(1/2)||;
    ``gradient``: max(||Gamma(x,x)||, ||Gamma(x*,x*)||)^(1/2) for self-adjoint jumps.
    """
    R = L.resource if isinstance(L, LipschitzStructure) else L
    x = as_matrix(x, square=True, name="x")
    if x.shape[0] != R.dim:
        raise InputError("dimension mismatch")
    if variant not in VARIANTS:
        raise InputError(f"variant must be one of {VARIANTS}")
    els = R.active
    if not els:
        return 0.0
    if variant == "inf":
        return max(operator_norm(s @ x - x @ s) for s in els)
    if variant == "l2":
        return float(np.sqrt(max(operator_norm(gradient_form(x, els)), 0.0)))
    if R.kind != "continuous":
        raise InputError("gradient variant requires a continuous (self-adjoint) resource set")
    g1 = operator_norm(gradient_form(x, els))
    g2 = operator_norm(gradient_form(dag(x), els))
    return float(np.sqrt(max(g1, g2)))


def join_resources(parts: Sequence[ResourceSet]) -> ResourceSet:
    """S_1 v S_2 v ...: each element embedded with identities on the other factors."""
    parts = list(parts)
    if len(parts) < 2:
        raise InputError("join needs at least two resource sets")
    kinds = {p.kind for p in parts}
    if len(kinds) != 1:
        raise InputError("cannot join resource sets of different kinds")
    dims = [p.dim for p in parts]
    els = []
    for j, p in enumerate(parts):
        els.extend(embed(s, j, dims) for s in p.elements)
    kind = parts[0].kind
    sym = all(p.symmetrized for p in parts)
    return ResourceSet(kind, tuple(_dedupe(els)), int(np.prod(dims)), symmetrized=sym)


def amplify_resource(S: ResourceSet, m: int) -> ResourceSet:
    """Resources I_m (x) s acting on M_m(M_d)."""
    if m == 1:
        return S
    eye = np.eye(m, dtype=complex)
    return ResourceSet(S.kind, tuple(np.kron(eye, s) for s in S.elements), m * S.dim, S.symmetrized)


def diagonal_basis(d: int) -> list[np.ndarray]:
    out = []
    for k in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[k, k] = 1
        out.append(e)
    return out


# -- JSON I/O ---------------------------------------------------------------

def resource_to_json(S: ResourceSet) -> dict:
    return {"kind": S.kind, "dim": S.dim, "elements": [encode_matrix(e) for e in S.elements]}


def resource_from_json(obj: dict) -> ResourceSet:
    if not isinstance(obj, dict) or not {"kind", "dim", "elements"} <= set(obj):
        raise InputError("resource file needs 'kind', 'dim' and 'elements'")
    R = make_resource(obj["kind"], [decode_matrix(e) for e in obj["elements"]])
    if R.dim != int(obj["dim"]):
        raise InputError(f"declared dim {obj['dim']} != element dimension {R.dim}")
    return R


def load_resource(path) -> ResourceSet:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return resource_from_json(obj)
