"""Finite matrix groups modulo global phase: closure, word lengths, statistics.

Unitary gate sets are typically finite only modulo U(1), so group elements
are stored in a canonical phase (first significant entry real positive) and
hashed on a 1e-8 grid.  Word lengths with respect to the symmetric
generating set are the breadth-first layers of the Cayley graph.  The
stationary measure of the symmetric random walk on a finite group is taken
to be the uniform measure on the closure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InputError, LemmaViolation
from .linalg import as_matrix, dag, fix_phase, is_unitary

HASH_GRID = 1e-8
DEFAULT_MAX_ORDER = 4096


class GroupTooLargeError(InputError):
    """Closure exceeded ``max_order``: the set is not finite modulo phase (or too large)."""


def canonical(U: np.ndarray) -> np.ndarray:
    return fix_phase(U)


def _key(U: np.ndarray) -> bytes:
    q = np.round(np.concatenate([U.real.ravel(), U.imag.ravel()]) / HASH_GRID).astype(np.int64)
    q[q == 0] = 0  # no negative zero
    return q.tobytes()


@dataclass(frozen=True, eq=False)
class GroupTable:
    """Closure of a symmetric generating set; element 0 is the identity."""

    elements: tuple
    generators: tuple  # indices into elements (identity excluded)
    word_lengths: np.ndarray
    _index: dict = field(repr=False, default_factory=dict)
    _cache: dict = field(repr=False, default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def index_of(self, U: np.ndarray) -> int:
        k = self._index.get(_key(canonical(U)))
        if k is None:
            raise KeyError("matrix is not an element of the group (modulo phase)")
        return k

    def product(self, i: int, j: int) -> int:
        return self.index_of(self.elements[i] @ self.elements[j])

    @property
    def table(self) -> np.ndarray:
        """Multiplication table: ``table[i, j]`` is the index of g_i g_j."""
        if "table" not in self._cache:
            n = self.order
            T = np.empty((n, n), dtype=np.int64)
            for i in range(n):
                prods = np.matmul(self.elements[i], np.stack(self.elements))
                for j in range(n):
                    T[i, j] = self.index_of(prods[j])
            self._cache["table"] = T
        return self._cache["table"]

    @property
    def inverse(self) -> np.ndarray:
        if "inv" not in self._cache:
            self._cache["inv"] = np.array([self.index_of(dag(g)) for g in self.elements])
        return self._cache["inv"]

    def __repr__(self):
        return f"GroupTable(order={self.order}, dim={self.dim}, generators={len(self.generators)})"


def group_closure(generators: Sequence[np.ndarray], max_order: int = DEFAULT_MAX_ORDER) -> GroupTable:
    """Breadth-first closure of the symmetrized generating set, modulo phase."""
    gens = [as_matrix(g, square=True, name="generator") for g in generators]
    if not gens:
        raise InputError("need at least one generator")
    d = gens[0].shape[0]
    if any(g.shape != (d, d) for g in gens):
        raise InputError("generators must share one dimension")
    if any(not is_unitary(g) for g in gens):
        raise InputError("generators must be unitary")
    eye = np.eye(d, dtype=complex)
    elements = [eye]
    index = {_key(eye): 0}
    gen_idx: list[int] = []
    # symmetrize; scalar generators (identity mod phase) carry no length
    sym: list[np.ndarray] = []
    for g in gens + [dag(g) for g in gens]:
        c = canonical(g)
        k = _key(c)
        if k == _key(eye) or any(_key(s) == k for s in sym):
            continue
        sym.append(c)
    lengths = [0]
    frontier = [0]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for i in frontier:
            for s in sym:
                c = canonical(s @ elements[i])
                k = _key(c)
                if k not in index:
                    index[k] = len(elements)
                    elements.append(c)
                    lengths.append(depth)
                    nxt.append(index[k])
                    if len(elements) > max_order:
                        raise GroupTooLargeError(
                            f"closure exceeds max_order={max_order}; group not finite modulo phase?")
        frontier = nxt
    for s in sym:
        gen_idx.append(index[_key(s)])
    return GroupTable(tuple(elements), tuple(gen_idx), np.array(lengths, dtype=np.int64), index)


def length_statistics(T: GroupTable) -> dict:
    """Mean word length under the uniform measure, diameter and histogram."""
    L = T.word_lengths
    hist = np.bincount(L).tolist()
    return {"order": T.order, "mean": float(L.sum()) / T.order,
            "diameter": int(L.max()), "histogram": hist}


def regular_representation(T: GroupTable) -> list[np.ndarray]:
    """Left-translation permutation matrices lambda_g with lambda_g e_h = e_{gh}."""
    n = T.order
    tab = T.table
    out = []
    for g in range(n):
        P = np.zeros((n, n), dtype=complex)
        P[tab[g], np.arange(n)] = 1
        out.append(P)
    return out


def length_witness(T: GroupTable) -> np.ndarray:
    """Diagonal matrix of f(g) = mean length - length(g) on the regular embedding."""
    L = T.word_lengths.astype(float)
    return np.diag(L.mean() - L).astype(complex)


def commutative_structure(T: GroupTable):
    """Lipschitz structure of l_inf(G): diagonal matrices with translation resources."""
    from .resources import build_structure, diagonal_basis, make_resource

    lam = regular_representation(T)
    S = make_resource("discrete", [lam[g] for g in T.generators] or [np.eye(T.order)])
    return build_structure(S, ambient=diagonal_basis(T.order))


def verify_expected_length_commutative(T: GroupTable, opts=None, tol: float = 1e-3) -> dict:
    """Expected length of l_inf(G) against the mean word length.

    The witness f(g) = mean - length(g) has Lipschitz norm <= 1 and sup norm
    >= mean, and every mean-zero f with unit Lipschitz norm satisfies
    |f(h)| <= mean length, so the two must agree.
    """
    from .engine import SolveOptions, expected_length
    from .resources import lipschitz_norm

    if T.order > 64:
        raise InputError("commutative embedding limited to |G| <= 64")
    stats = length_statistics(T)
    mean = stats["mean"]
    if T.order == 1:
        return {"order": 1, "mean": 0.0, "lower": 0.0, "upper": 0.0,
                "witness_value": 0.0, "witness_lipschitz": 0.0, "passed": True}
    L = commutative_structure(T)
    f = length_witness(T)
    lip = lipschitz_norm(f, L)
    wval = float(np.abs(np.diag(f)).max()) / max(lip, 1.0)
    est = expected_length(L, opts or SolveOptions(), seeds=[f])
    report = {"order": T.order, "mean": mean, "lower": est.lower, "upper": est.upper,
              "witness_value": wval, "witness_lipschitz": lip,
              "passed": bool(est.lower >= mean - tol and est.upper <= mean + tol
                             and wval >= mean - 1e-12)}
    if not report["passed"]:
        raise LemmaViolation(f"expected length interval [{est.lower}, {est.upper}] "
                             f"misses mean word length {mean}", counterexample=report)
    return report


def averaging_channel_bound(T: GroupTable, f, opts=None, tol: float = 1e-9) -> dict:
    """Complexity of sum_g f(g) Ad_g against the mean and maximal word length."""
    from .channels import unitary_mixture
    from .engine import SolveOptions, complexity_estimate
    from .resources import build_structure, make_resource

    p = np.asarray(f, dtype=float)
    if p.shape != (T.order,) or np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise InputError("f must be a probability vector over the group elements")
    stats = length_statistics(T)
    mean_len = float(p @ T.word_lengths)
    gens = [T.elements[g] for g in T.generators] or [np.eye(T.dim)]
    L = build_structure(make_resource("discrete", gens))
    keep = [k for k in range(T.order) if p[k] > 0]
    phi = unitary_mixture([T.elements[k] for k in keep], p[keep])
    est = complexity_estimate(phi, L, opts or SolveOptions())
    report = {"weighted_length": mean_len, "diameter": stats["diameter"],
              "lower": est.lower, "upper": est.upper,
              "passed": bool(est.lower <= est.upper + tol and est.upper <= mean_len + tol
                             and mean_len <= stats["diameter"] + tol)}
    if not report["passed"]:
        raise LemmaViolation("averaging channel exceeds its word-length bound", counterexample=report)
    return report


def cyclic_generator(n: int) -> np.ndarray:
    """diag(1, w, ..., w^{n-1}) with w = exp(2 pi i / n); generates Z_n."""
    if n < 1:
        raise InputError("cyclic order must be positive")
    return np.diag(np.exp(2j * np.pi * np.arange(n) / n))


def preset_group(name: str, max_order: int = DEFAULT_MAX_ORDER) -> GroupTable:
    """Named examples: ``Z<n>`` (cyclic, S = {g, g^-1}), ``S3`` (adjacent
    transpositions as 3x3 permutation matrices), ``pauli1``, ``pauli2``
    (Pauli groups modulo phase with single-site generators)."""
    from .linalg import PAULI_X, PAULI_Y, PAULI_Z, embed

    if name.startswith("Z") and name[1:].isdigit():
        n = int(name[1:])
        if n < 1:
            raise InputError("cyclic order must be positive")
        return group_closure([cyclic_generator(n)], max_order)
    if name == "S3":
        s1 = np.eye(3)[[1, 0, 2]].astype(complex)
        s2 = np.eye(3)[[0, 2, 1]].astype(complex)
        return group_closure([s1, s2], max_order)
    if name in ("pauli1", "pauli2"):
        n = int(name[-1])
        gens = [embed(P, j, [2] * n) for j in range(n) for P in (PAULI_X, PAULI_Y, PAULI_Z)]
        return group_closure(gens, max_order)
    raise InputError(f"unknown group preset {name!r}")
