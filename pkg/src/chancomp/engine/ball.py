"""Unit Lipschitz ball intersected with the mean-zero space, and projection onto it.

The ball ``K = {x in A : ||T_i x||_op <= 1 for every constraint map T_i}``
is handled in a lifted space of pairs ``(c, w_1, ..., w_k)`` where ``c`` are
coordinates of ``x`` in an orthonormal basis of the mean-zero space ``A``
and ``w_i`` are matrices.  ``K`` is the image of the intersection of

* the graph ``{(c, T_1 B c, ..., T_k B c)}`` (a subspace; projection is a
  precomputed linear solve), and
* the product of spectral-norm unit balls on the ``w_i`` (projection is
  singular-value clipping),

so Dykstra's alternating projections between the two applies directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..linalg import unvec

DYKSTRA_TOL = 1e-10
DYKSTRA_MAX_CYCLES = 10_000


@dataclass
class DykstraResult:
    coords: np.ndarray
    cycles: int
    converged: bool
    residual: float


class LipschitzBall:
    """Projection machinery for one Lipschitz structure and norm variant.

    Parameters
    ----------
    basis : (D*D, r) array
        Columns are vec'ed orthonormal basis matrices of the mean-zero space.
    maps : list of (callable, shape)
        Each callable sends a D x D matrix to a matrix of the given shape;
        the constraint is that its operator norm stays <= 1.
    """

    def __init__(self, basis: np.ndarray, maps: Sequence[tuple[Callable, tuple[int, int]]]):
        self.basis = basis
        self.D = int(round(np.sqrt(basis.shape[0])))
        self.r = basis.shape[1]
        maps = sorted(maps, key=lambda m: m[1])  # same-shape blocks contiguous
        blocks = []
        for fn, shape in maps:
            cols = [fn(unvec(basis[:, j], (self.D, self.D))).reshape(-1) for j in range(self.r)]
            blocks.append(np.column_stack(cols) if cols else np.zeros((shape[0] * shape[1], 0)))
        self.M = np.vstack(blocks) if blocks else np.zeros((0, self.r), dtype=complex)
        self.groups = []  # (start, count, shape)
        off = 0
        for shape in sorted({m[1] for m in maps}):
            count = sum(1 for m in maps if m[1] == shape)
            self.groups.append((off, count, shape))
            off += count * shape[0] * shape[1]
        H = np.eye(self.r) + self.M.conj().T @ self.M
        Hinv = np.linalg.inv(H)
        self._K = Hinv
        self._Kt = Hinv @ self.M.conj().T

    # -- evaluation -----------------------------------------------------------
    def norm(self, c: np.ndarray) -> float:
        """Lipschitz norm of the element with coordinates ``c`` (exact)."""
        w = self.M @ c
        best = 0.0
        for start, count, (p, q) in self.groups:
            W = w[start:start + count * p * q].reshape(count, p, q)
            s = np.linalg.svd(W, compute_uv=False)
            best = max(best, float(s[:, 0].max()))
        return best

    def to_matrix(self, c: np.ndarray) -> np.ndarray:
        return unvec(self.basis @ c, (self.D, self.D))

    def normalize(self, c: np.ndarray) -> np.ndarray:
        """Scale into the ball: c / max(1, |||c|||)."""
        n = self.norm(c)
        return c / n if n > 1.0 else c

    # -- projections ----------------------------------------------------------
    def _proj_graph(self, c, w):
        cs = self._K @ c + self._Kt @ w
        return cs, self.M @ cs

    def _proj_balls(self, w):
        out = w.copy()
        for start, count, (p, q) in self.groups:
            n = count * p * q
            W = w[start:start + n].reshape(count, p, q)
            U, s, Vh = np.linalg.svd(W, full_matrices=False)
            if s.max() > 1.0:
                s = np.minimum(s, 1.0)
                out[start:start + n] = np.einsum("kij,kj,kjl->kil", U, s, Vh).reshape(-1)
        return out

    def project(self, c: np.ndarray, w: np.ndarray | None = None,
                tol: float = DYKSTRA_TOL, max_cycles: int = DYKSTRA_MAX_CYCLES) -> DykstraResult:
        """Dykstra projection of the lifted point (c, w) onto graph ∩ balls.

        The cycle order is fixed: subspace first, then the balls in order.
        Returned coordinates are those of the last subspace projection, so
        they lie exactly in the mean-zero space.
        """
        if w is None:
            w = self.M @ c
        xc, xw = c.astype(complex), w.astype(complex)
        pc, pw = np.zeros_like(xc), np.zeros_like(xw)
        qw = np.zeros_like(xw)
        yc = xc
        disp = np.inf
        for k in range(1, max_cycles + 1):
            yc, yw = self._proj_graph(xc + pc, xw + pw)
            pc = xc + pc - yc
            pw = xw + pw - yw
            nw = self._proj_balls(yw + qw)
            qw = yw + qw - nw
            disp = np.sqrt(np.linalg.norm(yc - xc) ** 2 + np.linalg.norm(nw - xw) ** 2)
            xc, xw = yc, nw
            if disp <= tol:
                return DykstraResult(yc, k, True, float(disp))
        return DykstraResult(yc, max_cycles, False, float(disp))


def constraint_maps(resource_elements, variant: str, D: int):
    """Constraint maps for the three Lipschitz norm variants."""
    els = list(resource_elements)
    if variant == "inf":
        return [((lambda x, s=s: s @ x - x @ s), (D, D)) for s in els]
    k = len(els)
    col = (lambda x: np.vstack([a @ x - x @ a for a in els]))
    if variant == "l2":
        return [(col, (k * D, D))]
    if variant == "gradient":
        row = (lambda x: np.hstack([a @ x - x @ a for a in els]))
        return [(col, (k * D, D)), (row, (D, k * D))]
    raise ValueError(variant)
