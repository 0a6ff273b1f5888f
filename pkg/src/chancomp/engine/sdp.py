"""Dense primal-dual interior-point method for small complex semidefinite programs.

Standard form over a block-diagonal Hermitian variable ``X = diag(X_1, ..., X_p)``::

    primal:  min  <C, X>          s.t.  <A_i, X> = b_i,  X >= 0
    dual:    max  b . y           s.t.  S = C - sum_i y_i A_i >= 0

with real ``b`` and ``y``; ``<A, X> = Re tr(A X)`` summed over blocks (all
data Hermitian).  The search direction is the HKM direction with a Mehrotra
predictor-corrector step.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConvergenceError

GAP_TOL = 1e-8
MAX_ITER = 200
FEAS_TOL = 1e-8
FALLBACK_GAP = 1e-6    # accept the best iterate on numerical breakdown if its gap is this small


@dataclass
class SDPResult:
    primal: float
    dual: float
    gap: float
    X: list
    y: np.ndarray
    S: list
    iterations: int


def _herm(M):
    return (M + M.conj().T) / 2


def _inner(A, X):
    # Re tr(A X) for Hermitian A: sum of elementwise conj(A) * X, real part
    return float(np.real(np.vdot(A, X)))


def _step_length(X, dX):
    """Largest alpha in (0, 1e6] with X + alpha dX >= 0 (X positive definite)."""
    L = np.linalg.cholesky(X)
    Li = np.linalg.inv(L)
    w = np.linalg.eigvalsh(_herm(Li @ dX @ Li.conj().T))
    lo = w[0]
    return np.inf if lo >= 0 else -1.0 / lo


class BlockSDP:
    """Problem data: ``C`` and each ``A_i`` are lists of Hermitian blocks."""

    def __init__(self, C_blocks, A_blocks, b):
        self.C = [np.asarray(c, dtype=complex) for c in C_blocks]
        # A stored per block as an (m, n_k, n_k) stack
        self.m = len(b)
        self.A = [np.stack([np.asarray(A_blocks[i][k], dtype=complex) for i in range(self.m)])
                  for k in range(len(self.C))]
        self.Aflat = [Ak.reshape(self.m, -1) for Ak in self.A]
        self.b = np.asarray(b, dtype=float)

    def op(self, X):
        """A(X)_i = sum_k Re tr(A_ik X_k)."""
        out = np.zeros(self.m)
        for Af, Xk in zip(self.Aflat, X):
            # tr(A X) = sum_{ab} A_ab X_ba = vec(A) . vec(X^T)
            out += np.real(Af @ Xk.T.reshape(-1))
        return out

    def adj(self, y):
        return [np.einsum("i,iab->ab", y, Ak) for Ak in self.A]

    def schur(self, X, Sinv):
        M = np.zeros((self.m, self.m))
        for Ak, Af, Xk, Sk in zip(self.A, self.Aflat, X, Sinv):
            T = np.matmul(np.matmul(Xk, Ak), Sk)  # (m, n, n): X A_j S^{-1}
            # M_ij = Re tr(A_i T_j) = Re sum_ab A_i,ab T_j,ba
            M += np.real(Af @ T.transpose(0, 2, 1).reshape(self.m, -1).T)
        return (M + M.T) / 2

    def solve(self, gap_tol: float = GAP_TOL, max_iter: int = MAX_ITER,
              feas_tol: float = FEAS_TOL) -> SDPResult:
        """Run the interior-point iteration.

        Stops when the relative gap is below ``gap_tol`` and both relative
        infeasibilities are below ``feas_tol``.  Near the optimum the Schur
        system can become too ill-conditioned to keep improving; the best
        nearly feasible iterate is then returned if its absolute gap is at
        most 1e-6, otherwise ``ConvergenceError`` is raised.
        """
        n_tot = sum(c.shape[0] for c in self.C)
        scale = max(1.0, max(np.abs(c).max() for c in self.C), np.abs(self.b).max())
        X = [scale * np.eye(c.shape[0], dtype=complex) for c in self.C]
        S = [scale * np.eye(c.shape[0], dtype=complex) for c in self.C]
        y = np.zeros(self.m)
        bnorm = 1.0 + np.linalg.norm(self.b)
        cnorm = 1.0 + max(np.linalg.norm(c) for c in self.C)
        pobj = dobj = np.nan
        best = None
        it = 0
        try:
            for it in range(1, max_iter + 1):
                done, pobj, dobj, gap, pinf, dinf = self._status(X, y, S, bnorm, cnorm, gap_tol, feas_tol)
                if done:
                    return SDPResult(pobj, dobj, gap, X, y, S, it)
                if pinf <= 100 * feas_tol and dinf <= 100 * feas_tol and (best is None or gap < best.gap):
                    best = SDPResult(pobj, dobj, gap, X, y, S, it)
                X, y, S = self._step(X, y, S, n_tot)
        except np.linalg.LinAlgError:
            pass
        if best is not None and best.gap <= FALLBACK_GAP:
            return best
        raise ConvergenceError(
            f"interior-point method stopped after {it} iterations "
            f"(primal {pobj:.10g}, dual {dobj:.10g})",
            last_iterate={"X": X, "y": y, "S": S, "primal": pobj, "dual": dobj})

    def _status(self, X, y, S, bnorm, cnorm, gap_tol, feas_tol):
        rp = self.b - self.op(X)
        ATy = self.adj(y)
        Rd = [c - a - s for c, a, s in zip(self.C, ATy, S)]
        pobj = sum(_inner(c, x) for c, x in zip(self.C, X))
        dobj = float(self.b @ y)
        pinf = np.linalg.norm(rp) / bnorm
        dinf = max(np.linalg.norm(r) for r in Rd) / cnorm
        gap = abs(pobj - dobj)
        done = gap <= gap_tol * (1 + abs(pobj) + abs(dobj)) and pinf <= feas_tol and dinf <= feas_tol
        return done, pobj, dobj, gap, pinf, dinf

    def _step(self, X, y, S, n_tot):
        """One Mehrotra predictor-corrector step along the HKM direction."""
        rp = self.b - self.op(X)
        ATy = self.adj(y)
        Rd = [c - a - s for c, a, s in zip(self.C, ATy, S)]
        mu = sum(_inner(x, s) for x, s in zip(X, S)) / n_tot
        Sinv = [np.linalg.inv(s) for s in S]
        M = self.schur(X, Sinv)
        try:
            cf = np.linalg.cholesky(M)
            solve = lambda r: np.linalg.solve(cf.conj().T, np.linalg.solve(cf, r))
        except np.linalg.LinAlgError:
            solve = lambda r: np.linalg.lstsq(M, r, rcond=None)[0]
        XRdS = [x @ r @ si for x, r, si in zip(X, Rd, Sinv)]

        def direction(Rc):
            # Rc: list of sigma*mu*I - X S - corrector term, per block
            RcS = [r @ si for r, si in zip(Rc, Sinv)]
            dy = solve(rp - self.op(RcS) + self.op(XRdS))
            ATdy = self.adj(dy)
            dS = [r - a for r, a in zip(Rd, ATdy)]
            dX = [_herm(rs - x @ ds @ si) for rs, x, ds, si in zip(RcS, X, dS, Sinv)]
            return dX, dy, dS

        XS = [x @ s for x, s in zip(X, S)]
        dXa, dya, dSa = direction([-xs for xs in XS])
        ap = min(1.0, min(_step_length(x, d) for x, d in zip(X, dXa)))
        ad = min(1.0, min(_step_length(s, d) for s, d in zip(S, dSa)))
        mu_aff = sum(_inner(x + ap * dx, s + ad * ds)
                     for x, dx, s, ds in zip(X, dXa, S, dSa)) / n_tot
        sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3
        Rc = [sigma * mu * np.eye(x.shape[0]) - xs - dx @ ds
              for x, xs, dx, ds in zip(X, XS, dXa, dSa)]
        dX, dy, dS = direction(Rc)
        ap = min(1.0, 0.98 * min(_step_length(x, d) for x, d in zip(X, dX)))
        ad = min(1.0, 0.98 * min(_step_length(s, d) for s, d in zip(S, dS)))
        X = [_herm(x + ap * d) for x, d in zip(X, dX)]
        S = [_herm(s + ad * d) for s, d in zip(S, dS)]
        y = y + ad * dy
        return X, y, S


def hermitian_basis(n: int) -> list[np.ndarray]:
    """Orthonormal (Hilbert-Schmidt) basis of n x n Hermitian matrices."""
    out = []
    for j in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[j, j] = 1
        out.append(E)
    r = 1 / np.sqrt(2)
    for j in range(n):
        for k in range(j + 1, n):
            E = np.zeros((n, n), dtype=complex)
            E[j, k] = E[k, j] = r
            out.append(E)
            F = np.zeros((n, n), dtype=complex)
            F[j, k] = -1j * r
            F[k, j] = 1j * r
            out.append(F)
    return out
