"""Quantum channels in Kraus, Choi and superoperator form.

Representation conventions (fixed once, used everywhere):

* ``superop`` acts on column-stacked matrices, ``vec(Phi(X)) = superop @ vec(X)``.
  For Kraus operators ``{K}`` it equals ``sum conj(K) kron K``.
* ``choi = sum_ij E_ij kron Phi(E_ij)`` (input factor first, unnormalized), so
  trace preservation reads ``tr_out(choi) = I`` and ``choi = sum vec(K) vec(K)^dagger``.
* The channel itself acts on states (Schroedinger picture).  The dual
  (Heisenberg) map acting on observables is ``sum K^dagger X K``, whose
  superoperator is ``superop.conj().T``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import CPTPError, InputError
from .linalg import as_matrix, dag, partial_trace, unvec, vec

CPTP_TOL = 1e-8


def superop_to_choi(S: np.ndarray) -> np.ndarray:
    d = int(round(np.sqrt(S.shape[0])))
    # axes of S4: (out col, out row, in col, in row); choi axes (in row, out row, in col, out col)
    return S.reshape(d, d, d, d).transpose(3, 1, 2, 0).reshape(d * d, d * d)


def choi_to_superop(J: np.ndarray) -> np.ndarray:
    d = int(round(np.sqrt(J.shape[0])))
    return J.reshape(d, d, d, d).transpose(3, 1, 2, 0).reshape(d * d, d * d)


def kraus_to_superop(kraus: Sequence[np.ndarray]) -> np.ndarray:
    d = kraus[0].shape[0]
    S = np.zeros((d * d, d * d), dtype=complex)
    for K in kraus:
        S += np.kron(K.conj(), K)
    return S


def choi_to_kraus(J: np.ndarray, tol: float = 1e-12) -> list[np.ndarray]:
    d = int(round(np.sqrt(J.shape[0])))
    w, V = np.linalg.eigh((J + dag(J)) / 2)
    order = np.argsort(-w, kind="stable")
    w, V = w[order], V[:, order]
    cut = tol * max(w[0], 1.0)
    return [np.sqrt(w[k]) * unvec(V[:, k], (d, d)) for k in range(len(w)) if w[k] > cut]


def superop_tensor(S1: np.ndarray, S2: np.ndarray) -> np.ndarray:
    """Superoperator of Phi1 (x) Phi2 from the factors' superoperators."""
    d1 = int(round(np.sqrt(S1.shape[0])))
    d2 = int(round(np.sqrt(S2.shape[0])))
    A = S1.reshape(d1, d1, d1, d1)
    B = S2.reshape(d2, d2, d2, d2)
    T = np.einsum("abcd,efgh->aebfcgdh", A, B)
    D = d1 * d2
    return T.reshape(D * D, D * D)


def apply_superop(S: np.ndarray, x: np.ndarray) -> np.ndarray:
    d = x.shape[0]
    return unvec(S @ vec(x), (d, d))


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """CPTP map on d x d matrices with all three representations populated."""

    dim: int
    superop: np.ndarray
    choi: np.ndarray
    kraus: tuple = field(default=())

    def dual_superop(self) -> np.ndarray:
        return self.superop.conj().T

    def apply(self, x, dual: bool = False) -> np.ndarray:
        return apply_channel(self, x, dual=dual)

    def __repr__(self):
        return f"QuantumChannel(dim={self.dim}, kraus_rank={len(self.kraus)})"


def validate_choi(J: np.ndarray, d: int, tol: float = CPTP_TOL) -> None:
    w = np.linalg.eigvalsh((J + dag(J)) / 2)
    herm = np.abs(J - dag(J)).max()
    if herm > tol:
        raise CPTPError(f"Choi matrix not Hermitian (residual {herm:.3e})", residual=herm)
    if w[0] < -tol * max(1.0, w[-1]):
        raise CPTPError(f"Choi matrix not PSD (min eigenvalue {w[0]:.3e})", residual=-w[0])
    tp = np.abs(partial_trace(J, (d, d), keep=[0]) - np.eye(d)).max()
    if tp > tol:
        raise CPTPError(f"map is not trace preserving (residual {tp:.3e})", residual=tp)


def make_channel(kraus, tol: float = CPTP_TOL) -> QuantumChannel:
    """Build a validated channel from Kraus operators."""
    ks = [as_matrix(K, square=True, name="Kraus operator") for K in kraus]
    if not ks:
        raise InputError("need at least one Kraus operator")
    d = ks[0].shape[0]
    if any(K.shape != (d, d) for K in ks):
        raise InputError("Kraus operators must share one dimension")
    resid = np.linalg.norm(sum(dag(K) @ K for K in ks) - np.eye(d), 2)
    if resid > tol:
        raise CPTPError(f"sum K^dagger K deviates from identity by {resid:.3e}", residual=resid)
    S = kraus_to_superop(ks)
    J = superop_to_choi(S)
    validate_choi(J, d, tol)
    return QuantumChannel(d, S, J, tuple(ks))


def channel_from_superop(S, tol: float = CPTP_TOL) -> QuantumChannel:
    """Build a validated channel from a superoperator (e.g. a matrix exponential)."""
    S = as_matrix(S, square=True, name="superoperator")
    d = int(round(np.sqrt(S.shape[0])))
    if d * d != S.shape[0]:
        raise InputError(f"superoperator size {S.shape[0]} is not a square number")
    J = superop_to_choi(S)
    validate_choi(J, d, tol)
    return QuantumChannel(d, S, J, tuple(choi_to_kraus(J)))


def apply_channel(channel: QuantumChannel, x, dual: bool = False) -> np.ndarray:
    """Schroedinger action, or the Heisenberg (dual) action when ``dual``."""
    x = as_matrix(x, square=True, name="x")
    if x.shape[0] != channel.dim:
        raise InputError(f"input dimension {x.shape[0]} != channel dimension {channel.dim}")
    S = channel.dual_superop() if dual else channel.superop
    return apply_superop(S, x)


def identity_channel(d: int) -> QuantumChannel:
    return make_channel([np.eye(d)])


def unitary_channel(U) -> QuantumChannel:
    return make_channel([U])


def compose(*channels: QuantumChannel) -> QuantumChannel:
    """``compose(A, B)`` is A after B, i.e. ``A(B(rho))``."""
    if not channels:
        raise InputError("compose needs at least one channel")
    d = channels[0].dim
    if any(c.dim != d for c in channels):
        raise InputError("compose: dimension mismatch")
    S = channels[0].superop
    for c in channels[1:]:
        S = S @ c.superop
    return channel_from_superop(S)


def mix(channels: Sequence[QuantumChannel], weights) -> QuantumChannel:
    p = np.asarray(weights, dtype=float)
    if len(p) != len(channels) or np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise InputError("mix weights must be a probability vector matching the channels")
    d = channels[0].dim
    if any(c.dim != d for c in channels):
        raise InputError("mix: dimension mismatch")
    S = sum(pi * c.superop for pi, c in zip(p, channels))
    return channel_from_superop(S)


def tensor(*channels: QuantumChannel) -> QuantumChannel:
    if not channels:
        raise InputError("tensor needs at least one channel")
    S = channels[0].superop
    for c in channels[1:]:
        S = superop_tensor(S, c.superop)
    return channel_from_superop(S)


def combine(kind: str, channels: Sequence[QuantumChannel], weights=None) -> QuantumChannel:
    if kind == "compose":
        return compose(*channels)
    if kind == "mix":
        if weights is None:
            raise InputError("mix requires weights")
        return mix(channels, weights)
    if kind == "tensor":
        return tensor(*channels)
    raise InputError(f"unknown combination kind {kind!r}")


def unitary_mixture(unitaries, mu) -> QuantumChannel:
    """Phi_mu(rho) = sum_i mu_i U_i rho U_i^dagger."""
    us = [as_matrix(U, square=True, name="unitary") for U in unitaries]
    p = np.asarray(mu, dtype=float)
    if len(p) != len(us):
        raise InputError("one weight per unitary required")
    if np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise InputError("weights must form a probability distribution")
    for U in us:
        if np.abs(dag(U) @ U - np.eye(U.shape[0])).max() > 1e-9:
            raise InputError("unitary_mixture received a non-unitary matrix")
    return make_channel([np.sqrt(pi) * U for pi, U in zip(p, us) if pi > 0])


def amplify(channel: QuantumChannel, m: int) -> QuantumChannel:
    """id_m (x) Phi."""
    if m == 1:
        return channel
    return channel_from_superop(superop_tensor(np.eye(m * m, dtype=complex), channel.superop))


def depolarizing(d: int) -> QuantumChannel:
    """Completely depolarizing channel rho -> tr(rho) I/d."""
    S = np.outer(vec(np.eye(d)), vec(np.eye(d)).conj()) / d
    return channel_from_superop(S)


# -- JSON I/O ---------------------------------------------------------------

def encode_matrix(M: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M, dtype=complex)]


def decode_matrix(rows) -> np.ndarray:
    def entry(e):
        if isinstance(e, (list, tuple)):
            if len(e) != 2:
                raise InputError(f"complex entries are [re, im] pairs, got {e!r}")
            return complex(float(e[0]), float(e[1]))
        return complex(float(e))

    try:
        M = np.array([[entry(e) for e in row] for row in rows], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed matrix: {exc}") from exc
    return as_matrix(M)


def channel_to_json(channel: QuantumChannel) -> dict:
    return {"dim": channel.dim, "kraus": [encode_matrix(K) for K in channel.kraus]}


def channel_from_json(obj: dict) -> QuantumChannel:
    if not isinstance(obj, dict) or "kraus" not in obj or "dim" not in obj:
        raise InputError("channel file needs 'dim' and 'kraus' fields")
    ks = [decode_matrix(K) for K in obj["kraus"]]
    ch = make_channel(ks)
    if ch.dim != int(obj["dim"]):
        raise InputError(f"declared dim {obj['dim']} != Kraus dimension {ch.dim}")
    return ch


def load_channel(path) -> QuantumChannel:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return channel_from_json(obj)
