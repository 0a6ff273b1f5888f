"""Quantum Markov semigroups, return times and complexity-growth trajectories.

Two kinds of generators are supported:

* ``discrete``: G = Phi_mu - id for a unitary mixture Phi_mu = sum_i mu_i Ad_{U_i};
* ``lindblad``: G(rho) = sum_j (a_j rho a_j - (a_j^2 rho + rho a_j^2)/2) with
  self-adjoint jumps a_j (the generator is its own adjoint).

The semigroup is T_t = exp(tG); its fixed-point algebra must coincide with
the commutant of the resources, so T_t converges to the conditional
expectation E_fix.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .channels import QuantumChannel, channel_from_superop, kraus_to_superop
from .engine import ComplexityEstimate, SolveOptions, complexity_estimate, diamond_norm, expected_length
from .errors import CPTPError, InputError, NoReturnTimeError
from .linalg import PAULI_X, PAULI_Y, PAULI_Z, as_matrix, fix_phase, is_unitary
from .resources import LipschitzStructure, ResourceSet, build_structure, make_resource

SAMPLE_TIMES = (0.1, 1.0, 10.0)
TIME_RESOLUTION = 1e-4
GAP_TOL = 1e-9

CLAIM_LINEAR = "C(T_t) <= t for unitary mixtures of resources"
CLAIM_PROFILE = "linear growth below k(1/2), plateau in [EL/2, 3EL/2] above"


@dataclass(frozen=True, eq=False)
class SemigroupFamily:
    kind: str
    generator: np.ndarray          # Schroedinger-side superoperator
    structure: LipschitzStructure
    E_fix: QuantumChannel
    unitaries: tuple = ()
    mu: tuple = ()
    linear_bound: bool = False     # every mixed unitary is a resource: C(T_t) <= t
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.structure.dim


def lindblad_generator(jumps: Sequence[np.ndarray], d: int) -> np.ndarray:
    """Superoperator of rho -> sum_j a_j rho a_j - (a_j^2 rho + rho a_j^2)/2."""
    eye = np.eye(d)
    G = np.zeros((d * d, d * d), dtype=complex)
    for a in jumps:
        a2 = a @ a
        G += np.kron(a.conj(), a) - 0.5 * (np.kron(eye, a2) + np.kron(a2.T, eye))
    return G


def _same_up_to_phase(U, V) -> bool:
    return np.abs(fix_phase(U) - fix_phase(V)).max() <= 1e-9


def make_semigroup(kind: str, resource: ResourceSet, mu=None, unitaries=None) -> SemigroupFamily:
    """Assemble and validate the generator.

    For ``discrete`` the mixture defaults to the uniform distribution over
    the (symmetrized) resource elements; ``unitaries`` may override the list.
    """
    d = resource.dim
    if kind == "discrete":
        if resource.kind != "discrete":
            raise InputError("discrete semigroup needs a discrete resource set")
        us = [as_matrix(U, square=True, name="unitary") for U in (unitaries if unitaries is not None
                                                                  else resource.elements)]
        if any(not is_unitary(U) for U in us):
            raise InputError("mixture elements must be unitary")
        p = np.full(len(us), 1.0 / len(us)) if mu is None else np.asarray(mu, dtype=float)
        if p.shape != (len(us),) or np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
            raise InputError("mu must be a probability vector over the unitaries")
        S = kraus_to_superop([math.sqrt(pi) * U for pi, U in zip(p, us) if pi > 0])
        G = S - np.eye(d * d)
        in_res = all(any(_same_up_to_phase(U, s) for s in resource.elements)
                     for U, pi in zip(us, p) if pi > 0)
        extra = dict(unitaries=tuple(us), mu=tuple(float(x) for x in p), linear_bound=in_res)
    elif kind == "lindblad":
        if resource.kind != "continuous":
            raise InputError("lindblad semigroup needs self-adjoint jumps (continuous resources)")
        G = lindblad_generator(resource.active, d)
        extra = {}
    else:
        raise InputError(f"semigroup kind must be 'discrete' or 'lindblad', got {kind!r}")
    L = build_structure(resource)
    for t in SAMPLE_TIMES:
        try:
            channel_from_superop(scipy.linalg.expm(t * G))
        except CPTPError as exc:
            raise CPTPError(f"exp({t} G) failed validation: {exc}", residual=exc.residual) from exc
    C = L.commutant_matrix()
    if C.shape[1] and np.abs(G @ C).max() > 1e-8:
        raise InputError("generator does not annihilate the resource commutant")
    # fixed points of the dual must be exactly the commutant
    s = np.linalg.svd(G.conj().T, compute_uv=False)
    nfix = int(np.sum(s <= 1e-9 * max(s[0], 1.0))) if s.size else 0
    if nfix != C.shape[1]:
        raise InputError(f"fixed-point algebra has dimension {nfix}, commutant has {C.shape[1]}")
    return SemigroupFamily(kind, G, L, L.E_fix, **extra)


def preset_semigroup(name: str) -> SemigroupFamily:
    """Named examples: pauli-mixture, pauli-lindblad, dephasing."""
    if name == "pauli-mixture":
        return make_semigroup("discrete", make_resource("discrete", [PAULI_X, PAULI_Y, PAULI_Z]))
    if name == "pauli-lindblad":
        return make_semigroup("lindblad", make_resource("continuous", [PAULI_X, PAULI_Y, PAULI_Z]))
    if name == "dephasing":
        return make_semigroup("lindblad", make_resource("continuous", [PAULI_Z]))
    raise InputError(f"unknown semigroup preset {name!r}")


def evolve(F: SemigroupFamily, t: float) -> QuantumChannel:
    if not t >= 0:
        raise InputError("time must be non-negative")
    return channel_from_superop(scipy.linalg.expm(t * F.generator))


def spectral_gap_of(F: SemigroupFamily) -> float:
    """-(largest real part of the spectrum of G off the fixed-point algebra)."""
    w = np.linalg.eigvals(F.generator)
    w = w[np.argsort(-w.real, kind="stable")]
    nfix = len(F.structure.commutant_basis)
    rest = w[nfix:]
    return float(-rest[0].real) if rest.size else math.inf


def _distance(F: SemigroupFamily, t: float, norm: str) -> float:
    D = F.dim
    diff = scipy.linalg.expm(t * F.generator) - F.E_fix.superop
    dia = diamond_norm(diff).value
    if norm == "diamond":
        return dia
    # upper bound for the infinity-to-infinity norm of the dual map
    hs = float(np.linalg.norm(diff, 2)) * math.sqrt(D)
    return min(dia, hs)


def return_time(F: SemigroupFamily, eps: float, norm: str = "diamond") -> float:
    """First t with ||T_t - E_fix|| <= eps, to absolute resolution 1e-4.

    ``norm='inf_inf_upper'`` uses an upper bound on the infinity-to-infinity
    norm, so the returned time is itself an upper bound.
    """
    if norm not in ("diamond", "inf_inf_upper"):
        raise InputError("norm must be 'diamond' or 'inf_inf_upper'")
    if not 0 < eps < 2:
        raise InputError("eps must lie in (0, 2)")
    if spectral_gap_of(F) <= GAP_TOL:
        raise NoReturnTimeError("generator has no spectral gap off the fixed-point algebra")
    key = ("rt", float(eps), norm)
    if key in F._cache:
        return F._cache[key]
    h = lambda t: _distance(F, t, norm)
    if h(0.0) <= eps:
        F._cache[key] = 0.0
        return 0.0
    hi = 1.0
    while h(hi) > eps:
        hi *= 2
        if hi > 2 ** 30:
            raise NoReturnTimeError("distance does not fall below eps")
    lo = 0.0
    samples = [h(t) for t in np.linspace(0.0, hi, 9)]
    if any(b > a + 1e-9 for a, b in zip(samples, samples[1:])):
        # non-monotone decay: scan for the first crossing, then bisect inside it
        ts = np.linspace(0.0, hi, 1001)
        for a, b in zip(ts, ts[1:]):
            if h(b) <= eps:
                lo, hi = a, b
                break
    while hi - lo > TIME_RESOLUTION:
        mid = (lo + hi) / 2
        if h(mid) <= eps:
            hi = mid
        else:
            lo = mid
    F._cache[key] = float(hi)
    return float(hi)


@dataclass
class TrajectoryRecord:
    times: list
    estimates: list
    return_time: float
    regimes: list
    expected_length: ComplexityEstimate
    seed: int

    def rows(self) -> list[dict]:
        out = []
        for t, est, reg in zip(self.times, self.estimates, self.regimes):
            cmin = min((c.value for c in est.certificates if c.name != "semigroup-time"), default=math.inf)
            out.append({"time": t, "lower": est.lower, "upper": est.upper, "certificate_min": cmin,
                        "regime": reg, "seed": self.seed,
                        "claim": CLAIM_LINEAR if reg == "linear" else CLAIM_PROFILE})
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["time", "lower", "upper", "certificate_min", "regime", "seed", "claim"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in self.rows():
            w.writerow([format_float(r[c]) if isinstance(r[c], float) else r[c] for c in cols])
        return buf.getvalue()


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def default_grid(k: float, n: int = 25) -> list[float]:
    if k <= 0:
        raise InputError("default grid needs a positive return time")
    return [float(t) for t in np.geomspace(0.05 * k, 5 * k, n)]


def complexity_trajectory(F: SemigroupFamily, grid=None, opts: SolveOptions | None = None) -> TrajectoryRecord:
    """Complexity interval of T_t along a time grid, with regime labels.

    For discrete mixtures of resources every estimate carries the linear
    certificate C(T_t) <= t.  The plateau reference is the expected length.
    """
    opts = opts or SolveOptions()
    k = return_time(F, 0.5)
    times = default_grid(k) if grid is None else [float(t) for t in grid]
    if not times:
        raise InputError("grid must be non-empty")
    if any(t < 0 for t in times) or any(b <= a for a, b in zip(times, times[1:])):
        raise InputError("grid must be non-negative and strictly increasing")
    L = F.structure
    el = expected_length(L, opts)
    seeds = [el.witness] if el.witness is not None else []
    ests, regimes = [], []
    for t in times:
        bounds = {"semigroup-time": t} if F.linear_bound else None
        est = complexity_estimate(evolve(F, t), L, opts, seeds=seeds, bounds=bounds)
        ests.append(est)
        regimes.append("linear" if t <= k else "plateau")
    return TrajectoryRecord(times, ests, k, regimes, el, int(opts.seed))


def profile_check(rec: TrajectoryRecord) -> list[dict]:
    """Per-point check of the linear-then-plateau window.

    Below the knee: lower(t) >= t * lower(EL) / (4 k) - slack; above it the
    interval must meet [lower(EL)/2, 3 upper(EL)/2]; slack is the sum of the
    interval widths.
    """
    el = rec.expected_length
    k = rec.return_time
    out = []
    for t, est in zip(rec.times, rec.estimates):
        slack = est.width + el.width + 1e-9
        if t <= k:
            target = t * el.lower / (4 * k) if k > 0 else 0.0
            ok = est.lower >= target - slack
            out.append({"time": t, "regime": "linear", "target": target, "passed": bool(ok)})
        else:
            lo, hi = 0.5 * el.lower, 1.5 * el.upper
            ok = est.upper >= lo - 1e-9 and est.lower <= hi + 1e-9
            out.append({"time": t, "regime": "plateau", "target": [lo, hi], "passed": bool(ok)})
    return out
