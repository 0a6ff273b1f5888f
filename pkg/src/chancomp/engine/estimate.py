"""Certified intervals for resource-dependent Lipschitz complexity.

For a channel ``Phi`` and resource structure ``L`` the quantity is

    C(Phi) = sup { ||(Phi^* - id)(x)||_inf : x mean-zero, |||x||| <= 1 }.

Lower bounds come from explicit feasible witnesses found by alternating
maximization (top singular pair, then linear ascent over the Lipschitz ball
with Dykstra projections); the witness is re-evaluated exactly.  Upper
bounds come from independent certificates, each reported with its value:

* ``lipschitz-to-operator``: EL_upper * ||Phi^* - id||_{inf->inf}, the
  latter bounded by the diamond norm of Phi - id (or by 2);
* ``spectral-gap``: ||y||_inf <= ||y||_HS and ||x||_HS <= sqrt(k D / lam) |||x|||
  where lam is the smallest eigenvalue of sum_s ad_s^dagger ad_s on the
  mean-zero space;
* ``word-length``: for discrete resources generating a finite group (mod
  phase), any decomposition Phi - id = sum_g f_g (Ad_g - id) + R with f >= 0
  gives C <= sum_g f_g len(g) + slack(R); f is found by linear programming;
* ``scalar-restriction``: if Phi^* - id acts as alpha * id on the mean-zero
  space then C = |alpha| * EL;
* caller-supplied bounds (e.g. ``t`` along a semigroup).
"""
from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from ..channels import QuantumChannel, amplify, encode_matrix
from ..errors import ConvergenceError, InputError
from ..linalg import as_matrix, dag, unvec, vec
from ..resources import (
    LipschitzStructure,
    VARIANTS,
    ad_superop,
    amplify_resource,
    build_structure,
)
from .ball import DYKSTRA_MAX_CYCLES, DYKSTRA_TOL, LipschitzBall, constraint_maps
from .norms import diamond_norm

WORD_LENGTH_MAX_ORDER = 512
DIAMOND_MAX_DIM = 4
ASCENT_RTOL = 1e-6  # stop a restart once the value improves by less than this fraction

SCOPE_ALL = "all-levels"
SCOPE_LEVEL = "computed-levels"


class DegradedWarning(UserWarning):
    """A projection did not reach its tolerance; bounds stay valid but may be loose."""


@dataclass
class SolveOptions:
    restarts: int = 6
    max_iter: int = 40
    steps: tuple = (0.5, 1.0, 2.0, 4.0, 8.0, 16.0)
    levels: tuple | None = None
    tol: float = DYKSTRA_TOL
    max_cycles: int = DYKSTRA_MAX_CYCLES
    rtol: float = ASCENT_RTOL
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.restarts < 0 or self.max_iter < 1 or self.max_cycles < 1 or self.threads < 1:
            raise InputError("restarts >= 0, max_iter >= 1, max_cycles >= 1, threads >= 1 required")
        if not self.steps or any(s <= 0 for s in self.steps):
            raise InputError("step schedule must be non-empty and positive")
        if self.tol <= 0 or not 0 < self.rtol < 1:
            raise InputError("tol must be positive and rtol must lie in (0, 1)")
        if self.levels is not None and (not self.levels or any(int(m) < 1 for m in self.levels)):
            raise InputError("ancilla levels must be positive integers")
        if int(self.seed) < 0:
            raise InputError("seed must be a non-negative integer")
        self.steps = tuple(float(s) for s in self.steps)
        if self.levels is not None:
            self.levels = tuple(sorted({int(m) for m in self.levels}))

    def to_dict(self) -> dict:
        return {"restarts": self.restarts, "max_iter": self.max_iter, "steps": list(self.steps),
                "levels": list(self.levels) if self.levels else None, "tol": self.tol,
                "max_cycles": self.max_cycles, "rtol": self.rtol, "seed": int(self.seed)}


@dataclass
class Certificate:
    name: str
    value: float
    scope: str = SCOPE_ALL
    note: str = ""

    def to_dict(self) -> dict:
        d = {"name": self.name, "value": self.value, "scope": self.scope}
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class ComplexityEstimate:
    """Certified interval [lower, upper] with witness and certificate provenance."""

    lower: float
    upper: float
    witness: np.ndarray | None
    certificates: list = field(default_factory=list)
    seed: int = 0
    iterations: int = 0
    tol: float = DYKSTRA_TOL
    quantity: str = "complexity"
    variant: str = "inf"
    level: int = 1
    warnings: list = field(default_factory=list)
    level_lowers: list = field(default_factory=list)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "variant": self.variant,
            "lower": self.lower,
            "upper": self.upper,
            "witness": encode_matrix(self.witness) if self.witness is not None else None,
            "witness_level": self.level,
            "certificates": [c.to_dict() for c in self.certificates],
            "seed": int(self.seed),
            "iterations": int(self.iterations),
            "tol": self.tol,
            "warnings": list(self.warnings),
            "level_lowers": [[int(m), float(v)] for m, v in self.level_lowers],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# cached per-structure data

def _ball(L: LipschitzStructure, variant: str) -> LipschitzBall:
    key = ("ball", variant)
    if key not in L._cache:
        if variant == "gradient" and L.resource.kind != "continuous":
            raise InputError("gradient variant requires a continuous (self-adjoint) resource set")
        L._cache[key] = LipschitzBall(L.mean_zero_matrix(),
                                      constraint_maps(L.resource.active, variant, L.dim))
    return L._cache[key]


def spectral_gap(L: LipschitzStructure) -> float:
    """Smallest eigenvalue of sum_s ad_s^dagger ad_s on the mean-zero space."""
    if "gap" not in L._cache:
        B = L.mean_zero_matrix()
        if B.shape[1] == 0:
            L._cache["gap"] = math.inf
        else:
            # sum_s ad_s^dagger ad_s applied columnwise, without forming D^2 x D^2 matrices
            D = L.dim
            cols = [unvec(B[:, j], (D, D)) for j in range(B.shape[1])]
            lap = np.zeros_like(B)
            for s in L.resource.active:
                for j, x in enumerate(cols):
                    c = s @ x - x @ s
                    lap[:, j] += vec(dag(s) @ c - c @ dag(s))
            H = dag(B) @ lap
            L._cache["gap"] = float(np.linalg.eigvalsh((H + dag(H)) / 2)[0])
    return L._cache["gap"]


def _variant_count(L: LipschitzStructure, variant: str) -> int:
    # ||x||_HS^2 <= (1/lam) sum_s ||[s,x]||_HS^2 <= (k D / lam) |||x|||^2
    return len(L.resource.active) if variant == "inf" else 1


def spectral_factor(L: LipschitzStructure, variant: str = "inf") -> float:
    """sqrt(k D / lam): bound on ||x||_HS / |||x||| over the mean-zero space."""
    lam = spectral_gap(L)
    if math.isinf(lam):
        return 0.0
    if lam <= 0:
        return math.inf
    return math.sqrt(_variant_count(L, variant) * L.dim / lam)


def _group_of(L: LipschitzStructure):
    """Word-length group of a discrete resource set, or None when unavailable."""
    if "group" not in L._cache:
        grp = None
        if L.resource.kind == "discrete" and L.resource.active:
            from ..groups import GroupTooLargeError, group_closure
            try:
                grp = group_closure(L.resource.active, max_order=WORD_LENGTH_MAX_ORDER)
            except GroupTooLargeError:
                grp = None
        L._cache["group"] = grp
    return L._cache["group"]


def expected_length_certificates(L: LipschitzStructure, variant: str = "inf") -> list:
    """Upper certificates for the expected length that need no channel."""
    certs = [Certificate("spectral-gap", spectral_factor(L, variant), SCOPE_LEVEL,
                         "||x||_inf <= ||x||_HS <= sqrt(kD/lam)|||x|||")]
    grp = _group_of(L) if variant == "inf" else None
    if grp is not None:
        mean = float(grp.word_lengths.mean())
        certs.append(Certificate("word-length", mean, SCOPE_ALL,
                                 f"mean word length over closure of order {grp.order}"))
    return certs


def el_upper(L: LipschitzStructure, variant: str = "inf", all_levels: bool = False) -> float:
    certs = expected_length_certificates(L, variant)
    if all_levels:
        certs = [c for c in certs if c.scope == SCOPE_ALL]
    return min((c.value for c in certs), default=math.inf)


# ---------------------------------------------------------------------------
# alternating maximization

@dataclass
class _Problem:
    ball: LipschitzBall
    SdB: np.ndarray   # vec((Phi^*-id)(B c)) = SdB @ c
    D: int

    def value(self, c) -> float:
        return float(np.linalg.norm(unvec(self.SdB @ c, (self.D, self.D)), 2))

    def direction(self, c) -> np.ndarray:
        Y = unvec(self.SdB @ c, (self.D, self.D))
        U, s, Vh = np.linalg.svd(Y)
        if s[0] == 0:
            return np.zeros_like(c)
        # gradient of Re <u, Y(c) v> with respect to c
        return dag(self.SdB) @ vec(np.outer(U[:, 0], Vh[0]))


def _ascend(prob: _Problem, g: np.ndarray, c: np.ndarray, opts: SolveOptions):
    """Linear ascent of Re <g, c> over the ball with an increasing step schedule."""
    ball = prob.ball
    gn = g / np.linalg.norm(g)
    scale = max(np.linalg.norm(c), 1.0 / max(np.linalg.norm(ball.M, 2), 1e-300))
    z = c
    ok, cycles = True, 0
    for eta in opts.steps:
        res = ball.project(z + eta * scale * gn, tol=opts.tol, max_cycles=opts.max_cycles)
        z = res.coords
        ok &= res.converged
        cycles += res.cycles
    return ball.normalize(z), ok, cycles


def _to_boundary(ball: LipschitzBall, c: np.ndarray) -> np.ndarray | None:
    n = ball.norm(c)
    if not np.isfinite(n) or n <= 1e-14 * max(np.linalg.norm(c), 1e-300):
        return None
    return c / n


def _run_restart(prob: _Problem, c0: np.ndarray, opts: SolveOptions):
    c = c0
    val = prob.value(c)
    it = 0
    ok_all = True
    for it in range(1, opts.max_iter + 1):
        g = prob.direction(c)
        if np.linalg.norm(g) == 0:
            break
        cn, ok, _ = _ascend(prob, g, c, opts)
        ok_all &= ok
        vn = prob.value(cn)
        if not vn > val * (1 + opts.rtol) + 1e-15:
            break
        c, val = cn, vn
    return val, c, it, ok_all


def _maximize(prob: _Problem, opts: SolveOptions, seed_coords=()):
    ball = prob.ball
    r = ball.r
    starts = []
    for c in seed_coords:
        cb = _to_boundary(ball, c)
        if cb is not None:
            starts.append(cb)
    if prob.SdB.size:
        _, _, Vh = np.linalg.svd(prob.SdB, full_matrices=False)
        cb = _to_boundary(ball, Vh[0].conj())
        if cb is not None:
            starts.append(cb)
    for k in range(opts.restarts):
        rng = np.random.default_rng(np.random.SeedSequence([int(opts.seed), k]))
        c = rng.standard_normal(r) + 1j * rng.standard_normal(r)
        cb = _to_boundary(ball, c)
        if cb is not None:
            starts.append(cb)
    if not starts:
        return 0.0, np.zeros(r, dtype=complex), 0, True
    if opts.threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=opts.threads) as ex:
            results = list(ex.map(lambda c: _run_restart(prob, c, opts), starts))
    else:
        results = [_run_restart(prob, c, opts) for c in starts]
    # deterministic reduction: highest value, ties to the lowest restart index
    best = max(range(len(results)), key=lambda k: (results[k][0], -k))
    val, c, _, _ = results[best]
    iters = sum(res[2] for res in results)
    ok = all(res[3] for res in results)
    return val, c, iters, ok


# ---------------------------------------------------------------------------
# certificates depending on the channel

def _check_dims(phi: QuantumChannel, L: LipschitzStructure):
    if phi.dim != L.dim:
        raise InputError(f"channel dimension {phi.dim} != resource dimension {L.dim}")


def _diamond_distance_to_id(phi: QuantumChannel) -> float | None:
    if phi.dim > DIAMOND_MAX_DIM:
        return None
    try:
        return diamond_norm(phi.superop - np.eye(phi.dim ** 2)).value
    except ConvergenceError:
        return None


def word_length_certificate(phi: QuantumChannel, L: LipschitzStructure, el_up: float):
    """LP decomposition of Phi - id over the word-length group (None if unavailable)."""
    if L.ambient_basis is not None:
        return None
    grp = _group_of(L)
    if grp is None:
        return None
    D = phi.dim
    eye = np.eye(D * D)
    cols = []
    for g in grp.elements:
        cols.append((np.kron(g.conj(), g) - eye).reshape(-1))
    A = np.column_stack(cols)
    target = (phi.superop - eye).reshape(-1)
    A_r = np.vstack([A.real, A.imag])
    b_r = np.concatenate([target.real, target.imag])
    costs = grp.word_lengths.astype(float)
    res = scipy.optimize.linprog(costs, A_eq=A_r, b_eq=b_r, bounds=(0, None), method="highs")
    if res.status == 0:
        f = res.x
    else:
        f, _ = scipy.optimize.nnls(A_r, b_r)
    R = (target - A @ f).reshape(D * D, D * D)
    slack = float(np.linalg.norm(R, 2)) * math.sqrt(D) * el_up
    value = float(costs @ f) + slack
    if not np.isfinite(value):
        return None
    note = f"sum f_g len(g) over group of order {grp.order}; residual slack {slack:.3e}"
    return Certificate("word-length", value, SCOPE_ALL, note)


def _scalar_restriction(SdB: np.ndarray, B: np.ndarray):
    r = B.shape[1]
    if r == 0:
        return None
    alpha = np.vdot(B, SdB) / r
    resid = np.abs(SdB - alpha * B).max()
    if resid <= 1e-10 * max(1.0, abs(alpha)):
        return complex(alpha)
    return None


def _finalize(lower, witness, certs, opts, it, ok, quantity, variant, level=1):
    warns = []
    if not ok:
        msg = "Dykstra projection hit its cycle cap; lower bound is valid but may be loose"
        warns.append(msg)
        warnings.warn(msg, DegradedWarning, stacklevel=3)
    upper = min((c.value for c in certs), default=math.inf)
    if lower > upper:
        # a witness can never beat a valid certificate beyond rounding
        if lower > upper * (1 + 1e-7) + 1e-9:
            raise AssertionError(f"lower bound {lower} exceeds certified upper bound {upper}")
        upper = lower
    return ComplexityEstimate(float(lower), float(upper), witness, certs, int(opts.seed), it,
                              opts.tol, quantity, variant, level, warns)


def _projected_seeds(seeds, L: LipschitzStructure):
    B = L.mean_zero_matrix()
    out = []
    for x in seeds or ():
        x = as_matrix(x, square=True, name="seed witness")
        if x.shape[0] != L.dim:
            raise InputError("seed witness dimension mismatch")
        out.append(dag(B) @ vec(x))
    return out


def complexity_estimate(phi: QuantumChannel, L: LipschitzStructure, opts: SolveOptions | None = None,
                        variant: str = "inf", seeds=(), bounds=None) -> ComplexityEstimate:
    """Certified interval for C(Phi) with respect to ``L``.

    ``seeds`` are extra starting witnesses (projected onto the mean-zero
    space); ``bounds`` maps names to caller-supplied upper bounds.
    """
    opts = opts or SolveOptions()
    if variant not in VARIANTS:
        raise InputError(f"variant must be one of {VARIANTS}")
    _check_dims(phi, L)
    B = L.mean_zero_matrix()
    D = L.dim
    if B.shape[1] == 0:
        cert = [Certificate("trivial-mean-zero-space", 0.0)]
        return _finalize(0.0, np.zeros((D, D), dtype=complex), cert, opts, 0, True,
                         "complexity", variant)
    ball = _ball(L, variant)
    SdB = (phi.dual_superop() - np.eye(D * D)) @ B
    prob = _Problem(ball, SdB, D)
    val, c, it, ok = _maximize(prob, opts, _projected_seeds(seeds, L))
    witness = ball.to_matrix(c)
    certs = _channel_certificates(phi, L, variant, SdB, B, bounds)
    return _finalize(val, witness, certs, opts, it, ok, "complexity", variant)


def _channel_certificates(phi, L, variant, SdB, B, bounds, all_levels=False):
    el_certs = expected_length_certificates(L, variant)
    el_up = min(c.value for c in el_certs)
    el_up_all = min((c.value for c in el_certs if c.scope == SCOPE_ALL), default=math.inf)
    certs = []
    alpha = _scalar_restriction(SdB, B)
    if alpha is not None:
        for c in el_certs:
            certs.append(Certificate("scalar-restriction", abs(alpha) * c.value, c.scope,
                                     f"Phi^*-id = {alpha.real:.6g}{alpha.imag:+.6g}i on mean-zero space; "
                                     f"EL via {c.name}"))
    certs.append(Certificate("spectral-gap", float(np.linalg.norm(SdB, 2)) * spectral_factor(L, variant),
                             SCOPE_LEVEL, "||(Phi^*-id)|_A||_HS * sqrt(kD/lam)"))
    dia = _diamond_distance_to_id(phi)
    for el_val, scope in ((el_up_all, SCOPE_ALL), (el_up, SCOPE_LEVEL)):
        if math.isfinite(el_val):
            inf_inf = 2.0 if dia is None else min(2.0, dia)
            certs.append(Certificate("lipschitz-to-operator", el_val * inf_inf, scope,
                                     "EL_upper * ||Phi - id||_diamond" if dia is not None
                                     else "EL_upper * 2"))
            if scope == SCOPE_ALL:
                break
    if variant == "inf":
        wl = word_length_certificate(phi, L, el_up_all if math.isfinite(el_up_all) else el_up)
        if wl is not None:
            if not math.isfinite(el_up_all):
                wl.scope = SCOPE_LEVEL
            certs.append(wl)
    for name, value in (bounds or {}).items():
        certs.append(Certificate(str(name), float(value), SCOPE_ALL, "caller-supplied"))
    return certs


def expected_length(L: LipschitzStructure, opts: SolveOptions | None = None, variant: str = "inf",
                    seeds=()) -> ComplexityEstimate:
    """Expected length EL = ||id : (A, |||.|||) -> (M_d, ||.||_inf)||."""
    opts = opts or SolveOptions()
    if variant not in VARIANTS:
        raise InputError(f"variant must be one of {VARIANTS}")
    B = L.mean_zero_matrix()
    D = L.dim
    if B.shape[1] == 0:
        return _finalize(0.0, np.zeros((D, D), dtype=complex),
                         [Certificate("trivial-mean-zero-space", 0.0)], opts, 0, True,
                         "expected_length", variant)
    ball = _ball(L, variant)
    prob = _Problem(ball, -B, D)  # (E_fix^* - id)(x) = -x on the mean-zero space
    val, c, it, ok = _maximize(prob, opts, _projected_seeds(seeds, L))
    certs = expected_length_certificates(L, variant)
    return _finalize(val, ball.to_matrix(c), certs, opts, it, ok, "expected_length", variant)


# ---------------------------------------------------------------------------
# complete (ancilla-amplified) complexity

def amplified_structure(L: LipschitzStructure, m: int) -> LipschitzStructure:
    """Structure of M_m (x) N with resources I_m (x) s (cached on ``L``)."""
    if m == 1:
        return L
    key = ("amplified", m)
    if key not in L._cache:
        amb = None
        if L.ambient_basis is not None:
            amb = []
            for i in range(m):
                for j in range(m):
                    E = np.zeros((m, m), dtype=complex)
                    E[i, j] = 1
                    amb.extend(np.kron(E, a) for a in L.ambient_basis)
        L._cache[key] = build_structure(amplify_resource(L.resource, m), ambient=amb)
    return L._cache[key]


def embed_level(x: np.ndarray, k: int, m: int) -> np.ndarray:
    """Lift a level-k witness on M_k (x) M_d to level m >= k via the corner isometry.

    With P = V (x) I for the isometry V: C^k -> C^m, both the commutators with
    I (x) s and the action of id (x) Phi^* commute with x -> P x P^dagger, so
    Lipschitz norm and objective value are unchanged.
    """
    if m < k:
        raise InputError("cannot lift a witness to a smaller ancilla level")
    d = x.shape[0] // k
    V = np.zeros((m, k), dtype=complex)
    V[np.arange(k), np.arange(k)] = 1
    P = np.kron(V, np.eye(d))
    return P @ x @ dag(P)


def default_levels(d: int) -> tuple:
    return tuple(sorted({1, 2, d}))


def cb_complexity_estimate(phi: QuantumChannel, L: LipschitzStructure,
                           opts: SolveOptions | None = None, variant: str = "inf",
                           seeds=(), bounds=None) -> ComplexityEstimate:
    """Interval for the complete complexity, truncated to the ancilla levels in ``opts``.

    The lower bound is the running maximum over levels (each level is seeded
    with the previous witness placed in a corner, so it never decreases).
    Certificates marked ``all-levels`` bound the full supremum over ancilla
    sizes; ``computed-levels`` ones bound the truncated quantity only.
    """
    opts = opts or SolveOptions()
    _check_dims(phi, L)
    levels = opts.levels or default_levels(L.dim)
    best_val, best_w, best_m, total_it, ok_all = 0.0, None, 1, 0, True
    per_level = []
    for m in levels:
        Lm = amplified_structure(L, m)
        if not Lm.mean_zero_basis:
            per_level.append((m, 0.0))
            continue
        lvl_seeds = [embed_level(np.asarray(s, dtype=complex), 1, m) for s in seeds or ()]
        if best_w is not None:
            lvl_seeds.append(embed_level(best_w, best_m, m))
        est = complexity_estimate(amplify(phi, m), Lm, opts, variant, seeds=lvl_seeds)
        total_it += est.iterations
        ok_all &= not est.warnings
        per_level.append((m, est.lower))
        if best_w is None or est.lower > best_val:
            best_val, best_w, best_m = est.lower, est.witness, m
    top = levels[-1]
    Ltop = amplified_structure(L, top)
    B = L.mean_zero_matrix()
    if B.shape[1] == 0:
        return _finalize(0.0, np.zeros((L.dim, L.dim), dtype=complex),
                         [Certificate("trivial-mean-zero-space", 0.0)], opts, 0, True,
                         "cb_complexity", variant)
    SdB_top = (amplify(phi, top).dual_superop() - np.eye((top * L.dim) ** 2)) @ Ltop.mean_zero_matrix()
    certs = []
    # spectral-gap at the top level covers every smaller level (same gap, smaller D)
    certs.append(Certificate("spectral-gap", float(np.linalg.norm(SdB_top, 2)) * spectral_factor(Ltop, variant),
                             SCOPE_LEVEL, f"evaluated at ancilla level {top}"))
    el_all = el_upper(L, variant, all_levels=True)
    el_top = el_upper(Ltop, variant)
    dia = _diamond_distance_to_id(phi)
    inf_cb = 2.0 if dia is None else min(2.0, dia)
    if math.isfinite(el_all):
        certs.append(Certificate("lipschitz-to-operator", el_all * inf_cb, SCOPE_ALL,
                                 "EL^cb_upper * ||Phi - id||_diamond"))
    certs.append(Certificate("lipschitz-to-operator", el_top * inf_cb, SCOPE_LEVEL,
                             f"EL_upper at level {top} * ||Phi - id||_diamond"))
    alpha = _scalar_restriction((phi.dual_superop() - np.eye(L.dim ** 2)) @ B, B)
    if alpha is not None:
        # id_m (x) (alpha id) is still scalar on the amplified mean-zero space
        if math.isfinite(el_all):
            certs.append(Certificate("scalar-restriction", abs(alpha) * el_all, SCOPE_ALL))
        certs.append(Certificate("scalar-restriction", abs(alpha) * el_top, SCOPE_LEVEL))
    if variant == "inf":
        wl = word_length_certificate(phi, L, el_all if math.isfinite(el_all) else el_top)
        if wl is not None:
            if not math.isfinite(el_all):
                wl.scope = SCOPE_LEVEL
            certs.append(wl)
    for name, value in (bounds or {}).items():
        certs.append(Certificate(str(name), float(value), SCOPE_ALL, "caller-supplied"))
    est = _finalize(best_val, best_w, certs, opts, total_it, ok_all,
                    "cb_complexity", variant, best_m)
    # running maximum: the reported lower bound never decreases with the level
    run, out = 0.0, []
    for m, v in per_level:
        run = max(run, v)
        out.append((m, run))
    est.level_lowers = out
    return est


def all_level_upper(est: ComplexityEstimate) -> float:
    """Smallest certificate valid for the untruncated supremum over ancillas."""
    return min((c.value for c in est.certificates if c.scope == SCOPE_ALL), default=math.inf)
