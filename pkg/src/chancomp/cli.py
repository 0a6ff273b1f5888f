"""Command-line interface.

Every run writes its artifacts plus ``manifest.json`` (inputs with SHA-256
digests, seed, solver options, package versions, warnings) into ``--out``.
CSV files use a header row, ``.`` decimals and 17 significant digits, and
carry a ``claim`` column naming the statement each row checks.

Exit codes: 0 success, 1 a verification found a violation, 2 invalid
input, 3 numerical non-convergence, 64 usage error (unknown flags).
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import platform
import sys
import warnings
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .errors import ConditioningError, ConvergenceError, InputError, LemmaViolation, NoReturnTimeError

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_CONVERGENCE, EXIT_USAGE = 0, 1, 2, 3, 64
THREADS_ENV = "CHANCOMP_THREADS"

CLAIM_INTERVAL = "lower <= C_S(Phi) <= upper"
CLAIM_CB = "lower <= C_S^cb(Phi) <= upper (lower from the reported ancilla level)"
CLAIM_EL = "lower <= EL_S = C_S(E_fix) <= upper"
CLAIM_DIAMOND = "||Phi - Psi||_diamond in [primal, dual]"
CLAIM_RETURN = "first t with ||T_t - E_fix|| <= eps, resolution 1e-4"
CLAIM_GROUP = "word length = breadth-first depth in the Cayley graph"
CLAIM_PAULI = "|||x|||_P / 4 <= ||x||_L <= 3 |||x|||_P / 4"
CLAIM_PARTIAL_TRACE = "tr_j(x) = (x + X_j x X_j + Y_j x Y_j + Z_j x Z_j) / 4"
CLAIM_CONTINUOUS = "|||x|||_S <= |||x|||_Delta and equal commutants for a_j = -i log c_j"
CLAIM_ADDITIVITY = "C^cb(Phi1 (x) Phi2) = C^cb(Phi1) + C^cb(Phi2) on independent systems"
CLAIM_WORD_LENGTH = "EL of l_inf(G) equals the mean word length"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)


# ---------------------------------------------------------------------------
# parser

def _int_list(text: str) -> tuple:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("run options")
    g.add_argument("--seed", type=int, required=True, help="random seed (mandatory)")
    g.add_argument("--out", default="chancomp-out", help="output directory")
    g.add_argument("--threads", type=int, default=None,
                   help=f"worker cap for restarts (default: ${THREADS_ENV} or 1)")
    g.add_argument("--restarts", type=int, default=6)
    g.add_argument("--max-iter", type=int, default=40)
    g.add_argument("--steps", type=_float_list, default=(0.5, 1.0, 2.0, 4.0, 8.0, 16.0),
                   help="ascent step schedule, comma-separated")
    g.add_argument("--tol", type=float, default=1e-10, help="projection displacement tolerance")
    g.add_argument("--max-cycles", type=int, default=10_000, help="projection cycle cap")
    g.add_argument("--rtol", type=float, default=1e-6, help="relative improvement stopping rule")
    return p


def _semigroup_args(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--semigroup", choices=("pauli-mixture", "pauli-lindblad", "dephasing"))
    src.add_argument("--resource", help="resource JSON; discrete -> uniform mixture, continuous -> Lindblad")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chancomp", description="Lipschitz complexity of quantum channels.")
    parser.add_argument("--version", action="version", version=f"chancomp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common()

    p = sub.add_parser("complexity", parents=[common], help="complexity interval of a channel")
    p.add_argument("--channel", required=True)
    p.add_argument("--resource", required=True)
    p.add_argument("--variant", choices=("inf", "l2", "gradient"), default="inf")

    p = sub.add_parser("expected-length", parents=[common], help="expected length of a resource set")
    p.add_argument("--resource", required=True)
    p.add_argument("--variant", choices=("inf", "l2", "gradient"), default="inf")

    p = sub.add_parser("cb-complexity", parents=[common], help="complete complexity with ancillas")
    p.add_argument("--channel", required=True)
    p.add_argument("--resource", required=True)
    p.add_argument("--levels", type=_int_list, default=None, help="ancilla levels, e.g. 1,2")
    p.add_argument("--variant", choices=("inf", "l2", "gradient"), default="inf")

    p = sub.add_parser("diamond", parents=[common], help="diamond norm of a channel difference")
    p.add_argument("--channel", required=True)
    p.add_argument("--minus", default=None, help="second channel (default: identity)")

    p = sub.add_parser("return-time", parents=[common], help="return time of a semigroup")
    _semigroup_args(p)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--norm", choices=("diamond", "inf_inf_upper"), default="diamond")

    p = sub.add_parser("trajectory", parents=[common], help="complexity along a semigroup")
    _semigroup_args(p)
    p.add_argument("--grid", default="auto", help="'auto' or comma-separated times")
    p.add_argument("--plot", action="store_true", help="also write trajectory.svg")

    p = sub.add_parser("group-stats", parents=[common], help="word-length statistics of a group")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--group", help="preset: Z<n>, S3, pauli1, pauli2")
    src.add_argument("--resource", help="discrete resource JSON used as generators")
    p.add_argument("--max-order", type=int, default=4096)

    p = sub.add_parser("verify", help="numerical checks of exact statements")
    vsub = p.add_subparsers(dest="check", required=True, parser_class=_Parser)
    v = vsub.add_parser("pauli", parents=[common], help="Pauli norm equivalence")
    v.add_argument("--qubits", type=int, default=2)
    v.add_argument("--samples", type=int, default=500)
    v = vsub.add_parser("clifford", parents=[common], help="partial trace and continuous resources")
    v.add_argument("--qubits", type=int, default=2)
    v.add_argument("--samples", type=int, default=100)
    v = vsub.add_parser("tensor-additivity", parents=[common], help="additivity on product systems")
    v.add_argument("--channel-a", default=None)
    v.add_argument("--channel-b", default=None)
    v.add_argument("--resource-a", default=None)
    v.add_argument("--resource-b", default=None)
    v.add_argument("--levels", type=_int_list, default=(1, 2))
    v = vsub.add_parser("word-length", parents=[common], help="expected length vs mean word length")
    v.add_argument("--groups", default="Z2,Z3,Z4,S3", help="comma-separated presets")
    return parser


# ---------------------------------------------------------------------------
# helpers

def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get(THREADS_ENV)
    if env is None or env == "":
        return 1
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"{THREADS_ENV} must be an integer, got {env!r}") from exc


def _options(args):
    from .engine import SolveOptions

    levels = getattr(args, "levels", None)
    return SolveOptions(restarts=args.restarts, max_iter=args.max_iter, steps=args.steps,
                        levels=levels, tol=args.tol, max_cycles=args.max_cycles, rtol=args.rtol,
                        seed=args.seed, threads=_threads(args))


def _fmt(v):
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(path: Path, rows: list[dict], cols: list[str]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_fmt(r.get(c)) for c in cols])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, np.ndarray):
        from .channels import encode_matrix
        return encode_matrix(obj) if obj.ndim == 2 else _jsonable(obj.tolist())
    return obj


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


def _check_paths(*paths) -> dict:
    inputs = {}
    for name, p in paths:
        if p is None:
            continue
        path = Path(p)
        if not path.is_file():
            raise InputError(f"--{name}: no such file {p!r}")
        inputs[name] = {"path": str(p), "sha256": hashlib.sha256(path.read_bytes()).hexdigest()}
    return inputs


class _Run:
    """Collects outputs and warnings for one invocation."""

    def __init__(self, args, argv):
        self.args = args
        self.argv = list(argv)
        self.out = Path(args.out)
        self.inputs: dict = {}
        self.outputs: list = []
        self.warnings: list = []
        self.summary: dict = {}

    def path(self, name: str) -> Path:
        self.outputs.append(name)
        return self.out / name

    def manifest(self, status: str, exit_code: int, opts=None, error: str | None = None) -> dict:
        return {
            "command": self.args.command if self.args.command != "verify" else f"verify {self.args.check}",
            "argv": self.argv,
            "inputs": self.inputs,
            "seed": self.args.seed,
            "options": opts.to_dict() if opts is not None else None,
            "versions": {"chancomp": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                         "python": platform.python_version()},
            "outputs": sorted(self.outputs),
            "warnings": self.warnings,
            "status": status,
            "exit_code": exit_code,
            "error": error,
            "summary": self.summary,
        }


def _estimate_row(est, claim: str) -> dict:
    cmin = min((c.value for c in est.certificates), default=math.inf)
    return {"quantity": est.quantity, "variant": est.variant, "level": est.level, "lower": est.lower,
            "upper": est.upper, "width": est.width, "certificate_min": cmin, "degraded": bool(est.warnings),
            "seed": est.seed, "claim": claim}


EST_COLS = ["quantity", "variant", "level", "lower", "upper", "width", "certificate_min", "degraded",
            "seed", "claim"]


def _load_pair(args):
    from .channels import load_channel
    from .resources import build_structure, load_resource

    return load_channel(args.channel), build_structure(load_resource(args.resource))


def _semigroup(args, run: _Run):
    from .dynamics import make_semigroup, preset_semigroup
    from .resources import load_resource

    if args.semigroup:
        return preset_semigroup(args.semigroup)
    run.inputs.update(_check_paths(("resource", args.resource)))
    R = load_resource(args.resource)
    return make_semigroup("discrete" if R.kind == "discrete" else "lindblad", R)


# ---------------------------------------------------------------------------
# commands

def cmd_complexity(args, run, opts):
    from .engine import complexity_estimate

    run.inputs.update(_check_paths(("channel", args.channel), ("resource", args.resource)))
    phi, L = _load_pair(args)
    est = complexity_estimate(phi, L, opts, variant=args.variant)
    write_json(run.path("estimate.json"), {**est.to_dict(), "claim": CLAIM_INTERVAL})
    write_csv(run.path("estimate.csv"), [_estimate_row(est, CLAIM_INTERVAL)], EST_COLS)
    run.summary = {"lower": est.lower, "upper": est.upper}
    return EXIT_OK


def cmd_expected_length(args, run, opts):
    from .engine import expected_length
    from .resources import build_structure, load_resource

    run.inputs.update(_check_paths(("resource", args.resource)))
    L = build_structure(load_resource(args.resource))
    est = expected_length(L, opts, variant=args.variant)
    write_json(run.path("expected_length.json"), {**est.to_dict(), "claim": CLAIM_EL})
    write_csv(run.path("expected_length.csv"), [_estimate_row(est, CLAIM_EL)], EST_COLS)
    run.summary = {"lower": est.lower, "upper": est.upper}
    return EXIT_OK


def cmd_cb_complexity(args, run, opts):
    from .engine import cb_complexity_estimate

    run.inputs.update(_check_paths(("channel", args.channel), ("resource", args.resource)))
    phi, L = _load_pair(args)
    est = cb_complexity_estimate(phi, L, opts, variant=args.variant)
    write_json(run.path("cb_estimate.json"), {**est.to_dict(), "claim": CLAIM_CB})
    rows = [_estimate_row(est, CLAIM_CB)]
    write_csv(run.path("cb_estimate.csv"), rows, EST_COLS)
    write_csv(run.path("cb_levels.csv"),
              [{"level": m, "lower": v, "claim": CLAIM_CB} for m, v in est.level_lowers],
              ["level", "lower", "claim"])
    run.summary = {"lower": est.lower, "upper": est.upper, "level": est.level}
    return EXIT_OK


def cmd_diamond(args, run, opts):
    from .channels import identity_channel, load_channel
    from .engine import diamond_norm

    run.inputs.update(_check_paths(("channel", args.channel), ("minus", args.minus)))
    phi = load_channel(args.channel)
    psi = load_channel(args.minus) if args.minus else identity_channel(phi.dim)
    if psi.dim != phi.dim:
        raise InputError(f"dimension mismatch: {phi.dim} vs {psi.dim}")
    res = diamond_norm(phi.superop - psi.superop)
    write_json(run.path("diamond.json"), {**res.to_dict(), "claim": CLAIM_DIAMOND})
    write_csv(run.path("diamond.csv"), [{**res.to_dict(), "claim": CLAIM_DIAMOND}],
              ["value", "primal", "dual", "gap", "iterations", "claim"])
    run.summary = {"value": res.value, "gap": res.gap}
    return EXIT_OK


def cmd_return_time(args, run, opts):
    from .dynamics import return_time, spectral_gap_of

    F = _semigroup(args, run)
    t = return_time(F, args.eps, norm=args.norm)
    row = {"eps": args.eps, "norm": args.norm, "return_time": t, "spectral_gap": spectral_gap_of(F),
           "claim": CLAIM_RETURN}
    write_csv(run.path("return_time.csv"), [row], ["eps", "norm", "return_time", "spectral_gap", "claim"])
    run.summary = {"return_time": t}
    return EXIT_OK


def cmd_trajectory(args, run, opts):
    from .dynamics import complexity_trajectory, profile_check

    F = _semigroup(args, run)
    if args.grid == "auto":
        grid = None
    else:
        try:
            grid = _float_list(args.grid)
        except argparse.ArgumentTypeError as exc:
            raise InputError(str(exc)) from exc
    rec = complexity_trajectory(F, grid, opts)
    run.path("trajectory.csv").write_text(rec.to_csv())
    prof = profile_check(rec)
    write_csv(run.path("profile.csv"),
              [{"time": p["time"], "regime": p["regime"],
                "target": p["target"] if p["regime"] == "linear" else None,
                "target_low": p["target"][0] if p["regime"] == "plateau" else None,
                "target_high": p["target"][1] if p["regime"] == "plateau" else None,
                "passed": p["passed"],
                "claim": "linear growth below the return time, plateau near EL above"} for p in prof],
              ["time", "regime", "target", "target_low", "target_high", "passed", "claim"])
    write_json(run.path("expected_length.json"), {**rec.expected_length.to_dict(), "claim": CLAIM_EL})
    if args.plot:
        run.path("trajectory.svg").write_text(trajectory_svg(rec))
    run.summary = {"return_time": rec.return_time, "points": len(rec.times),
                   "profile_passed": all(p["passed"] for p in prof),
                   "upper_le_time": all(e.upper <= t + 1e-6 for t, e in zip(rec.times, rec.estimates))}
    return EXIT_OK


def cmd_group_stats(args, run, opts):
    from .groups import group_closure, length_statistics, preset_group
    from .resources import load_resource

    if args.group:
        T = preset_group(args.group, args.max_order)
    else:
        run.inputs.update(_check_paths(("resource", args.resource)))
        R = load_resource(args.resource)
        if R.kind != "discrete":
            raise InputError("group-stats needs a discrete resource set")
        T = group_closure(R.elements, args.max_order)
    st = length_statistics(T)
    report = {"order": st["order"], "diameter": st["diameter"], "mean_length": st["mean"],
              "histogram": st["histogram"], "claim": CLAIM_GROUP}
    write_json(run.path("group_stats.json"), report)
    write_csv(run.path("group_lengths.csv"),
              [{"element": k, "word_length": int(T.word_lengths[k]), "claim": CLAIM_GROUP}
               for k in range(T.order)], ["element", "word_length", "claim"])
    run.summary = {"order": st["order"], "mean_length": st["mean"], "diameter": st["diameter"]}
    return EXIT_OK


def _violation_exit(rows) -> int:
    return EXIT_OK if all(r.get("passed", True) for r in rows) else EXIT_VIOLATION


def cmd_verify_pauli(args, run, opts):
    from .clifford import norm_equivalence_check

    rep = norm_equivalence_check(args.samples, args.qubits, args.seed)
    row = {**{k: v for k, v in rep.items() if k != "bounds"}, "lower_const": rep["bounds"][0],
           "upper_const": rep["bounds"][1], "passed": rep["violations"] == 0, "claim": CLAIM_PAULI}
    cols = ["qubits", "samples", "checked", "skipped", "min_ratio", "max_ratio", "lower_const",
            "upper_const", "violations", "passed", "claim"]
    write_csv(run.path("verify_pauli.csv"), [row], cols)
    run.summary = {"violations": rep["violations"], "min_ratio": rep["min_ratio"], "max_ratio": rep["max_ratio"]}
    return _violation_exit([row])


def cmd_verify_clifford(args, run, opts):
    from .clifford import continuous_from_discrete, partial_trace_identity_check, pauli_resources

    pt = partial_trace_identity_check(args.samples, args.qubits, args.seed)
    _, cont = continuous_from_discrete(pauli_resources(args.qubits), samples=args.samples, seed=args.seed)
    rows = [
        {"check": "partial-trace", "qubits": args.qubits, "samples": args.samples,
         "value": pt["max_deviation"], "passed": pt["max_deviation"] <= 1e-12, "claim": CLAIM_PARTIAL_TRACE},
        {"check": "continuous-contraction", "qubits": args.qubits, "samples": args.samples,
         "value": cont["max_excess"], "passed": cont["max_excess"] <= 1e-9, "claim": CLAIM_CONTINUOUS},
        {"check": "commutant-dimension", "qubits": args.qubits, "samples": args.samples,
         "value": cont["commutant_dim_discrete"] - cont["commutant_dim_continuous"],
         "passed": cont["commutant_dim_discrete"] == cont["commutant_dim_continuous"],
         "claim": CLAIM_CONTINUOUS},
    ]
    write_csv(run.path("verify_clifford.csv"), rows, ["check", "qubits", "samples", "value", "passed", "claim"])
    run.summary = {r["check"]: r["value"] for r in rows}
    return _violation_exit(rows)


def _additivity_cases(args, run):
    from .channels import depolarizing, load_channel, unitary_channel
    from .linalg import PAULI_X, PAULI_Y, PAULI_Z
    from .resources import build_structure, load_resource, make_resource

    given = [args.channel_a, args.channel_b, args.resource_a, args.resource_b]
    if any(g is not None for g in given):
        if any(g is None for g in given):
            raise InputError("--channel-a, --channel-b, --resource-a and --resource-b go together")
        run.inputs.update(_check_paths(("channel-a", args.channel_a), ("channel-b", args.channel_b),
                                       ("resource-a", args.resource_a), ("resource-b", args.resource_b)))
        La = build_structure(load_resource(args.resource_a))
        Lb = build_structure(load_resource(args.resource_b))
        return [("a", load_channel(args.channel_a), La, "b", load_channel(args.channel_b), Lb)]
    L = build_structure(make_resource("discrete", [PAULI_X, PAULI_Y, PAULI_Z]))
    chans = {"depolarizing": depolarizing(2), "ad_x": unitary_channel(PAULI_X)}
    return [(a, chans[a], L, b, chans[b], L) for a in chans for b in chans]


def cmd_verify_tensor_additivity(args, run, opts):
    from .engine import tensor_additivity_check

    rows = []
    for na, pa, La, nb, pb, Lb in _additivity_cases(args, run):
        rep = tensor_additivity_check(pa, La, pb, Lb, opts)
        rows.append({"channel_a": na, "channel_b": nb, **rep, "claim": CLAIM_ADDITIVITY})
    cols = ["channel_a", "channel_b", "lower_1", "upper_1", "lower_2", "upper_2", "product_direct_lower",
            "product_witness_value", "lower_12", "upper_12", "sum_lower", "sum_upper", "lower_additive",
            "upper_subadditive", "passed", "claim"]
    write_csv(run.path("verify_tensor_additivity.csv"), rows, cols)
    run.summary = {"cases": len(rows), "passed": sum(r["passed"] for r in rows)}
    return _violation_exit(rows)


def cmd_verify_word_length(args, run, opts):
    from .groups import preset_group, verify_expected_length_commutative

    rows = []
    for name in [g.strip() for g in args.groups.split(",") if g.strip()]:
        T = preset_group(name)
        try:
            rep = verify_expected_length_commutative(T, opts)
        except LemmaViolation as exc:
            rep = exc.counterexample
        rows.append({"group": name, **rep, "claim": CLAIM_WORD_LENGTH})
    cols = ["group", "order", "mean", "lower", "upper", "witness_value", "witness_lipschitz", "passed", "claim"]
    write_csv(run.path("verify_word_length.csv"), rows, cols)
    run.summary = {"groups": len(rows), "passed": sum(bool(r["passed"]) for r in rows)}
    return _violation_exit(rows)


COMMANDS = {
    "complexity": cmd_complexity,
    "expected-length": cmd_expected_length,
    "cb-complexity": cmd_cb_complexity,
    "diamond": cmd_diamond,
    "return-time": cmd_return_time,
    "trajectory": cmd_trajectory,
    "group-stats": cmd_group_stats,
    ("verify", "pauli"): cmd_verify_pauli,
    ("verify", "clifford"): cmd_verify_clifford,
    ("verify", "tensor-additivity"): cmd_verify_tensor_additivity,
    ("verify", "word-length"): cmd_verify_word_length,
}


# ---------------------------------------------------------------------------
# plot

def trajectory_svg(rec, width: int = 640, height: int = 400) -> str:
    """Line-band plot: shaded [lower, upper] band, the line C = t and the knee."""
    ts = np.asarray(rec.times, dtype=float)
    lo = np.array([e.lower for e in rec.estimates])
    hi = np.array([e.upper for e in rec.estimates])
    pad = 50
    xmax = float(ts.max()) or 1.0
    ymax = float(max(hi.max(), rec.expected_length.upper * 1.5, 1e-12)) * 1.05

    def X(t):
        return pad + (width - 2 * pad) * t / xmax

    def Y(v):
        return height - pad - (height - 2 * pad) * min(v, ymax) / ymax

    band = [f"{X(t):.2f},{Y(v):.2f}" for t, v in zip(ts, hi)]
    band += [f"{X(t):.2f},{Y(v):.2f}" for t, v in zip(ts[::-1], lo[::-1])]
    line = f"{X(0):.2f},{Y(0):.2f} {X(min(xmax, ymax)):.2f},{Y(min(xmax, ymax)):.2f}"
    k = rec.return_time
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<polygon points="{" ".join(band)}" fill="steelblue" fill-opacity="0.4" stroke="steelblue"/>',
        f'<polyline points="{line}" fill="none" stroke="gray" stroke-dasharray="4 3"/>',
        f'<line x1="{X(k):.2f}" y1="{pad}" x2="{X(k):.2f}" y2="{height - pad}" stroke="firebrick" '
        f'stroke-dasharray="2 2"/>',
        f'<text x="{width / 2:.0f}" y="{height - 12}" text-anchor="middle" font-size="12">t '
        f'(max {xmax:.4g})</text>',
        f'<text x="14" y="{height / 2:.0f}" font-size="12" transform="rotate(-90 14 {height / 2:.0f})" '
        f'text-anchor="middle">complexity (max {ymax:.4g})</text>',
        f'<text x="{X(k) + 4:.2f}" y="{pad + 12}" font-size="11" fill="firebrick">return time</text>',
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# entry point

def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    ctx = _Run(args, argv)
    key = args.command if args.command != "verify" else ("verify", args.check)
    opts = None
    code, status, error = EXIT_OK, "ok", None
    try:
        opts = _options(args)
        ctx.out.mkdir(parents=True, exist_ok=True)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            code = COMMANDS[key](args, ctx, opts)
        ctx.warnings = [f"{w.category.__name__}: {w.message}" for w in caught]
        for w in ctx.warnings:
            print(w, file=sys.stderr)
        status = "ok" if code == EXIT_OK else "violation"
    except LemmaViolation as exc:
        code, status, error = EXIT_VIOLATION, "violation", str(exc)
    except (InputError, NoReturnTimeError, FileNotFoundError) as exc:
        code, status, error = EXIT_INPUT, "input-error", str(exc)
    except (ConvergenceError, ConditioningError) as exc:
        code, status, error = EXIT_CONVERGENCE, "not-converged", str(exc)
    if error:
        print(f"chancomp: {error}", file=sys.stderr)
    try:
        ctx.out.mkdir(parents=True, exist_ok=True)
        write_json(ctx.out / "manifest.json", ctx.manifest(status, code, opts, error))
    except OSError as exc:
        print(f"chancomp: cannot write manifest: {exc}", file=sys.stderr)
        return code or EXIT_INPUT
    if code == EXIT_OK:
        print(json.dumps(_jsonable(ctx.summary), sort_keys=True))
    return code


def run(argv) -> int:
    """Programmatic entry point: same as the console script, returns the exit code."""
    return main(argv)
