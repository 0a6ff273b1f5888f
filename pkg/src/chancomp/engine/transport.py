"""Transport-side quantities: Wasserstein dual norm, subalgebra index, entropy checks.

States are ordinary density matrices (trace one); pairing with observables
is ``tr(rho X)``, which equals the normalized-trace pairing once densities are
taken relative to the normalized trace.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from ..errors import InputError
from ..linalg import as_matrix, dag, logm_psd, nullspace_basis, psd_sqrt_inv, unvec, vec
from ..resources import VARIANTS, LipschitzStructure, ad_superop
from .estimate import SolveOptions, _ball, expected_length, spectral_factor
from .norms import NormInterval

NET_SIZE = 64


# ---------------------------------------------------------------------------
# Wasserstein dual norm

def wasserstein_norm(rho, L: LipschitzStructure, variant: str = "inf",
                     opts: SolveOptions | None = None) -> NormInterval:
    """Interval for sup{ |tr(rho X)| : X mean-zero, |||X||| <= 1 }.

    Only the mean-zero part of ``rho`` matters.  The lower bound is a
    feasible X from linear ascent over the Lipschitz ball; the upper bound is
    ||P_A rho||_HS * sqrt(kD/lam) by Cauchy-Schwarz and the spectral-gap
    inequality.
    """
    opts = opts or SolveOptions()
    rho = as_matrix(rho, square=True, name="rho")
    if rho.shape[0] != L.dim:
        raise InputError("dimension mismatch")
    if np.abs(rho - dag(rho)).max() > 1e-9:
        raise InputError("rho must be Hermitian")
    if variant not in VARIANTS:
        raise InputError(f"variant must be one of {VARIANTS}")
    B = L.mean_zero_matrix()
    if B.shape[1] == 0:
        return NormInterval(0.0, 0.0, np.zeros_like(rho))
    g = dag(B) @ vec(rho)  # tr(rho X) = <rho, X>_HS = g^dagger c for X = B c
    gnorm = float(np.linalg.norm(g))
    if gnorm <= 1e-14:
        return NormInterval(0.0, 0.0, np.zeros_like(rho))
    ball = _ball(L, variant)
    gn = g / gnorm
    c = gn / ball.norm(gn)
    scale = float(np.linalg.norm(c))
    best_val, best_c = abs(np.vdot(g, c)), c
    for _ in range(opts.max_iter):
        z = c
        for eta in opts.steps:
            z = ball.project(z + eta * scale * gn, tol=opts.tol, max_cycles=opts.max_cycles).coords
        z = ball.normalize(z)
        val = abs(np.vdot(g, z))
        if not val > best_val * (1 + opts.rtol):
            break
        best_val, best_c, c = val, z, z
        scale = float(np.linalg.norm(c))
    upper = gnorm * spectral_factor(L, variant)
    return NormInterval(float(best_val), float(max(upper, best_val)), ball.to_matrix(best_c))


# ---------------------------------------------------------------------------
# subalgebra index

@dataclass
class IndexResult:
    lower: float
    upper: float
    blocks: list = field(default_factory=list)  # (n_k, m_k) pairs
    witness: np.ndarray | None = None


def commutant_blocks(L: LipschitzStructure, seed: int = 0) -> list[tuple[int, int]]:
    """Block structure (n_k, m_k) of the commutant, read off from its center.

    The commutant of a symmetric resource set is a *-algebra, unitarily
    equivalent to a direct sum of M_{n_k} (x) I_{m_k}.
    """
    D = L.dim
    comm = list(L.commutant_basis)
    C = L.commutant_matrix()
    if not comm:
        return []
    # center: elements of the commutant commuting with the whole commutant
    stacked = np.vstack([ad_superop(b) for b in comm]) @ C
    coords = nullspace_basis(stacked, L.tol)
    center = [unvec(C @ z, (D, D)) for z in coords]
    rng = np.random.default_rng(seed)
    h = sum(rng.standard_normal() * (z + dag(z)) / 2 for z in center)
    w, V = np.linalg.eigh(h)
    groups, start = [], 0
    spread = max(1.0, np.abs(w).max())
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] > 1e-6 * spread:
            groups.append(V[:, start:k])
            start = k
    blocks = []
    for Vk in groups:
        P = Vk @ dag(Vk)
        rank = Vk.shape[1]
        comp = np.column_stack([vec(P @ b @ P) for b in comm])
        s = np.linalg.svd(comp, compute_uv=False)
        dimk = int(np.sum(s > 1e-8 * max(s[0], 1e-300)))
        n = int(round(math.sqrt(dimk)))
        if n * n != dimk or rank % n:
            raise InputError("commutant is not a *-algebra (resource set not symmetric?)")
        blocks.append((n, rank // n))
    return blocks


def _index_objective(psi, E):
    rho = np.outer(psi, psi.conj())
    Er = E.apply(rho)
    Sinv, P = psd_sqrt_inv(Er)
    v = Sinv @ psi
    # psi lies in the support of E(rho) for conditional expectations; the
    # ratio is invariant under rescaling psi
    return float(np.real(np.vdot(v, v)))


def subalgebra_index(L: LipschitzStructure, opts: SolveOptions | None = None) -> IndexResult:
    """Interval for Ind(M_d : commutant).

    For pure rho the ratio is psi^dagger E(rho)^{-1} psi, and pure states
    suffice by convexity.  Lower: a deterministic state net followed by
    local ascent.  Upper: the block formula sum_k m_k * min(n_k, m_k),
    exact for a commutant of the form sum_k M_{n_k} (x) I_{m_k}.
    """
    opts = opts or SolveOptions()
    if L.ambient_basis is not None:
        raise InputError("subalgebra index is computed relative to the full matrix algebra")
    D = L.dim
    E = L.E_fix
    blocks = commutant_blocks(L, seed=int(opts.seed))
    upper = float(sum(m * min(n, m) for n, m in blocks))
    rng = np.random.default_rng(np.random.SeedSequence([int(opts.seed), 7]))
    net = [np.eye(D, dtype=complex)[k] for k in range(D)]
    net.append(np.ones(D, dtype=complex) / math.sqrt(D))
    while len(net) < NET_SIZE:
        v = rng.standard_normal(D) + 1j * rng.standard_normal(D)
        net.append(v / np.linalg.norm(v))
    vals = [_index_objective(v, E) for v in net]
    order = np.argsort(vals, kind="stable")[::-1][: max(1, min(opts.restarts, len(net)))]

    def neg(p):
        psi = p[:D] + 1j * p[D:]
        return -_index_objective(psi, E)

    best, best_psi = max(vals), net[int(np.argmax(vals))]
    for k in order:
        v = net[k]
        res = scipy.optimize.minimize(neg, np.concatenate([v.real, v.imag]), method="L-BFGS-B",
                                      options={"maxiter": opts.max_iter * 5})
        psi = res.x[:D] + 1j * res.x[D:]
        val = _index_objective(psi, E)
        if val > best:
            best, best_psi = val, psi / np.linalg.norm(psi)
    return IndexResult(float(best), max(upper, float(best)), blocks, best_psi)


# ---------------------------------------------------------------------------
# relative entropy and the transport-entropy consistency check

def relative_entropy(rho, sigma) -> float:
    """D(rho || sigma) = tr rho (log rho - log sigma), natural log, support convention."""
    rho = as_matrix(rho, square=True)
    sigma = as_matrix(sigma, square=True)
    lr, _ = logm_psd(rho)
    ls, Ps = logm_psd(sigma)
    w, V = np.linalg.eigh((rho + dag(rho)) / 2)
    supp = V[:, w > 1e-14 * max(w.max(), 1e-300)]
    leak = np.linalg.norm(supp - Ps @ supp)
    if leak > 1e-8:
        raise InputError("support of rho is not contained in the support of sigma")
    return float(np.real(np.trace(rho @ (lr - ls))))


def _check_state(rho, d):
    rho = as_matrix(rho, square=True, name="rho")
    if rho.shape[0] != d:
        raise InputError("dimension mismatch")
    if np.abs(rho - dag(rho)).max() > 1e-9:
        raise InputError("rho must be Hermitian")
    if np.linalg.eigvalsh((rho + dag(rho)) / 2)[0] < -1e-9 or abs(np.trace(rho) - 1) > 1e-9:
        raise InputError("rho must be a density matrix (PSD, trace one)")
    return (rho + dag(rho)) / 2


def empirical_mlsi(generator: np.ndarray, E, d: int, seed: int = 0, t: float = 0.01,
                   h: float = 1e-4) -> float:
    """EMPIRICAL decay rate: min over a 64-state net of -d/dt log D(T_t rho || E rho) at t.

    A consistency probe only; not a certified log-Sobolev constant.
    """
    import scipy.linalg

    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 11]))
    Tm = scipy.linalg.expm((t - h) * generator)
    Tp = scipy.linalg.expm((t + h) * generator)
    rates = []
    k = 0
    while len(rates) < NET_SIZE and k < 4 * NET_SIZE:
        k += 1
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        mix = rng.uniform(0.0, 0.5)
        rho = (1 - mix) * np.outer(v, v.conj()) / np.vdot(v, v).real + mix * np.eye(d) / d
        Er = E.apply(rho)
        rm = unvec(Tm @ vec(rho), (d, d))
        rp = unvec(Tp @ vec(rho), (d, d))
        Dm, Dp = relative_entropy(rm, Er), relative_entropy(rp, Er)
        if Dm <= 1e-12 or Dp <= 1e-12:
            continue
        rates.append(-(math.log(Dp) - math.log(Dm)) / (2 * h))
    if not rates:
        return math.inf
    return float(min(rates))


def entropy_transport_check(rho, L: LipschitzStructure, lam: float | None = None,
                            opts: SolveOptions | None = None) -> dict:
    """Compare the Wasserstein distance of rho to E(rho) with 4 sqrt(2 D / lam).

    ``L`` must have a continuous (self-adjoint jump) resource set; the
    semigroup is generated by L(x) = sum_j a_j x a_j - (a_j^2 x + x a_j^2)/2.
    When ``lam`` is omitted an EMPIRICAL decay rate is used and the report is
    flagged as not certified.  Also compares the expected-length lower bound
    with 4 sqrt(2 |Delta| log Ind_upper / lam).
    """
    from ..dynamics import lindblad_generator

    opts = opts or SolveOptions()
    if L.resource.kind != "continuous":
        raise InputError("entropy transport check needs self-adjoint jumps (continuous resources)")
    d = L.dim
    rho = _check_state(rho, d)
    E = L.E_fix
    Er = E.apply(rho)
    Dval = max(relative_entropy(rho, Er), 0.0)
    certified = lam is not None
    if lam is None:
        lam = empirical_mlsi(lindblad_generator(L.resource.active, d), E, d, seed=int(opts.seed))
    if not lam > 0:
        raise InputError("decay rate lambda must be positive")
    w = wasserstein_norm(rho - Er, L, "gradient", opts)
    rhs = 4 * math.sqrt(2 * Dval / lam) if math.isfinite(lam) else 0.0
    idx = subalgebra_index(L, opts)
    el = expected_length(L, opts)
    k = len(L.resource.active)
    el_rhs = 4 * math.sqrt(2 * k * math.log(max(idx.upper, 1.0)) / lam) if math.isfinite(lam) else 0.0
    return {
        "relative_entropy": Dval,
        "lambda": float(lam),
        "lambda_kind": "SUPPLIED" if certified else "EMPIRICAL",
        "certified": certified,
        "wasserstein_lower": w.lower,
        "wasserstein_upper": w.upper,
        "transport_bound": rhs,
        "transport_holds": bool(w.lower <= rhs + 1e-9),
        "index_upper": idx.upper,
        "expected_length_lower": el.lower,
        "expected_length_bound": el_rhs,
        "expected_length_holds": bool(el.lower <= el_rhs + 1e-9),
    }
