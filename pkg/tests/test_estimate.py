from __future__ import annotations

import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chancomp.channels import amplify, compose, depolarizing, identity_channel, make_channel, mix, unitary_channel
from chancomp.engine import (
    DegradedWarning,
    SolveOptions,
    amplified_structure,
    cb_complexity_estimate,
    complexity_estimate,
    embed_level,
    expected_length,
    spectral_gap,
)
from chancomp.errors import InputError
from chancomp.linalg import PAULI_X, PAULI_Y, PAULI_Z, ginibre, operator_norm
from chancomp.resources import build_structure, lipschitz_norm, make_resource

FAST = SolveOptions(restarts=2, max_iter=20)
PAULI = build_structure(make_resource("discrete", [PAULI_X, PAULI_Y, PAULI_Z]))
HERMITIAN_WITNESS_VALUE = np.sqrt(3) / (2 * np.sqrt(2))


def _objective(phi, L, w, level=1):
    ch = amplify(phi, level)
    Lm = amplified_structure(L, level) if level > 1 else L
    y = ch.apply(w, dual=True) - w
    return operator_norm(y) / max(1.0, lipschitz_norm(w, Lm.resource))


def test_identity_channel_has_zero_complexity():
    est = complexity_estimate(identity_channel(2), PAULI, FAST)
    assert est.lower == 0.0 and est.upper == 0.0


def test_depolarizing_equals_expected_length():
    est = complexity_estimate(depolarizing(2), PAULI, FAST)
    el = expected_length(PAULI, FAST)
    assert abs(est.lower - el.lower) < 1e-9 and abs(est.upper - el.upper) < 1e-9
    # the Hermitian witness (X+Y+Z)/(2 sqrt 2) is beaten by a complex one
    assert est.lower >= HERMITIAN_WITNESS_VALUE - 1e-9
    assert est.upper <= 0.75 + 1e-9


def test_ad_x_single_generator():
    L = build_structure(make_resource("discrete", [PAULI_X]))
    est = complexity_estimate(unitary_channel(PAULI_X), L, FAST)
    # witness Z/2: |||Z/2||| = 1 and (Ad_X - id)(Z/2) = -Z
    assert est.lower >= 1 - 1e-9
    assert est.upper <= 1 + 1e-9


def test_trivial_resource_expected_length_is_zero():
    L = build_structure(make_resource("discrete", [np.eye(2)]))
    est = expected_length(L, FAST)
    assert est.lower == 0.0 and est.upper == 0.0


def test_interval_soundness_on_random_channel():
    rng = np.random.default_rng(7)
    G = np.vstack([ginibre(2, rng) for _ in range(3)])
    Q, _ = np.linalg.qr(G)
    phi = make_channel([Q[2 * k:2 * k + 2] for k in range(3)])
    est = complexity_estimate(phi, PAULI, FAST)
    assert abs(_objective(phi, PAULI, est.witness) - est.lower) < 1e-9
    assert all(c.value >= est.lower - 1e-9 for c in est.certificates)
    assert est.upper == min(c.value for c in est.certificates)


def test_determinism_and_thread_invariance():
    a = complexity_estimate(depolarizing(2), PAULI, SolveOptions(restarts=3, max_iter=10, seed=5))
    b = complexity_estimate(depolarizing(2), PAULI, SolveOptions(restarts=3, max_iter=10, seed=5))
    c = complexity_estimate(depolarizing(2), PAULI, SolveOptions(restarts=3, max_iter=10, seed=5, threads=3))
    assert a.to_json() == b.to_json() == c.to_json()


def test_cb_levels_monotone_and_level_one_matches():
    est1 = complexity_estimate(depolarizing(2), PAULI, FAST)
    cb = cb_complexity_estimate(depolarizing(2), PAULI, SolveOptions(restarts=2, max_iter=20, levels=(1, 2)))
    lowers = [v for _, v in cb.level_lowers]
    assert lowers[0] == est1.lower
    assert all(b >= a for a, b in zip(lowers, lowers[1:]))
    assert abs(cb.lower - 0.75) < 1e-3 and abs(cb.upper - 0.75) < 1e-9
    assert abs(_objective(depolarizing(2), PAULI, cb.witness, cb.level) - cb.lower) < 1e-9


def test_embed_level_preserves_norms():
    rng = np.random.default_rng(8)
    x = ginibre(4, rng)
    y = embed_level(x, 2, 3)
    assert y.shape == (6, 6)
    assert abs(operator_norm(y) - operator_norm(x)) < 1e-12


def test_degraded_warning_is_reported():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        est = complexity_estimate(depolarizing(2), PAULI, SolveOptions(restarts=1, max_iter=3, max_cycles=1))
    assert any(issubclass(w.category, DegradedWarning) for w in caught)
    assert est.warnings
    assert est.lower <= est.upper


def test_spectral_gap_of_pauli_laplacian():
    # sum_s ad_s^dagger ad_s acts as 8 on traceless 2x2 matrices
    assert abs(spectral_gap(PAULI) - 8.0) < 1e-9


def test_options_validation():
    with pytest.raises(InputError):
        SolveOptions(steps=())
    with pytest.raises(InputError):
        SolveOptions(seed=-1)
    with pytest.raises(InputError):
        SolveOptions(levels=(0,))


def _random_channel(d, rank, rng):
    G = np.vstack([ginibre(d, rng) for _ in range(rank)])
    Q, _ = np.linalg.qr(G)
    return make_channel([Q[k * d:(k + 1) * d] for k in range(rank)])


@settings(max_examples=6, deadline=None, derandomize=True)
@given(st.integers(min_value=0, max_value=2 ** 31), st.floats(min_value=0.05, max_value=0.95))
def test_subadditivity_and_convexity_on_intervals(seed, p):
    rng = np.random.default_rng(seed)
    a, b = _random_channel(2, 2, rng), _random_channel(2, 2, rng)
    opts = SolveOptions(restarts=1, max_iter=10)
    ea, eb = complexity_estimate(a, PAULI, opts), complexity_estimate(b, PAULI, opts)
    ec = complexity_estimate(compose(a, b), PAULI, opts)
    em = complexity_estimate(mix([a, b], [p, 1 - p]), PAULI, opts)
    assert ec.lower <= ea.upper + eb.upper + 1e-6
    assert em.lower <= p * ea.upper + (1 - p) * eb.upper + 1e-6
