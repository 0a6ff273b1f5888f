from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.linalg

from chancomp.channels import depolarizing
from chancomp.dynamics import (
    SemigroupFamily,
    complexity_trajectory,
    default_grid,
    evolve,
    lindblad_generator,
    make_semigroup,
    preset_semigroup,
    profile_check,
    return_time,
    spectral_gap_of,
)
from chancomp.engine import SolveOptions
from chancomp.errors import InputError, NoReturnTimeError
from chancomp.linalg import PAULI_X, PAULI_Y, PAULI_Z, random_state
from chancomp.resources import make_resource


def test_lindblad_generator_matches_direct_formula():
    rng = np.random.default_rng(0)
    rho = random_state(2, rng)
    G = lindblad_generator([PAULI_Z], 2)
    out = (G @ rho.reshape(-1, order="F")).reshape((2, 2), order="F")
    direct = PAULI_Z @ rho @ PAULI_Z - rho  # Z^2 = I
    assert np.abs(out - direct).max() < 1e-12


def test_pauli_mixture_converges_to_depolarizing():
    F = preset_semigroup("pauli-mixture")
    assert F.linear_bound
    T = evolve(F, 40.0)
    assert np.abs(T.superop - depolarizing(2).superop).max() < 1e-12
    assert abs(spectral_gap_of(F) - 1.0) < 1e-12


def test_return_time_closed_forms():
    # T_t = E + exp(-t)(id - E) and ||id - E||_diamond = 3/2
    F = preset_semigroup("pauli-mixture")
    assert abs(return_time(F, 0.5) - math.log(3)) < 1e-3
    # dephasing: T_t - E has diamond norm exp(-2t)
    D = preset_semigroup("dephasing")
    assert abs(return_time(D, 0.5) - math.log(2) / 2) < 1e-3


def test_return_time_upper_norm_is_not_earlier():
    F = preset_semigroup("pauli-mixture")
    assert return_time(F, 0.5, norm="inf_inf_upper") <= return_time(F, 0.5) + 2e-4


def test_return_time_errors():
    F = preset_semigroup("pauli-mixture")
    with pytest.raises(InputError):
        return_time(F, 0.0)
    with pytest.raises(InputError):
        return_time(F, 0.5, norm="hs")


def test_no_gap_is_reported():
    # a mixture of Z only does not relax onto the commutant of {X, Y, Z}
    R = make_resource("discrete", [PAULI_X, PAULI_Y, PAULI_Z])
    with pytest.raises(InputError):
        make_semigroup("discrete", R, mu=[1.0, 0.0], unitaries=[np.eye(2), PAULI_Z])
    # trivial resources: everything is fixed, so the return time is zero
    F = make_semigroup("discrete", make_resource("discrete", [np.eye(2)]))
    assert return_time(F, 0.5) == 0.0
    # a family whose generator vanishes off the commutant never returns
    P = preset_semigroup("pauli-mixture")
    stuck = SemigroupFamily("discrete", np.zeros((4, 4), dtype=complex), P.structure, P.E_fix)
    with pytest.raises(NoReturnTimeError):
        return_time(stuck, 0.5)


def test_semigroup_kind_mismatch():
    with pytest.raises(InputError):
        make_semigroup("lindblad", make_resource("discrete", [PAULI_X]))
    with pytest.raises(InputError):
        make_semigroup("other", make_resource("discrete", [PAULI_X]))


def test_evolution_is_a_semigroup():
    F = preset_semigroup("pauli-lindblad")
    a, b = evolve(F, 0.3).superop, evolve(F, 0.5).superop
    assert np.abs(a @ b - evolve(F, 0.8).superop).max() < 1e-12
    assert np.abs(scipy.linalg.expm(0.0 * F.generator) - np.eye(4)).max() < 1e-15


def test_default_grid_spans_the_knee():
    g = default_grid(2.0)
    assert len(g) == 25 and abs(g[0] - 0.1) < 1e-12 and abs(g[-1] - 10.0) < 1e-12
    with pytest.raises(InputError):
        default_grid(0.0)


def test_short_trajectory_respects_linear_bound_and_profile():
    F = preset_semigroup("pauli-mixture")
    rec = complexity_trajectory(F, [0.1, 0.5, 2.0, 6.0], SolveOptions(restarts=1, max_iter=20))
    for t, est in zip(rec.times, rec.estimates):
        assert est.upper <= t + 1e-6
        assert est.lower <= est.upper
    assert all(p["passed"] for p in profile_check(rec))
    csv_text = rec.to_csv()
    assert csv_text.splitlines()[0] == "time,lower,upper,certificate_min,regime,seed,claim"
    assert len(csv_text.splitlines()) == 5


def test_trajectory_grid_validation():
    F = preset_semigroup("pauli-mixture")
    with pytest.raises(InputError):
        complexity_trajectory(F, [1.0, 0.5])
    with pytest.raises(InputError):
        complexity_trajectory(F, [])
