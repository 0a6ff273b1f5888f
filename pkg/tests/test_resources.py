from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chancomp.channels import apply_channel
from chancomp.errors import InputError
from chancomp.linalg import PAULI_X, PAULI_Y, PAULI_Z, embed, ginibre, hs_inner, random_unitary
from chancomp.resources import (
    amplify_resource,
    build_structure,
    join_resources,
    lipschitz_norm,
    load_resource,
    make_resource,
    mean_zero_project,
    resource_to_json,
)

PAULI = make_resource("discrete", [PAULI_X, PAULI_Y, PAULI_Z])


def test_discrete_resources_are_symmetrized_with_identity():
    S = make_resource("discrete", [np.diag([1, 1j])])
    assert len(S.elements) == 3  # I, g, g^dagger
    assert len(S.active) == 2


def test_resource_validation():
    with pytest.raises(InputError):
        make_resource("discrete", [np.array([[1, 1], [0, 1]])])
    with pytest.raises(InputError):
        make_resource("continuous", [np.array([[0, 1], [0, 0]])])
    with pytest.raises(InputError):
        make_resource("weird", [np.eye(2)])
    with pytest.raises(InputError):
        make_resource("discrete", [])


def test_full_pauli_commutant_is_scalars():
    L = build_structure(PAULI)
    assert len(L.commutant_basis) == 1
    assert len(L.mean_zero_basis) == 3
    x = np.array([[1, 2], [3, 4]], dtype=complex)
    assert np.abs(L.E_fix.apply(x) - np.trace(x) / 2 * np.eye(2)).max() < 1e-12


def test_single_generator_commutant():
    L = build_structure(make_resource("discrete", [PAULI_X]))
    assert len(L.commutant_basis) == 2  # span{I, X}
    y = mean_zero_project(PAULI_Z + PAULI_X, L)
    assert np.abs(y - PAULI_Z).max() < 1e-12


def test_trivial_resource_has_no_mean_zero_space():
    L = build_structure(make_resource("discrete", [np.eye(3)]))
    assert len(L.mean_zero_basis) == 0
    assert len(L.commutant_basis) == 9


def test_conditional_expectation_properties():
    S = make_resource("discrete", [embed(PAULI_Z, 0, [2, 2]), embed(PAULI_X, 1, [2, 2])])
    L = build_structure(S)
    rng = np.random.default_rng(0)
    x = ginibre(4, rng)
    Ex = L.E_fix.apply(x)
    assert np.abs(L.E_fix.apply(Ex) - Ex).max() < 1e-12          # idempotent
    assert abs(np.trace(Ex) - np.trace(x)) < 1e-12                # trace preserving
    for s in S.elements:                                          # lands in the commutant
        assert np.abs(s @ Ex - Ex @ s).max() < 1e-12
    y = x - Ex                                                    # HS-orthogonal complement
    for c in L.commutant_basis:
        assert abs(hs_inner(c, y)) < 1e-12


def test_lipschitz_norm_known_values():
    assert abs(lipschitz_norm(PAULI_Z / 2, PAULI) - 1.0) < 1e-12
    w = (PAULI_X + PAULI_Y + PAULI_Z) / (2 * np.sqrt(2))
    assert abs(lipschitz_norm(w, PAULI) - 1.0) < 1e-12
    assert lipschitz_norm(np.eye(2), PAULI) == 0.0


def test_variants_ordering():
    Sc = make_resource("continuous", [PAULI_X, PAULI_Y, PAULI_Z])
    rng = np.random.default_rng(1)
    for _ in range(20):
        x = ginibre(2, rng)
        inf = lipschitz_norm(x, Sc, "inf")
        l2 = lipschitz_norm(x, Sc, "l2")
        assert inf <= l2 + 1e-12 <= np.sqrt(3) * inf + 2e-12
        # for self-adjoint x the gradient form equals the l2 variant
        h = x + x.conj().T
        assert abs(lipschitz_norm(h, Sc, "gradient") - lipschitz_norm(h, Sc, "l2")) < 1e-10
    with pytest.raises(InputError):
        lipschitz_norm(PAULI_Z, PAULI, "gradient")


def test_join_and_amplify():
    S2 = join_resources([PAULI, PAULI])
    assert S2.dim == 4
    x = np.kron(PAULI_Z, np.eye(2)) / 2
    assert abs(lipschitz_norm(x, S2) - 1.0) < 1e-12
    A = amplify_resource(PAULI, 3)
    assert A.dim == 6
    assert abs(lipschitz_norm(np.kron(np.eye(3), PAULI_Z / 2), A) - 1.0) < 1e-12


def test_resource_json_round_trip(tmp_path):
    p = tmp_path / "r.json"
    p.write_text(json.dumps(resource_to_json(PAULI)))
    R = load_resource(p)
    assert R.kind == "discrete" and len(R.elements) == len(PAULI.elements)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31))
def test_lipschitz_norm_is_unitarily_covariant_and_a_seminorm(seed):
    rng = np.random.default_rng(seed)
    U = random_unitary(2, rng)
    S = make_resource("discrete", [PAULI_X, PAULI_Z])
    SU = make_resource("discrete", [U @ s @ U.conj().T for s in S.elements])
    x, y = ginibre(2, rng), ginibre(2, rng)
    a = lipschitz_norm(x, S)
    assert abs(lipschitz_norm(U @ x @ U.conj().T, SU) - a) < 1e-9 * max(1.0, a)
    assert lipschitz_norm(x + y, S) <= a + lipschitz_norm(y, S) + 1e-9
    assert abs(lipschitz_norm(x + 3.0 * np.eye(2), S) - a) < 1e-9
