from __future__ import annotations

import math

import numpy as np
import pytest
from oracles import hermitian_wasserstein_grid

from chancomp.engine import SolveOptions, entropy_transport_check, relative_entropy, subalgebra_index, wasserstein_norm
from chancomp.engine.transport import commutant_blocks
from chancomp.errors import InputError
from chancomp.linalg import PAULI_X, PAULI_Y, PAULI_Z, embed, random_state
from chancomp.resources import build_structure, diagonal_basis, lipschitz_norm, make_resource

FAST = SolveOptions(restarts=2, max_iter=20)
PAULI = make_resource("discrete", [PAULI_X, PAULI_Y, PAULI_Z])


def test_index_of_full_matrix_algebra_over_scalars():
    res = subalgebra_index(build_structure(PAULI), FAST)
    assert abs(res.lower - 2) < 1e-4 and abs(res.upper - 2) < 1e-4
    assert res.blocks == [(1, 2)]


def test_index_over_diagonal_subalgebra():
    res = subalgebra_index(build_structure(make_resource("discrete", [PAULI_Z])), FAST)
    assert abs(res.lower - 2) < 1e-4 and abs(res.upper - 2) < 1e-4


def test_index_of_algebra_over_itself():
    res = subalgebra_index(build_structure(make_resource("discrete", [np.eye(2)])), FAST)
    assert abs(res.lower - 1) < 1e-9 and abs(res.upper - 1) < 1e-9


def test_index_two_qubits_over_one_factor():
    # commutant of Paulis on the second site is M_2 (x) I_2
    S = make_resource("discrete", [embed(P, 1, [2, 2]) for P in (PAULI_X, PAULI_Y, PAULI_Z)])
    L = build_structure(S)
    assert commutant_blocks(L) == [(2, 2)]
    res = subalgebra_index(L, FAST)
    assert abs(res.upper - 4) < 1e-9 and res.lower >= 4 - 1e-4


def test_index_rejects_ambient_structures():
    L = build_structure(make_resource("discrete", [PAULI_X]), ambient=diagonal_basis(2))
    with pytest.raises(InputError):
        subalgebra_index(L)


def test_wasserstein_matches_grid_oracle_from_below():
    L = build_structure(PAULI)
    rho = PAULI_Z / 2
    iv = wasserstein_norm(rho, L, "inf", FAST)
    grid = hermitian_wasserstein_grid(rho, lambda X: lipschitz_norm(X, PAULI))
    assert abs(grid - 0.5) < 1e-6
    assert iv.lower >= grid - 1e-6
    assert iv.lower <= iv.upper


def test_wasserstein_trivial_cases():
    L = build_structure(PAULI)
    assert wasserstein_norm(np.zeros((2, 2)), L).upper == 0.0
    assert wasserstein_norm(np.eye(2) / 2, L).upper == 0.0
    with pytest.raises(InputError):
        wasserstein_norm(np.array([[0, 1], [0, 0]]), L)


def test_relative_entropy_closed_forms():
    rho = np.diag([1.0, 0.0]).astype(complex)
    assert abs(relative_entropy(rho, np.eye(2) / 2) - math.log(2)) < 1e-12
    assert abs(relative_entropy(rho, rho)) < 1e-12
    with pytest.raises(InputError):
        relative_entropy(np.eye(2) / 2, rho)
    rng = np.random.default_rng(0)
    for _ in range(10):
        s = random_state(3, rng)
        assert -1e-12 <= relative_entropy(s, np.eye(3) / 3) <= math.log(3) + 1e-12


def test_entropy_transport_check_on_depolarizing_lindbladian():
    L = build_structure(make_resource("continuous", [PAULI_X, PAULI_Y, PAULI_Z]))
    rho = np.diag([1.0, 0.0]).astype(complex)
    rep = entropy_transport_check(rho, L, opts=FAST)
    assert abs(rep["relative_entropy"] - math.log(2)) < 1e-12
    assert rep["lambda_kind"] == "EMPIRICAL" and not rep["certified"]
    assert rep["transport_holds"] and rep["expected_length_holds"]
    rep = entropy_transport_check(np.eye(2) / 2, L, lam=1.0, opts=FAST)
    assert rep["relative_entropy"] == 0.0 and rep["wasserstein_lower"] == 0.0
    assert rep["lambda_kind"] == "SUPPLIED"


def test_entropy_transport_check_needs_continuous_resources():
    with pytest.raises(InputError):
        entropy_transport_check(np.eye(2) / 2, build_structure(PAULI), lam=1.0)
