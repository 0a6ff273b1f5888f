from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chancomp.errors import InputError
from chancomp.linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    as_matrix,
    commutator,
    embed,
    fix_phase,
    ginibre,
    kron_all,
    nullspace_basis,
    operator_norm,
    partial_trace,
    polar_unitary,
    psd_sqrt_inv,
    random_state,
    random_unitary,
    trace_norm,
    unvec,
    vec,
)


def test_vec_stacks_columns():
    M = np.array([[1, 2], [3, 4]], dtype=complex)
    assert np.abs(vec(M) - np.array([1, 3, 2, 4])).max() < 1e-15
    assert np.abs(unvec(vec(M), (2, 2)) - M).max() < 1e-15


def test_vec_identity_for_products():
    rng = np.random.default_rng(0)
    A, X, B = (ginibre(3, rng) for _ in range(3))
    # vec(A X B) = (B^T (x) A) vec(X)
    assert np.abs(vec(A @ X @ B) - np.kron(B.T, A) @ vec(X)).max() < 1e-12


def test_pauli_algebra():
    assert np.abs(PAULI_X @ PAULI_Y - 1j * PAULI_Z).max() < 1e-15
    assert np.abs(commutator(PAULI_X, PAULI_Z) + 2j * PAULI_Y).max() < 1e-15


def test_as_matrix_rejects_bad_input():
    with pytest.raises(InputError):
        as_matrix(np.ones((2, 3)), square=True)
    with pytest.raises(InputError):
        as_matrix(np.array([[np.nan, 0], [0, 1]]))


def test_norms_on_known_matrices():
    assert abs(operator_norm(np.diag([3.0, -5.0])) - 5.0) < 1e-12
    assert abs(trace_norm(np.diag([3.0, -5.0])) - 8.0) < 1e-12


def test_partial_trace_of_product():
    rng = np.random.default_rng(1)
    a, b = random_state(2, rng), random_state(3, rng)
    ab = np.kron(a, b)
    assert np.abs(partial_trace(ab, [2, 3], keep=[0]) - a).max() < 1e-12
    assert np.abs(partial_trace(ab, [2, 3], keep=[1]) - b).max() < 1e-12


def test_embed_matches_kron():
    assert np.abs(embed(PAULI_Z, 1, [2, 2, 2]) - kron_all([np.eye(2), PAULI_Z, np.eye(2)])).max() < 1e-15


def test_nullspace_of_pauli_commutators_is_scalars():
    I2 = np.eye(2)
    A = np.vstack([np.kron(I2, P) - np.kron(P.T, I2) for P in (PAULI_X, PAULI_Y, PAULI_Z)])
    basis = nullspace_basis(A)
    assert len(basis) == 1
    v = unvec(basis[0], (2, 2))
    assert np.abs(v - v[0, 0] * I2).max() < 1e-12


def test_fix_phase_is_phase_invariant():
    rng = np.random.default_rng(2)
    U = random_unitary(3, rng)
    assert np.abs(fix_phase(U) - fix_phase(np.exp(0.7j) * U)).max() < 1e-12


def test_psd_sqrt_inv_restricts_to_support():
    H = np.diag([4.0, 0.0]).astype(complex)
    S, P = psd_sqrt_inv(H)
    assert np.abs(S - np.diag([0.5, 0.0])).max() < 1e-12
    assert np.abs(P - np.diag([1.0, 0.0])).max() < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=2 ** 31))
def test_random_unitary_is_unitary(d, seed):
    U = random_unitary(d, np.random.default_rng(seed))
    assert np.abs(U.conj().T @ U - np.eye(d)).max() < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=2 ** 31))
def test_polar_factor_attains_trace_norm(d, seed):
    M = ginibre(d, np.random.default_rng(seed))
    W = polar_unitary(M)
    assert np.abs(W.conj().T @ W - np.eye(d)).max() < 1e-10
    assert abs(np.trace(W.conj().T @ M).real - trace_norm(M)) < 1e-9 * max(1.0, trace_norm(M))
