from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chancomp.clifford import (
    continuous_from_discrete,
    edge_cases,
    l_norm,
    norm_equivalence_check,
    partial_trace_identity_check,
    pauli_average,
    pauli_resources,
    principal_log_generator,
    site_trace,
)
from chancomp.errors import InputError
from chancomp.linalg import PAULI_X, PAULI_Z, ginibre, kron_all, partial_trace
from chancomp.resources import lipschitz_norm


def test_site_trace_against_generic_partial_trace():
    rng = np.random.default_rng(0)
    x = ginibre(8, rng)
    for j in range(3):
        keep = [k for k in range(3) if k != j]
        red = partial_trace(x, [2, 2, 2], keep=keep)
        # re-insert I/2 at site j and compare
        t = site_trace(x, j)
        assert abs(np.trace(t) - np.trace(x)) < 1e-12
        assert np.abs(partial_trace(t, [2, 2, 2], keep=keep) - red).max() < 1e-12


def test_site_trace_on_products():
    a, b = ginibre(2, np.random.default_rng(1)), ginibre(2, np.random.default_rng(2))
    x = np.kron(a, b)
    assert np.abs(site_trace(x, 0) - np.kron(np.trace(a) * np.eye(2) / 2, b)).max() < 1e-12
    assert np.abs(site_trace(x, 1) - np.kron(a, np.trace(b) * np.eye(2) / 2)).max() < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_partial_trace_identity(n):
    rep = partial_trace_identity_check(20, n, seed=3)
    assert rep["max_deviation"] < 1e-12


@pytest.mark.parametrize("n", [1, 2])
def test_norm_equivalence(n):
    rep = norm_equivalence_check(100, n, seed=4)
    assert rep["violations"] == 0
    assert 0.25 - 1e-9 <= rep["min_ratio"] <= rep["max_ratio"] <= 0.75 + 1e-9


def test_edge_cases():
    P = pauli_resources(2)
    R = P.resource_set()
    ident, z0, zz = edge_cases(2)
    assert l_norm(ident, 2) == 0.0 and lipschitz_norm(ident, R) == 0.0
    # Z on one site: ||Z - tr Z|| = 1 and |||Z||| = 2
    assert abs(l_norm(z0, 2) - 1) < 1e-12 and abs(lipschitz_norm(z0, R) - 2) < 1e-12
    assert abs(l_norm(zz, 2) - 1) < 1e-12
    assert np.abs(zz - kron_all([PAULI_Z, PAULI_Z])).max() < 1e-15


def test_qubit_limits():
    with pytest.raises(InputError):
        pauli_resources(4)
    with pytest.raises(InputError):
        l_norm(np.eye(3))


def test_continuous_generators():
    P = pauli_resources(1)
    for c in P.elements:
        a = principal_log_generator(c)
        assert np.abs(a - np.pi * (np.eye(2) - c) / 2).max() < 1e-12
    Delta, rep = continuous_from_discrete(P, samples=50, seed=5)
    assert rep["commutant_dim_discrete"] == rep["commutant_dim_continuous"] == 1
    assert rep["max_excess"] <= 1e-9
    assert Delta.kind == "continuous"


@settings(max_examples=30, deadline=None, derandomize=True)
@given(st.integers(min_value=1, max_value=3), st.integers(min_value=0, max_value=2 ** 31))
def test_pauli_average_is_conditional_expectation(n, seed):
    x = ginibre(2 ** n, np.random.default_rng(seed))
    j = seed % n
    y = pauli_average(x, j, n)
    assert np.abs(pauli_average(y, j, n) - y).max() < 1e-12
    X = np.kron(np.eye(2 ** j), np.kron(PAULI_X, np.eye(2 ** (n - j - 1))))
    assert np.abs(X @ y - y @ X).max() < 1e-12
