import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import mixed_state, pure_state
from poissonqm.bipartite import (
    BipartiteState,
    chain_trace,
    dnm_dimension,
    dnm_membership,
    max_entropy_check,
    moment_equality_check,
    partial_trace,
    purify,
    random_bipartite,
    reduced_matrix,
    traced_brackets,
    tracing_jacobian,
    tracing_jacobian_rank,
)
from poissonqm.casimirs import moments
from poissonqm.errors import InputError, TheoremViolation
from poissonqm.gellmann import basis_for, matrix_to_state, tensors_for
from poissonqm.orbits import OrbitSpectrum, is_pure, poisson_rank, sample_orbit
from poissonqm.state import GellMannState

seeds = st.integers(0, 2**32 - 1)
pairs = st.tuples(st.integers(2, 4), st.integers(1, 4))


def test_partial_trace_examples():
    bell = BipartiteState(2, 2, np.eye(2) / math.sqrt(2))
    st_ = partial_trace(bell, "A", basis_for(2))
    assert np.allclose(st_.alpha, 0) and st_.alpha0 == pytest.approx(1)
    rng = np.random.default_rng(0)
    u = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    prod = BipartiteState(3, 2, np.outer(u / np.linalg.norm(u), v / np.linalg.norm(v)))
    assert is_pure(partial_trace(prod, "A", basis_for(3)), basis_for(3))
    assert is_pure(partial_trace(prod, "B", basis_for(2)), basis_for(2))


@given(nm=pairs, seed=seeds)
def test_partial_trace_unit_trace(nm, seed):
    n, m = nm
    b = random_bipartite(n, m, seed)
    assert partial_trace(b, "A", basis_for(n)).alpha0 == pytest.approx(1, abs=1e-14)
    if m >= 2:
        assert partial_trace(b, "B", basis_for(m)).alpha0 == pytest.approx(1, abs=1e-14)


@given(nm=pairs, seed=seeds)
def test_moment_equality(nm, seed):
    rep = moment_equality_check(random_bipartite(*nm, seed), 4, 1e-12)
    assert rep.passed, rep


@given(seed=seeds, k=st.integers(1, 5))
def test_chain_trace_matches_matrix_power(seed, k):
    a = random_bipartite(3, 2, seed).a
    rho = a @ a.conj().T
    assert chain_trace(a, k) == pytest.approx(np.trace(np.linalg.matrix_power(rho, k)).real, abs=1e-14)


def test_moment_equality_examples():
    assert moment_equality_check(random_bipartite(3, 2, 0), 3, 1e-12).passed
    prod = BipartiteState(2, 3, np.outer([1, 0], [0, 1, 0]))
    for side in "AB":
        assert np.allclose(np.linalg.eigvalsh(reduced_matrix(prod, side))[-1], 1)
    bell = BipartiteState(2, 2, np.eye(2) / math.sqrt(2))
    assert np.trace(reduced_matrix(bell, "A") @ reduced_matrix(bell, "A")).real == pytest.approx(0.5)
    assert np.trace(reduced_matrix(bell, "B") @ reduced_matrix(bell, "B")).real == pytest.approx(0.5)


def test_dnm_membership_examples():
    b4, b3 = basis_for(4), basis_for(3)
    for seed in range(5):
        assert dnm_membership(partial_trace(random_bipartite(4, 2, seed), "A", b4), b4, 2)
    assert not dnm_membership(mixed_state(3, 1), b3, 2)
    assert dnm_membership(pure_state(3, 1), b3, 1)


def test_dnm_dimension_examples():
    for n in range(2, 6):
        assert dnm_dimension(n, 1) == 2 * (n - 1)
        assert dnm_dimension(n, n) == n * n - 1
        assert dnm_dimension(n, n + 2) == n * n - 1
    assert dnm_dimension(3, 2) == 7


@pytest.mark.parametrize("n,m,rank", [(2, 1, 2), (3, 1, 4), (3, 2, 7), (4, 2, 11), (3, 3, 8)])
def test_tracing_rank(n, m, rank):
    for seed in range(5):
        assert tracing_jacobian_rank(random_bipartite(n, m, seed), basis_for(n)) == rank


def test_tracing_jacobian_fd_agrees():
    b = random_bipartite(3, 2, 4)
    basis = basis_for(3)
    assert np.allclose(tracing_jacobian(b, basis), tracing_jacobian(b, basis, "fd"), atol=1e-8)
    assert tracing_jacobian_rank(b, basis, method="fd") == 7


@given(n=st.integers(2, 4), m=st.integers(1, 3), seed=seeds)
def test_purify_converse(n, m, seed):
    m = min(m, n)
    state = mixed_state(n, seed, rank=m)
    basis = basis_for(n)
    assert dnm_membership(state, basis, m)
    b = purify(state, basis, m)
    assert b.norm2 == pytest.approx(1, abs=1e-12)
    assert np.allclose(partial_trace(b, "A", basis).alpha, state.alpha, atol=1e-10)


def test_purify_rejects_high_rank():
    with pytest.raises(ValueError):
        purify(mixed_state(3, 0), basis_for(3), 2)


@given(n=st.integers(2, 3), m=st.integers(1, 3), seed=seeds)
def test_traced_brackets_close_on_reduced_state(n, m, seed):
    b = random_bipartite(n, m, seed)
    basis, t = basis_for(n), tensors_for(n)
    br = traced_brackets(b, basis)
    alpha = partial_trace(b, "A", basis).alpha
    assert np.allclose(br[1:, 1:], 4 * t.f @ alpha, atol=1e-12)
    assert np.allclose(br[0], 0, atol=1e-12)


@pytest.mark.parametrize("n,m", [(3, 1), (3, 2), (4, 2)])
def test_max_entropy_leaf(n, m):
    basis, t = basis_for(n), tensors_for(n)
    spectrum = OrbitSpectrum(n, [1 / m, 0.0], (m, n - m))
    for seed in range(5):
        state = sample_orbit(spectrum, basis, seed)
        assert max_entropy_check(state, basis, m)
        assert poisson_rank(t, state) == 2 * m * (n - m)


def test_max_entropy_examples():
    assert max_entropy_check(GellMannState(3, np.zeros(8)), basis_for(3), 3)
    assert not max_entropy_check(pure_state(3, 0), basis_for(3), 2)
    assert not max_entropy_check(mixed_state(3, 0, rank=2), basis_for(3), 2)


def test_max_entropy_tolerance_is_loose_in_eigenvalues():
    # Moments constrain eigenvalue errors only to second order, so a state
    # within tolerance on Tr rho^2 and Tr rho^3 can have eigenvalues off by
    # about sqrt(tolerance); the post-check flags it instead of accepting.
    basis = basis_for(3)
    delta = 1e-6
    rho = np.diag([0.5 + delta, 0.5 - delta, 0.0])
    state = matrix_to_state(rho, basis)
    assert abs(moments(state, basis, 2)[0] - 0.5) <= 1e-10
    with pytest.raises(TheoremViolation):
        max_entropy_check(state, basis, 2)


def test_random_bipartite_examples():
    a = random_bipartite(2, 2, 0)
    assert a.norm2 == pytest.approx(1)
    assert np.array_equal(a.a, random_bipartite(2, 2, 0).a)
    assert is_pure(partial_trace(random_bipartite(3, 1, 5), "A", basis_for(3)), basis_for(3))


def test_bipartite_round_trip_and_errors():
    b = random_bipartite(3, 2, 1)
    again = BipartiteState.from_dict(b.to_dict())
    assert np.array_equal(again.a, b.a)
    with pytest.raises(InputError, match="^a"):
        BipartiteState.from_dict({"n": 2, "m": 2, "a": {"re": [[1, 0]], "im": [[0, 0]]}})
    with pytest.raises(InputError, match="^m:"):
        BipartiteState.from_dict({"n": 2, "a": {}})
