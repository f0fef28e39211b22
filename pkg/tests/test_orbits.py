import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import mixed_state, pure_state
from poissonqm.casimirs import moments
from poissonqm.errors import SpectrumError
from poissonqm.gellmann import basis_for, matrix_to_state, tensors_for
from poissonqm.orbits import (
    OrbitSpectrum,
    classify_spectrum,
    generic_spectrum,
    haar_unitary,
    is_pure,
    orbit_dimension,
    partitions,
    poisson_rank,
    sample_orbit,
    spectrum_from_eigenvalues,
)
from poissonqm.state import GellMannState

seeds = st.integers(0, 2**32 - 1)


def test_classify_examples():
    b3 = basis_for(3)
    s = classify_spectrum(GellMannState(3, np.zeros(8)), b3)
    assert np.allclose(s.eigenvalues, [1 / 3]) and s.multiplicities == (3,)
    s = classify_spectrum(pure_state(3, 0), b3)
    assert np.allclose(s.eigenvalues, [1, 0], atol=1e-12) and s.multiplicities == (1, 2)
    s = classify_spectrum(matrix_to_state(np.diag([0.2, 0.5, 0.3]), b3), b3)
    assert np.allclose(s.eigenvalues, [0.5, 0.3, 0.2]) and s.multiplicities == (1, 1, 1)
    assert not s.ambiguous and not s.near_degenerate


def test_clustering_flags():
    s = spectrum_from_eigenvalues([0.5, 0.5 - 5e-9, 0.0], 1e-8)
    assert s.multiplicities == (2, 1)
    s = spectrum_from_eigenvalues([0.5, 0.5 - 1.5e-8, 0.0], 1e-8)
    assert s.multiplicities == (1, 1, 1) and s.ambiguous and s.near_degenerate
    with pytest.raises(ValueError):
        spectrum_from_eigenvalues([1.0], 0.0)


def test_orbit_dimension_examples():
    for n in range(2, 6):
        assert orbit_dimension(OrbitSpectrum(n, [1.0, 0.0], (1, n - 1))) == 2 * (n - 1)
        assert orbit_dimension(OrbitSpectrum(n, [1 / n], (n,))) == 0
    assert orbit_dimension(OrbitSpectrum(3, [0.5, 0.3, 0.2], (1, 1, 1))) == 6


def test_spectrum_validation():
    with pytest.raises(SpectrumError):
        OrbitSpectrum(3, [0.5, 0.5], (1, 1))
    with pytest.raises(SpectrumError):
        OrbitSpectrum(3, [0.2, 0.5], (1, 2))


def test_poisson_rank_examples():
    t3, b3 = tensors_for(3), basis_for(3)
    assert poisson_rank(t3, GellMannState(3, np.zeros(8))) == 0
    assert poisson_rank(t3, pure_state(3, 4)) == 4
    distinct = sample_orbit(OrbitSpectrum(3, [0.5, 0.3, 0.2], (1, 1, 1)), b3, seed=1)
    assert poisson_rank(t3, distinct) == 6
    with pytest.raises(ValueError):
        poisson_rank(t3, distinct, rank_tol=0)


def test_sample_orbit_examples():
    b3 = basis_for(3)
    pure = sample_orbit(OrbitSpectrum(3, [1.0, 0.0], (1, 2)), b3, seed=3)
    assert moments(pure, b3, 2)[0] == pytest.approx(1)
    for seed in range(3):
        assert np.all(sample_orbit(OrbitSpectrum(3, [1 / 3], (3,)), b3, seed).alpha == 0)
    s = sample_orbit(OrbitSpectrum(3, [0.5, 0.25], (1, 2)), b3, seed=0)
    assert moments(s, b3, 2)[0] == pytest.approx(3 / 8)
    with pytest.raises(SpectrumError):
        sample_orbit(OrbitSpectrum(3, [0.5, 0.3], (1, 2)), b3, seed=0)


def test_is_pure_examples():
    assert is_pure(pure_state(4, 0), basis_for(4))
    assert not is_pure(GellMannState(3, np.zeros(8)), basis_for(3))
    assert not is_pure(GellMannState(2, [0, 0, 1.2]), basis_for(2))


def test_partitions():
    assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert sum(1 for _ in partitions(6)) == 11


@given(seed=seeds)
def test_haar_unitary_is_unitary(seed):
    u = haar_unitary(4, seed)
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-13)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_rank_equals_orbit_dimension_per_partition(n):
    basis, t = basis_for(n), tensors_for(n)
    rng = np.random.default_rng(n)
    for shape in partitions(n):
        spectrum = generic_spectrum(shape, rng)
        for _ in range(5):
            state = sample_orbit(spectrum, basis, rng)
            assert poisson_rank(t, state) == orbit_dimension(spectrum), shape


@given(n=st.integers(2, 4), seed=seeds)
def test_rank_is_even_and_matches_classification(n, seed):
    state = mixed_state(n, seed)
    spec = classify_spectrum(state, basis_for(n))
    rank = poisson_rank(tensors_for(n), state)
    assert rank % 2 == 0
    if not spec.near_degenerate:
        assert rank == orbit_dimension(spec)


@given(n=st.integers(2, 4), seed=seeds)
def test_sample_orbit_reproduces_spectrum(n, seed):
    rng = np.random.default_rng(seed)
    shape = list(partitions(n))[rng.integers(sum(1 for _ in partitions(n)))]
    spectrum = generic_spectrum(shape, rng)
    got = classify_spectrum(sample_orbit(spectrum, basis_for(n), rng), basis_for(n))
    assert got.multiplicities == spectrum.multiplicities
    assert np.allclose(got.eigenvalues, spectrum.eigenvalues, atol=1e-10)
