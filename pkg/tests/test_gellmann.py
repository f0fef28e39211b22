import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from poissonqm.errors import InputError, InvalidDimensionError, NotHermitianError
from poissonqm.gellmann import (
    GellMannBasis,
    StructureTensors,
    basis_for,
    coeffs_to_operator,
    commutator_residual,
    compute_structure_tensors,
    generate_basis,
    matrix_to_state,
    operator_to_coeffs,
    random_hermitian,
    state_to_matrix,
    tensors_for,
    verify_product_identity,
)
from poissonqm.state import GellMannState

SIGMA = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]])]
S3 = 1 / math.sqrt(3)
LAMBDA = [
    [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
    [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]],
    [[1, 0, 0], [0, -1, 0], [0, 0, 0]],
    [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
    [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]],
    [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
    [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]],
    [[S3, 0, 0], [0, S3, 0], [0, 0, -2 * S3]],
]


def test_n2_is_pauli_over_two():
    assert np.allclose(generate_basis(2).matrices, np.array(SIGMA) / 2, atol=1e-15)


def test_n3_is_lambda_over_two():
    assert np.allclose(generate_basis(3).matrices, np.array(LAMBDA) / 2, atol=1e-15)


@pytest.mark.parametrize("n", range(2, 7))
def test_basis_invariants(n):
    basis = generate_basis(n)
    assert len(basis) == n * n - 1
    res = basis.invariant_residuals()
    assert res["hermitian"] <= 1e-14
    assert res["traceless"] <= 1e-14
    assert res["orthonormal"] <= 1e-13


def test_n4_pairwise_orthogonal():
    mats = generate_basis(4).matrices
    for a, b in itertools.product(range(15), repeat=2):
        assert abs(np.trace(mats[a] @ mats[b]) - 0.5 * (a == b)) <= 1e-13


@pytest.mark.parametrize("bad", [1, 0, -3, 2.5, True, "3"])
def test_invalid_dimension(bad):
    with pytest.raises(InvalidDimensionError):
        generate_basis(bad)


def test_basis_deterministic():
    assert np.array_equal(generate_basis(5).matrices, generate_basis(5).matrices)


def test_basis_round_trip():
    basis = generate_basis(3)
    again = GellMannBasis.from_dict(basis.to_dict())
    assert np.array_equal(again.matrices, basis.matrices)


def test_spot_values():
    t2, t3 = tensors_for(2), tensors_for(3)
    assert t2.value("f", 1, 2, 3) == pytest.approx(1.0, abs=1e-12)
    assert t2.entries("d") == []
    assert t3.value("f", 1, 2, 3) == pytest.approx(1.0, abs=1e-12)
    assert t3.value("f", 4, 5, 8) == pytest.approx(math.sqrt(3) / 2, abs=1e-12)
    assert t3.value("d", 1, 1, 8) == pytest.approx(1 / math.sqrt(3), abs=1e-12)


@pytest.mark.parametrize("n", range(2, 6))
def test_tensor_symmetries(n):
    t = tensors_for(n)
    assert np.max(np.abs(t.f + t.f.transpose(1, 0, 2))) <= 1e-12
    assert np.max(np.abs(t.f + t.f.transpose(0, 2, 1))) <= 1e-12
    for perm in itertools.permutations(range(3)):
        assert np.max(np.abs(t.d - t.d.transpose(perm))) <= 1e-12
    assert np.all(t.f[np.arange(t.dim), np.arange(t.dim), :] == 0)


@pytest.mark.parametrize("n", range(2, 7))
def test_commutator_and_product_identity(n):
    basis, t = basis_for(n), tensors_for(n)
    assert commutator_residual(basis, t) <= 1e-12
    rep = verify_product_identity(basis, t, 1e-12)
    assert rep.passed and rep.max_residual <= 1e-12


def test_product_identity_n2_tight():
    rep = verify_product_identity(basis_for(2), tensors_for(2), 1e-12)
    assert rep.passed and rep.max_residual < 1e-14


def test_product_identity_detects_fault():
    bad = tensors_for(2).perturbed("f", (1, 2, 3), 1e-3)
    rep = verify_product_identity(basis_for(2), bad, 1e-12)
    assert not rep.passed
    # 0.5 * 1e-3 times an entry of T_3 of size 1/2
    assert rep.max_residual == pytest.approx(2.5e-4, rel=1e-6)


def test_tensors_round_trip():
    t = tensors_for(3)
    again = StructureTensors.from_dict(t.to_dict())
    assert np.array_equal(again.f, t.f) and np.array_equal(again.d, t.d)


def test_zero_threshold_prunes():
    t = compute_structure_tensors(basis_for(3), zero_threshold=0.6)
    assert t.value("f", 4, 5, 8) != 0.0  # sqrt(3)/2 survives
    assert t.value("f", 1, 4, 7) == 0.0  # 1/2 is pruned
    with pytest.raises(ValueError):
        compute_structure_tensors(basis_for(3), zero_threshold=-1.0)


def test_matrix_to_state_examples():
    b2, b3 = basis_for(2), basis_for(3)
    st0 = matrix_to_state(np.eye(3) / 3, b3)
    assert np.allclose(st0.alpha, 0) and st0.alpha0 == pytest.approx(1)
    st1 = matrix_to_state(np.diag([1.0, 0.0]), b2)
    assert np.allclose(st1.alpha, [0, 0, 1])
    st2 = matrix_to_state(b3[0] + np.eye(3) / 3, b3)
    assert np.allclose(st2.alpha, np.eye(8)[0])


def test_state_to_matrix_examples():
    b2 = basis_for(2)
    assert np.allclose(state_to_matrix(GellMannState(2, [0, 0, 0]), b2), np.eye(2) / 2)
    assert np.allclose(state_to_matrix(GellMannState(2, [1, 0, 0]), b2), [[0.5, 0.5], [0.5, 0.5]])


def test_non_hermitian_rejected():
    with pytest.raises(NotHermitianError):
        matrix_to_state(np.array([[1, 1], [0, 0]]), basis_for(2))


def test_operator_to_coeffs_examples():
    b2, b3 = basis_for(2), basis_for(3)
    c = operator_to_coeffs(np.eye(3), b3)
    assert c.h0 == pytest.approx(1) and np.allclose(c.h, 0)
    c = operator_to_coeffs(SIGMA[2], b2)
    assert c.h0 == pytest.approx(0) and np.allclose(c.h, [0, 0, 2])
    c = operator_to_coeffs(5 * b3[6], b3)
    assert np.allclose(c.h, 5 * np.eye(8)[6])


@given(n=st.integers(2, 5), seed=st.integers(0, 2**32 - 1))
def test_round_trip_matrix_state(n, seed):
    basis = basis_for(n)
    rho = random_hermitian(n, seed, norm=3.0)
    assert np.max(np.abs(state_to_matrix(matrix_to_state(rho, basis), basis) - rho)) <= 1e-13
    back = coeffs_to_operator(operator_to_coeffs(rho, basis), basis)
    assert np.max(np.abs(back - rho)) <= 1e-13


def test_state_from_dict_names_field():
    with pytest.raises(InputError, match="alpha"):
        GellMannState.from_dict({"n": 2, "alpha": [1, 2]})
    with pytest.raises(InputError, match="^n:"):
        GellMannState.from_dict({"alpha": [1, 2, 3]})
