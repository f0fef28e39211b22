"""Linear su(N) Lie-Poisson structure on Gell-Mann coordinates."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError
from .gellmann import StructureTensors
from .state import GellMannState, HamiltonianCoeffs, VerificationReport


def _check(tensors, *objs):
    for obj in objs:
        if obj.n != tensors.n:
            raise DimensionMismatchError(f"dimension n={obj.n} does not match tensors n={tensors.n}")


def _vector(v, k, name):
    v = np.asarray(v, dtype=float)
    if v.shape != (k,):
        raise DimensionMismatchError(f"{name} must have length {k}, got shape {v.shape}")
    return v


def poisson_tensor(tensors: StructureTensors, state: GellMannState) -> np.ndarray:
    """r_ij = 4 sum_k f_ijk alpha_k."""
    _check(tensors, state)
    return 4.0 * (tensors.f @ state.alpha)


def bracket(grad_f, grad_g, tensors: StructureTensors, state: GellMannState) -> float:
    """{F, G} = grad_f . r(alpha) . grad_g for caller-supplied gradients."""
    k = tensors.dim
    grad_f = _vector(grad_f, k, "grad_f")
    grad_g = _vector(grad_g, k, "grad_g")
    return float(grad_f @ poisson_tensor(tensors, state) @ grad_g)


def hamiltonian_value(state: GellMannState, coeffs: HamiltonianCoeffs) -> float:
    """Tr(rho H) / (2 hbar) = (h0 alpha0 + alpha.h / 2) / (2 hbar)."""
    if state.n != coeffs.n:
        raise DimensionMismatchError(f"state n={state.n} but coeffs n={coeffs.n}")
    return (coeffs.h0 * state.alpha0 + 0.5 * state.alpha @ coeffs.h) / (2.0 * coeffs.hbar)


def hamiltonian_gradient(coeffs: HamiltonianCoeffs) -> np.ndarray:
    return coeffs.h / (4.0 * coeffs.hbar)


def flow_generator(coeffs: HamiltonianCoeffs, tensors: StructureTensors) -> np.ndarray:
    """Matrix A with alpha_dot = A @ alpha, A_li = -(1/hbar) sum_j f_lij h_j."""
    _check(tensors, coeffs)
    return -(tensors.f @ coeffs.h) / coeffs.hbar


def flow_field(state: GellMannState, coeffs: HamiltonianCoeffs, tensors: StructureTensors) -> np.ndarray:
    """Time derivative of alpha under H; alpha0 is constant."""
    _check(tensors, state)
    return flow_generator(coeffs, tensors) @ state.alpha


def bracket_flow(state: GellMannState, coeffs: HamiltonianCoeffs, tensors: StructureTensors) -> np.ndarray:
    """The same field written as {alpha_l, H} = r_lj dH/dalpha_j."""
    return poisson_tensor(tensors, state) @ hamiltonian_gradient(coeffs)


def jacobiator(tensors: StructureTensors, alpha) -> np.ndarray:
    """J_ijk = sum_l r_lk d_l r_ij + r_li d_l r_jk + r_lj d_l r_ki."""
    f = tensors.f
    r = 4.0 * (f @ alpha)
    dr = 4.0 * f  # dr[i, j, l] = d r_ij / d alpha_l
    term = np.einsum("lk,ijl->ijk", r, dr)
    return term + term.transpose(1, 2, 0) + term.transpose(2, 0, 1)


def verify_jacobi(tensors: StructureTensors, sample_count: int = 10, seed=0, tolerance: float = 1e-10) -> VerificationReport:
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(sample_count):
        alpha = rng.standard_normal(tensors.dim)
        worst = max(worst, float(np.max(np.abs(jacobiator(tensors, alpha)))))
    return VerificationReport.from_residual("jacobi", worst, tolerance, sample_count, n=tensors.n)
