"""Lie-Poisson geometry of finite-dimensional quantum states."""

from .bipartite import BipartiteState, partial_trace, random_bipartite
from .canonical import CanonicalState, pushforward
from .casimirs import CasimirReport, casimir_report, is_psd, moments
from .gellmann import (
    GellMannBasis,
    StructureTensors,
    basis_for,
    compute_structure_tensors,
    generate_basis,
    matrix_to_state,
    operator_to_coeffs,
    state_to_matrix,
    tensors_for,
)
from .orbits import OrbitSpectrum, classify_spectrum, orbit_dimension, poisson_rank
from .poisson import bracket, flow_field, poisson_tensor
from .dynamics import Trajectory, evolve_exact, evolve_rk4
from .state import GellMannState, HamiltonianCoeffs, VerificationReport
from .verify import SuiteConfig, run_suite

__version__ = "0.1.0"
