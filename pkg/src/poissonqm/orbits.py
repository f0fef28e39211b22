"""Coadjoint orbits: spectrum classification, dimensions, Poisson rank, sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .casimirs import is_psd, moments
from .errors import SpectrumError
from .gellmann import GellMannBasis, StructureTensors, matrix_to_state, state_to_matrix
from .poisson import poisson_tensor
from .state import GellMannState

DEGENERACY_TOL = 1e-8
RANK_TOL = 1e-9
RANK_ATOL = 1e-12
NEAR_DEGENERATE_FACTOR = 10.0


@dataclass(frozen=True, eq=False)
class OrbitSpectrum:
    """Distinct eigenvalues (descending) with multiplicities.

    ``ambiguous`` marks clusters whose members nearly touch a neighbouring
    cluster; ``near_degenerate`` marks gaps within 10x the clustering
    tolerance, where the foliation is singular and rank checks are unreliable.
    """

    n: int
    eigenvalues: np.ndarray
    multiplicities: tuple[int, ...]
    degeneracy_tol: float = DEGENERACY_TOL
    ambiguous: bool = False
    near_degenerate: bool = False

    def __post_init__(self):
        e = np.array(self.eigenvalues, dtype=float)
        mult = tuple(int(k) for k in self.multiplicities)
        if e.shape != (len(mult),):
            raise SpectrumError("eigenvalues and multiplicities differ in length")
        if any(k < 1 for k in mult) or sum(mult) != self.n:
            raise SpectrumError(f"multiplicities {mult} must be >= 1 and sum to {self.n}")
        if np.any(np.diff(e) >= 0):
            raise SpectrumError("eigenvalues must be strictly descending")
        e.setflags(write=False)
        object.__setattr__(self, "eigenvalues", e)
        object.__setattr__(self, "multiplicities", mult)

    @property
    def trace(self) -> float:
        return float(np.dot(self.eigenvalues, self.multiplicities))

    def diagonal(self) -> np.ndarray:
        return np.repeat(self.eigenvalues, self.multiplicities)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "eigenvalues": self.eigenvalues.tolist(),
            "multiplicities": list(self.multiplicities),
            "degeneracy_tol": self.degeneracy_tol,
            "ambiguous": self.ambiguous,
            "near_degenerate": self.near_degenerate,
        }


def spectrum_from_eigenvalues(eigenvalues, degeneracy_tol: float = DEGENERACY_TOL) -> OrbitSpectrum:
    """Greedy clustering in descending order around each cluster's first member."""
    if degeneracy_tol <= 0:
        raise ValueError("degeneracy_tol must be positive")
    values = np.sort(np.asarray(eigenvalues, dtype=float))[::-1]
    clusters: list[list[float]] = []
    for v in values:
        if clusters and clusters[-1][0] - v <= degeneracy_tol:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    ambiguous = any(hi[-1] - lo[0] < 2 * degeneracy_tol for hi, lo in zip(clusters, clusters[1:]))
    reps = np.array([np.mean(c) for c in clusters])
    near = bool(np.any(-np.diff(reps) < NEAR_DEGENERATE_FACTOR * degeneracy_tol))
    return OrbitSpectrum(values.size, reps, tuple(len(c) for c in clusters), degeneracy_tol, ambiguous, near)


def classify_spectrum(state: GellMannState, basis: GellMannBasis, degeneracy_tol: float = DEGENERACY_TOL) -> OrbitSpectrum:
    return spectrum_from_eigenvalues(np.linalg.eigvalsh(state_to_matrix(state, basis)), degeneracy_tol)


def orbit_dimension(spectrum: OrbitSpectrum) -> int:
    """2 sum_{i>j} n_i n_j = N^2 - sum n_i^2."""
    mult = np.asarray(spectrum.multiplicities)
    return int(spectrum.n**2 - np.sum(mult**2))


def numerical_rank(matrix, rank_tol: float, atol: float = RANK_ATOL) -> int:
    """Singular values above rank_tol times the largest one.

    Values below ``atol`` never count, so round-off around a zero matrix
    (e.g. the maximally mixed state) has rank 0.
    """
    sv = np.linalg.svd(np.asarray(matrix), compute_uv=False)
    if sv.size == 0:
        return 0
    return int(np.sum(sv > max(rank_tol * sv[0], atol)))


def poisson_rank(tensors: StructureTensors, state: GellMannState, rank_tol: float = RANK_TOL) -> int:
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    return numerical_rank(poisson_tensor(tensors, state), rank_tol)


def haar_unitary(n: int, rng) -> np.ndarray:
    """Haar-distributed unitary from QR of a complex Ginibre matrix.

    The phases of diag(R) are absorbed into Q so the result is Haar rather
    than biased by the QR sign convention.
    """
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def sample_orbit(spectrum: OrbitSpectrum, basis: GellMannBasis, seed=None) -> GellMannState:
    """Haar-random point U diag(spectrum) U^dag on the orbit."""
    if spectrum.n != basis.n:
        raise SpectrumError(f"spectrum n={spectrum.n} but basis n={basis.n}")
    if abs(spectrum.trace - 1.0) > 1e-10:
        raise SpectrumError(f"spectrum trace must be 1, got {spectrum.trace:.12g}")
    if len(spectrum.multiplicities) == 1:
        return GellMannState(basis.n, np.zeros(basis.dim))
    u = haar_unitary(basis.n, seed)
    rho = (u * spectrum.diagonal()) @ u.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return matrix_to_state(rho, basis)


def is_pure(state: GellMannState, basis: GellMannBasis, tolerance: float = 1e-10) -> bool:
    tr2 = moments(state, basis, 2)[0]
    return bool(abs(tr2 - 1.0) <= tolerance and is_psd(state, basis, tolerance)[0])


def partitions(n: int, largest: int | None = None):
    """Integer partitions of n as non-increasing tuples."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def generic_spectrum(multiplicities, rng=None, min_gap: float = 0.05) -> OrbitSpectrum:
    """Random unit-trace spectrum with the given multiplicities and well-separated values."""
    rng = np.random.default_rng(rng)
    mult = np.asarray(multiplicities)
    n = int(mult.sum())
    while True:
        e = rng.uniform(0.0, 1.0, mult.size)
        e /= e @ mult
        order = np.argsort(e)[::-1]
        e, m = e[order], mult[order]
        if mult.size == 1 or np.min(-np.diff(e)) > min_gap / n:
            return OrbitSpectrum(n, e, tuple(m))
