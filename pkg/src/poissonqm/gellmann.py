"""Generalized Gell-Mann basis of su(N) and its structure tensors.

Normalization is ``Tr(T_a T_b) = delta_ab / 2``.  Ordering nests su(N-1)
inside su(N): for each column ``k = 1..N-1`` the symmetric and antisymmetric
generators on ``(j, k)``, ``j < k``, followed by the k-th diagonal
generator.  This reproduces the Pauli matrices for N=2 and the standard
lambda-matrices (in their usual order) for N=3, both divided by two.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    BasisInconsistencyError,
    DimensionMismatchError,
    InputError,
    InvalidDimensionError,
    NotHermitianError,
)
from .state import GellMannState, HamiltonianCoeffs, VerificationReport, complex_from_dict, complex_to_dict

CONVENTION = "tr(TaTb)=delta/2"
DEFAULT_ZERO_THRESHOLD = 1e-12
HERMITIAN_TOL = 1e-12
REAL_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class GellMannBasis:
    n: int
    matrices: np.ndarray  # shape (n**2 - 1, n, n), complex
    convention: str = CONVENTION

    def __post_init__(self):
        mats = np.array(self.matrices, dtype=complex)
        if mats.shape != (self.n**2 - 1, self.n, self.n):
            raise DimensionMismatchError(f"expected {self.n**2 - 1} matrices of size {self.n}")
        mats.setflags(write=False)
        object.__setattr__(self, "matrices", mats)

    @property
    def dim(self) -> int:
        return self.n**2 - 1

    def __len__(self):
        return self.dim

    def __getitem__(self, k):
        """Zero-based access to T_{k+1}."""
        return self.matrices[k]

    def invariant_residuals(self) -> dict:
        """Max residuals of Hermiticity, tracelessness, orthonormality."""
        mats = self.matrices
        herm = np.max(np.abs(mats - mats.conj().transpose(0, 2, 1)))
        trace = np.max(np.abs(np.trace(mats, axis1=1, axis2=2)))
        gram = np.einsum("aij,bji->ab", mats, mats)
        ortho = np.max(np.abs(gram - 0.5 * np.eye(self.dim)))
        return {"hermitian": float(herm), "traceless": float(trace), "orthonormal": float(ortho)}

    def to_dict(self) -> dict:
        return {"n": self.n, "matrices": [complex_to_dict(m) for m in self.matrices]}

    @classmethod
    def from_dict(cls, data: dict) -> GellMannBasis:
        if not isinstance(data, dict) or "n" not in data:
            raise InputError("n", "missing field")
        n = data["n"]
        raw = data.get("matrices")
        if not isinstance(raw, list) or len(raw) != n * n - 1:
            raise InputError("matrices", f"expected a list of {n * n - 1} matrices")
        mats = [complex_from_dict({"m": m}, "m", (n, n)) for m in raw]
        return cls(n, np.array(mats))


def generate_basis(n: int) -> GellMannBasis:
    """Generalized Gell-Mann matrices for su(n), deterministic in ``n``."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidDimensionError(f"n must be an integer >= 2, got {n!r}")
    n = int(n)
    mats = []
    for k in range(1, n):
        for j in range(k):
            sym = np.zeros((n, n), dtype=complex)
            sym[j, k] = sym[k, j] = 0.5
            asym = np.zeros((n, n), dtype=complex)
            asym[j, k] = -0.5j
            asym[k, j] = 0.5j
            mats += [sym, asym]
        diag = np.zeros(n)
        diag[:k] = 1.0
        diag[k] = -k
        mats.append(np.diag(diag / np.sqrt(2 * k * (k + 1))).astype(complex))
    return GellMannBasis(n, np.array(mats))


@dataclass(frozen=True, eq=False)
class StructureTensors:
    """Structure constants ``f`` (antisymmetric) and ``d`` (symmetric).

    Stored fully expanded as dense ``(K, K, K)`` arrays with zero-based
    indices; :meth:`value` takes one-based indices, :meth:`entries` yields the
    sparse canonical form (``a<b<c`` for f, ``a<=b<=c`` for d).
    """

    n: int
    f: np.ndarray
    d: np.ndarray
    zero_threshold: float = DEFAULT_ZERO_THRESHOLD

    def __post_init__(self):
        k = self.n**2 - 1
        for name in ("f", "d"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (k, k, k):
                raise DimensionMismatchError(f"{name} must have shape {(k, k, k)}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.n**2 - 1

    def value(self, kind: str, a: int, b: int, c: int) -> float:
        return float(self._tensor(kind)[a - 1, b - 1, c - 1])

    def entries(self, kind: str) -> list[tuple[int, int, int, float]]:
        tensor = self._tensor(kind)
        strict = kind == "f"
        out = []
        for a, b, c in zip(*np.nonzero(tensor)):
            ordered = a < b < c if strict else a <= b <= c
            if ordered:
                out.append((int(a) + 1, int(b) + 1, int(c) + 1, float(tensor[a, b, c])))
        return out

    def perturbed(self, kind: str, index: tuple[int, int, int], delta: float) -> StructureTensors:
        """Copy with one (one-based) entry shifted by ``delta`` in all index orders.

        Sign bookkeeping follows the tensor's symmetry; ``delta=-value``
        zeroes the entry.  Used for fault-injection checks.
        """
        arrays = {"f": self.f.copy(), "d": self.d.copy()}
        arr = arrays[kind]
        base = tuple(i - 1 for i in index)
        for perm in set(itertools.permutations(range(3))):
            idx = tuple(base[p] for p in perm)
            sign = _perm_sign(perm) if kind == "f" else 1
            arr[idx] += sign * delta
        return StructureTensors(self.n, arrays["f"], arrays["d"], self.zero_threshold)

    def _tensor(self, kind):
        if kind == "f":
            return self.f
        if kind == "d":
            return self.d
        raise ValueError(f"kind must be 'f' or 'd', got {kind!r}")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "f": [list(e) for e in self.entries("f")],
            "d": [list(e) for e in self.entries("d")],
        }

    @classmethod
    def from_dict(cls, data: dict) -> StructureTensors:
        n = data.get("n") if isinstance(data, dict) else None
        if not isinstance(n, int) or n < 2:
            raise InputError("n", "expected integer >= 2")
        k = n * n - 1
        arrays = {}
        for kind in ("f", "d"):
            arr = np.zeros((k, k, k))
            for row in data.get(kind, []):
                a, b, c, v = row
                for perm in set(itertools.permutations(range(3))):
                    idx = tuple((a - 1, b - 1, c - 1)[p] for p in perm)
                    arr[idx] = v * (_perm_sign(perm) if kind == "f" else 1)
            arrays[kind] = arr
        return cls(n, arrays["f"], arrays["d"])


def _perm_sign(perm):
    inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def compute_structure_tensors(basis: GellMannBasis, zero_threshold: float = DEFAULT_ZERO_THRESHOLD) -> StructureTensors:
    """f_abc = -2i Tr([T_a, T_b] T_c) and d_abc = 2 Tr({T_a, T_b} T_c)."""
    if zero_threshold < 0:
        raise ValueError("zero_threshold must be non-negative")
    mats = basis.matrices
    triple = np.einsum("aij,bjk,cki->abc", mats, mats, mats)
    swapped = triple.transpose(1, 0, 2)
    f = -2j * (triple - swapped)
    d = 2.0 * (triple + swapped)
    residue = max(np.max(np.abs(f.imag)), np.max(np.abs(d.imag)))
    if residue > REAL_TOL:
        raise BasisInconsistencyError(f"structure constants have imaginary residue {residue:.3e}")
    f, d = f.real.copy(), d.real.copy()
    f[np.abs(f) < zero_threshold] = 0.0
    d[np.abs(d) < zero_threshold] = 0.0
    return StructureTensors(basis.n, f, d, zero_threshold)


@lru_cache(maxsize=None)
def basis_for(n: int) -> GellMannBasis:
    return generate_basis(n)


@lru_cache(maxsize=None)
def tensors_for(n: int) -> StructureTensors:
    return compute_structure_tensors(basis_for(n))


def check_hermitian(op, n=None, tol=HERMITIAN_TOL) -> np.ndarray:
    op = np.asarray(op, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {op.shape}")
    if n is not None and op.shape[0] != n:
        raise DimensionMismatchError(f"expected {n}x{n} matrix, got {op.shape}")
    scale = max(1.0, float(np.max(np.abs(op))))
    if np.max(np.abs(op - op.conj().T)) > tol * scale:
        raise NotHermitianError("matrix is not Hermitian")
    return op


def _real_coords(op, basis):
    coords = 2.0 * np.einsum("ij,kji->k", op, basis.matrices)
    scale = max(1.0, float(np.max(np.abs(op))))
    if np.max(np.abs(coords.imag), initial=0.0) > REAL_TOL * scale * basis.n:
        raise NotHermitianError("coordinates are not real")
    return coords.real


def matrix_to_state(rho, basis: GellMannBasis) -> GellMannState:
    """alpha_k = 2 Tr(rho T_k), alpha0 = Tr rho."""
    rho = check_hermitian(rho, basis.n)
    return GellMannState(basis.n, _real_coords(rho, basis), float(np.trace(rho).real))


def state_to_matrix(state: GellMannState, basis: GellMannBasis) -> np.ndarray:
    if state.n != basis.n:
        raise DimensionMismatchError(f"state n={state.n} but basis n={basis.n}")
    return state.alpha0 * np.eye(basis.n) / basis.n + np.einsum("k,kij->ij", state.alpha, basis.matrices)


def operator_to_coeffs(op, basis: GellMannBasis, hbar: float = 1.0) -> HamiltonianCoeffs:
    """Expand a Hermitian operator as ``h0 * I + sum_k h_k T_k``."""
    op = check_hermitian(op, basis.n)
    return HamiltonianCoeffs(basis.n, float(np.trace(op).real) / basis.n, _real_coords(op, basis), hbar)


def coeffs_to_operator(coeffs: HamiltonianCoeffs, basis: GellMannBasis) -> np.ndarray:
    if coeffs.n != basis.n:
        raise DimensionMismatchError(f"coeffs n={coeffs.n} but basis n={basis.n}")
    return coeffs.h0 * np.eye(basis.n) + np.einsum("k,kij->ij", coeffs.h, basis.matrices)


def verify_product_identity(basis: GellMannBasis, tensors: StructureTensors, tolerance: float = 1e-12) -> VerificationReport:
    """Residual of T_a T_b = delta_ab I/(2N) + (1/2) sum_c (i f_abc + d_abc) T_c."""
    mats = basis.matrices
    n, k = basis.n, basis.dim
    lhs = np.einsum("aij,bjk->abik", mats, mats)
    coeff = 0.5 * (1j * tensors.f + tensors.d)
    rhs = np.einsum("abc,cij->abij", coeff, mats)
    rhs += np.einsum("ab,ij->abij", np.eye(k), np.eye(n)) / (2 * n)
    residual = np.max(np.abs(lhs - rhs))
    return VerificationReport.from_residual("product_identity", residual, tolerance, k * k, n=n)


def commutator_residual(basis: GellMannBasis, tensors: StructureTensors) -> float:
    """max over (a, b) of ||[T_a, T_b] - i sum_c f_abc T_c||_max."""
    mats = basis.matrices
    prod = np.einsum("aij,bjk->abik", mats, mats)
    comm = prod - prod.transpose(1, 0, 2, 3)
    rhs = 1j * np.einsum("abc,cij->abij", tensors.f, mats)
    return float(np.max(np.abs(comm - rhs)))


def random_hermitian(n: int, rng=None, norm: float = 1.0) -> np.ndarray:
    """GUE-style Hermitian matrix rescaled to the given spectral norm."""
    rng = np.random.default_rng(rng)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = 0.5 * (a + a.conj().T)
    return h * (norm / np.linalg.norm(h, 2))
