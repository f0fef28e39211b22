"""Partial-trace geometry of pure states on C^N (x) C^M."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .canonical import alpha_gradients, bracket_matrix, numeric_alpha_gradients, pushforward_amplitudes
from .casimirs import char_coeffs, entropy, is_psd, moments
from .errors import DimensionMismatchError, InputError, TheoremViolation
from .gellmann import GellMannBasis, state_to_matrix
from .orbits import numerical_rank
from .state import GellMannState, VerificationReport, _as_int, complex_from_dict, complex_to_dict


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Amplitude table a[i, j] of sum_ij a_ij |i>|j>."""

    n: int
    m: int
    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=complex)
        if a.shape != (self.n, self.m):
            raise DimensionMismatchError(f"amplitudes must have shape {(self.n, self.m)}, got {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.a) ** 2))

    def normalized(self) -> BipartiteState:
        return BipartiteState(self.n, self.m, self.a / math.sqrt(self.norm2))

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "a": complex_to_dict(self.a)}

    @classmethod
    def from_dict(cls, data) -> BipartiteState:
        n, m = _as_int(data, "n"), _as_int(data, "m")
        if n < 1 or m < 1:
            raise InputError("n" if n < 1 else "m", "must be >= 1")
        return cls(n, m, complex_from_dict(data, "a", (n, m)))


def random_bipartite(n: int, m: int, seed=None) -> BipartiteState:
    """Complex Gaussian amplitudes with unit Frobenius norm."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    return BipartiteState(n, m, a / np.linalg.norm(a))


def reduced_matrix(bstate: BipartiteState, side: str = "A") -> np.ndarray:
    """rho_A = a a^dag (keep the first factor) or rho_B = a^T conj(a)."""
    side = side.upper()
    if side == "A":
        return bstate.a @ bstate.a.conj().T
    if side == "B":
        return bstate.a.T @ bstate.a.conj()
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def partial_trace(bstate: BipartiteState, side: str, basis: GellMannBasis) -> GellMannState:
    """Reduced state on the kept factor, in Gell-Mann coordinates."""
    kept = bstate.n if side.upper() == "A" else bstate.m
    if kept != basis.n:
        raise DimensionMismatchError(f"side {side} has dimension {kept}, basis n={basis.n}")
    amps = bstate.a if side.upper() == "A" else bstate.a.T
    return pushforward_amplitudes(amps, basis)


def chain_trace(a, k: int) -> float:
    """Tr (a a^dag)^k as the explicit index chain a_{i1 j1} a*_{i2 j1} a_{i2 j2} ... a*_{i1 jk}."""
    a = np.asarray(a, dtype=complex)
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows, cols = letters[:k], letters[k: 2 * k]
    terms, operands = [], []
    for s in range(k):
        terms.append(rows[s] + cols[s])
        terms.append(rows[(s + 1) % k] + cols[s])
        operands += [a, a.conj()]
    return float(np.einsum(",".join(terms) + "->", *operands).real)


def moment_equality_check(bstate: BipartiteState, m_max: int = 4, tolerance: float = 1e-12) -> VerificationReport:
    """Tr rho_A^k = Tr rho_B^k for k = 2..m_max, plus the index-chain formula for k <= 4."""
    if m_max < 2:
        raise ValueError("m_max must be >= 2")
    rho_a = reduced_matrix(bstate, "A")
    rho_b = reduced_matrix(bstate, "B")
    worst = worst_chain = 0.0
    pa, pb = rho_a, rho_b
    for k in range(2, m_max + 1):
        pa, pb = pa @ rho_a, pb @ rho_b
        ta, tb = np.trace(pa).real, np.trace(pb).real
        worst = max(worst, abs(ta - tb))
        if k <= 4:
            worst_chain = max(worst_chain, abs(chain_trace(bstate.a, k) - ta))
    total = max(worst, worst_chain)
    return VerificationReport.from_residual(
        "moment_equality", total, tolerance, 1, n=bstate.n, m=bstate.m,
        side_residual=worst, chain_residual=worst_chain,
    )


def dnm_membership(state: GellMannState, basis: GellMannBasis, m: int, tolerance: float = 1e-10) -> bool:
    """PSD and S_k = 0 for k > m, i.e. rank(rho) <= m."""
    n = basis.n
    if not 1 <= m <= n:
        raise ValueError(f"M must satisfy 1 <= M <= {n}")
    psd, _ = is_psd(state, basis, tolerance)
    if not psd:
        return False
    s = char_coeffs(moments(state, basis, n), state.alpha0, n)
    return bool(np.all(np.abs(s[m:]) <= tolerance))


def dnm_dimension(n: int, m: int) -> int:
    """2NM - M^2 - 1 for M <= N, and N^2 - 1 once M >= N."""
    if m < 1:
        raise ValueError("M must be >= 1")
    if m >= n:
        return n * n - 1
    return 2 * n * m - m * m - 1


def purify(state: GellMannState, basis: GellMannBasis, m: int, tolerance: float = 1e-10) -> BipartiteState:
    """Amplitude table whose first-factor reduction is ``state``.

    Columns are sqrt(d_i) times eigenvectors for the ``m`` largest
    eigenvalues; fails if more than ``m`` eigenvalues exceed tolerance.
    """
    d, v = np.linalg.eigh(state_to_matrix(state, basis))
    d, v = d[::-1], v[:, ::-1]
    if np.any(d < -tolerance):
        raise ValueError("state is not positive semi-definite")
    if m < basis.n and np.any(d[m:] > tolerance):
        raise ValueError(f"state has rank > {m}")
    k = min(m, basis.n)
    a = np.zeros((basis.n, m), dtype=complex)
    a[:, :k] = v[:, :k] * np.sqrt(np.clip(d[:k], 0.0, None))
    return BipartiteState(basis.n, m, a)


def _sphere_tangent(xi):
    # orthonormal basis of the complement of xi
    return scipy.linalg.null_space(xi[None, :])


def tracing_jacobian(bstate: BipartiteState, basis: GellMannBasis, method: str = "analytic") -> np.ndarray:
    """Jacobian of (Re a, Im a) -> (alpha_1..alpha_K) restricted to the unit sphere."""
    x, y = bstate.a.real, bstate.a.imag
    if method == "analytic":
        gx, gy = alpha_gradients(x, y, basis)
    elif method == "fd":
        gx, gy = numeric_alpha_gradients(x, y, basis)
    else:
        raise ValueError(f"unknown method {method!r}")
    k1 = basis.dim + 1
    jac = np.concatenate([gx.reshape(k1, -1), gy.reshape(k1, -1)], axis=1)[1:]
    xi = np.concatenate([x.ravel(), y.ravel()])
    return jac @ _sphere_tangent(xi)


def tracing_jacobian_rank(bstate: BipartiteState, basis: GellMannBasis, rank_tol: float = 1e-9,
                          method: str = "analytic") -> int:
    if bstate.n != basis.n:
        raise DimensionMismatchError(f"bipartite n={bstate.n} but basis n={basis.n}")
    return numerical_rank(tracing_jacobian(bstate, basis, method), rank_tol)


def traced_brackets(bstate: BipartiteState, basis: GellMannBasis) -> np.ndarray:
    """Canonical brackets {alpha_s, alpha_t}, s, t = 0..K, of the reduced coordinates on R^{2NM}."""
    gx, gy = alpha_gradients(bstate.a.real, bstate.a.imag, basis)
    return bracket_matrix(gx, gy)


def max_entropy_check(state: GellMannState, basis: GellMannBasis, m: int, tolerance: float = 1e-10) -> bool:
    """Membership in the maximal-entropy leaf: PSD, Tr rho^2 = 1/M, Tr rho^3 = 1/M^2.

    A positive verdict is followed by a direct check that the spectrum lies
    in {0, 1/M} and the entropy is ln M, both within 10 * tolerance;
    failure raises :class:`TheoremViolation`.
    """
    n = basis.n
    if not 1 <= m <= n:
        raise ValueError(f"M must satisfy 1 <= M <= {n}")
    if not is_psd(state, basis, tolerance)[0]:
        return False
    mom = moments(state, basis, 3)
    if abs(mom[0] - 1 / m) > tolerance or abs(mom[1] - 1 / m**2) > tolerance:
        return False
    eig = np.linalg.eigvalsh(state_to_matrix(state, basis))
    dev = np.max(np.minimum(np.abs(eig), np.abs(eig - 1 / m)))
    if dev > 10 * tolerance:
        raise TheoremViolation(f"eigenvalue deviates {dev:.3e} from {{0, 1/{m}}}")
    ent_dev = abs(entropy(state, basis) - math.log(m))
    if ent_dev > 10 * tolerance:
        raise TheoremViolation(f"entropy deviates {ent_dev:.3e} from ln {m}")
    return True
