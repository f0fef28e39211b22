"""Casimir functions of the su(N) Lie-Poisson structure.

Three equivalent families are provided: moments ``Tr rho^m``, characteristic
polynomial coefficients ``S_m`` (from moments by Newton's identities), and
the d-tensor chain Casimirs ``C^(m)``.  ``S_m >= 0`` for every m is the
positivity test for a Hermitian matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientMomentsError, NotAStateError, PreconditionError
from .gellmann import GellMannBasis, StructureTensors, state_to_matrix
from .poisson import poisson_tensor
from .state import GellMannState, VerificationReport, _jsonable

PSD_TOL = 1e-10
EIGEN_CUTOFF = 1e-12
NEGATIVE_EIGEN_TOL = 1e-10


def moments(state: GellMannState, basis: GellMannBasis, m_max: int) -> np.ndarray:
    """[Tr rho^2, ..., Tr rho^m_max] by repeated matrix products."""
    if m_max < 2:
        raise ValueError(f"m_max must be >= 2, got {m_max}")
    rho = state_to_matrix(state, basis)
    out = []
    power = rho
    for _ in range(2, m_max + 1):
        power = power @ rho
        out.append(np.trace(power).real)
    return np.array(out)


def char_coeffs(moment_values, alpha0: float, n: int | None = None) -> np.ndarray:
    """[S_1, ..., S_n] from power sums via Newton's identities.

    ``moment_values`` holds Tr rho^2 .. Tr rho^n; ``S_1 = alpha0``.
    """
    moment_values = np.asarray(moment_values, dtype=float)
    if n is None:
        n = moment_values.size + 1
    if moment_values.size < n - 1:
        raise InsufficientMomentsError(f"need moments of order 2..{n}, got {moment_values.size}")
    power_sums = np.concatenate([[alpha0], moment_values[: n - 1]])
    s = [1.0]
    for m in range(1, n + 1):
        acc = sum((-1) ** (k - 1) * power_sums[k - 1] * s[m - k] for k in range(1, m + 1))
        s.append(acc / m)
    return np.array(s[1:])


def is_psd(state: GellMannState, basis: GellMannBasis, tolerance: float = PSD_TOL):
    """(verdict, margin) with margin = min_m S_m."""
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    s = char_coeffs(moments(state, basis, basis.n), state.alpha0, basis.n)
    margin = float(np.min(s))
    return margin >= -tolerance, margin


def _d_matrix(tensors, alpha):
    # (D_alpha)_ij = sum_k d_kij alpha_k
    return np.einsum("kij,k->ij", tensors.d, alpha)


def _check_order(tensors, m):
    if not 2 <= m <= tensors.n:
        raise ValueError(f"Casimir order m must satisfy 2 <= m <= {tensors.n}, got {m}")


def chain_contraction(alpha, tensors: StructureTensors, m: int) -> float:
    """d_{i1 i2 j1} d_{j1 i3 j2} ... d_{i_{m-1} i_m j_{m-3}} alpha^m, i.e. alpha.D^(m-2).alpha."""
    alpha = np.asarray(alpha, dtype=float)
    if m == 2:
        return float(alpha @ alpha)
    dmat = _d_matrix(tensors, alpha)
    v = alpha
    for _ in range(m - 2):
        v = dmat @ v
    return float(alpha @ v)


def sudbery_casimir(state: GellMannState, tensors: StructureTensors, m: int) -> float:
    """C^(m) = m! times the plain chain contraction (C^(2) = 2 a.a, C^(3) = 6 d a a a)."""
    _check_order(tensors, m)
    return math.factorial(m) * chain_contraction(state.alpha, tensors, m)


def sudbery_gradient(alpha, tensors: StructureTensors, m: int) -> np.ndarray:
    """Analytic gradient of C^(m) in alpha.

    With M = D_alpha and p = m - 2, d/dalpha_k (a.M^p.a) is
    2 (M^p a)_k + sum_{r<p} (M^r a)_i d_kij (M^{p-1-r} a)_j.
    """
    _check_order(tensors, m)
    alpha = np.asarray(alpha, dtype=float)
    p = m - 2
    dmat = _d_matrix(tensors, alpha)
    powers = [alpha]
    for _ in range(p):
        powers.append(dmat @ powers[-1])
    grad = 2.0 * powers[p]
    for r in range(p):
        grad = grad + np.einsum("kij,i,j->k", tensors.d, powers[r], powers[p - 1 - r])
    return math.factorial(m) * grad


def numeric_sudbery_gradient(alpha, tensors: StructureTensors, m: int, step: float = 1e-6) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    grad = np.zeros_like(alpha)
    for k in range(alpha.size):
        e = np.zeros_like(alpha)
        e[k] = step
        grad[k] = (chain_contraction(alpha + e, tensors, m) - chain_contraction(alpha - e, tensors, m)) / (2 * step)
    return math.factorial(m) * grad


def pure_chain_check(state: GellMannState, basis: GellMannBasis, tensors: StructureTensors,
                     tolerance: float = 1e-10) -> VerificationReport:
    """Relative residual of C^(m) = 2m(1 - 2/N) C^(m-1) for m = 3..N on a pure state."""
    tr2 = moments(state, basis, 2)[0]
    if abs(tr2 - 1.0) > tolerance or abs(state.alpha0 - 1.0) > tolerance:
        raise PreconditionError(f"state is not pure: Tr rho^2 = {tr2:.12g} (expected 1), Tr rho = {state.alpha0:.12g}")
    psd, margin = is_psd(state, basis)
    if not psd:
        raise PreconditionError(f"state is not pure: S_m margin {margin:.3e} < 0 (not positive semi-definite)")
    n = basis.n
    worst = 0.0
    values = {2: sudbery_casimir(state, tensors, 2)}
    for m in range(3, n + 1):
        values[m] = sudbery_casimir(state, tensors, m)
        rhs = 2 * m * (1 - 2 / n) * values[m - 1]
        scale = max(abs(values[m]), abs(rhs))
        if scale > 0:
            worst = max(worst, abs(values[m] - rhs) / scale)
    return VerificationReport.from_residual("pure_chain", worst, tolerance, 1, n=n, casimirs=list(values.values()))


def entropy(state: GellMannState, basis: GellMannBasis) -> float:
    """Von Neumann entropy -Tr rho ln rho in nats."""
    eig = np.linalg.eigvalsh(state_to_matrix(state, basis))
    if eig[0] < -NEGATIVE_EIGEN_TOL:
        raise NotAStateError(f"negative eigenvalue {eig[0]:.3e}")
    eig = eig[eig > EIGEN_CUTOFF]
    return float(-np.sum(eig * np.log(eig))) + 0.0  # no negative zero


def ad_invariance_residual(tensors: StructureTensors) -> float:
    """max |f_mlj d_npj + f_nlj d_pmj + f_plj d_mnj| over all (l, m, n, p)."""
    f, d = tensors.f, tensors.d
    t = np.einsum("mlj,npj->lmnp", f, d)
    # second and third terms are cyclic shifts of (m, n, p)
    total = t + t.transpose(0, 3, 1, 2) + t.transpose(0, 2, 3, 1)
    return float(np.max(np.abs(total), initial=0.0))


def verify_ad_invariance(tensors: StructureTensors, m: int = 3, trials: int = 20, seed=0,
                         tolerance: float = 1e-9, identity_tolerance: float = 1e-12) -> VerificationReport:
    """Casimir property of C^(m): {alpha_nu, C^(m)} = r.grad C^(m) = 0.

    For m = 3 the explicit f-d identity is also swept over all index
    tuples and must fall below ``identity_tolerance``.
    """
    if not 3 <= m <= tensors.n:
        raise ValueError(f"m must satisfy 3 <= m <= {tensors.n}, got {m}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        alpha = rng.standard_normal(tensors.dim)
        alpha /= np.linalg.norm(alpha)
        state = GellMannState(tensors.n, alpha)
        grad = sudbery_gradient(alpha, tensors, m)
        worst = max(worst, float(np.max(np.abs(poisson_tensor(tensors, state) @ grad))))
    details = {"n": tensors.n, "m": m, "bracket_residual": worst}
    passed = worst <= tolerance
    if m == 3:
        identity = ad_invariance_residual(tensors)
        details.update(identity_residual=identity, identity_tolerance=identity_tolerance)
        passed = passed and identity <= identity_tolerance
        worst = max(worst, identity)
    return VerificationReport(f"ad_invariance_m{m}", worst, trials, bool(passed), {"tolerance": tolerance, **details})


@dataclass(frozen=True, eq=False)
class CasimirReport:
    n: int
    moments: np.ndarray
    char_coeffs: np.ndarray
    sudbery: np.ndarray
    entropy: float | None
    psd: bool
    psd_margin: float

    def to_dict(self) -> dict:
        return _jsonable({
            "n": self.n,
            "moments": {f"tr{m}": v for m, v in enumerate(self.moments, start=2)},
            "char_coeffs": {f"S{m}": v for m, v in enumerate(self.char_coeffs, start=1)},
            "sudbery": {f"C{m}": v for m, v in enumerate(self.sudbery, start=2)},
            "entropy": self.entropy,
            "psd": self.psd,
            "psd_margin": self.psd_margin,
        })

    def values(self) -> dict:
        """Flat name -> value map of every tracked invariant."""
        out = {f"tr{m}": float(v) for m, v in enumerate(self.moments, start=2)}
        out.update({f"S{m}": float(v) for m, v in enumerate(self.char_coeffs, start=1)})
        out.update({f"C{m}": float(v) for m, v in enumerate(self.sudbery, start=2)})
        out["entropy"] = float("nan") if self.entropy is None else self.entropy
        return out


def casimir_report(state: GellMannState, basis: GellMannBasis, tensors: StructureTensors,
                   tolerance: float = PSD_TOL) -> CasimirReport:
    n = basis.n
    mom = moments(state, basis, n)
    s = char_coeffs(mom, state.alpha0, n)
    sud = np.array([sudbery_casimir(state, tensors, m) for m in range(2, n + 1)])
    margin = float(np.min(s))
    psd = margin >= -tolerance
    try:
        ent = entropy(state, basis) if psd else None
    except NotAStateError:
        ent = None
    return CasimirReport(n, mom, s, sud, ent, psd, margin)
