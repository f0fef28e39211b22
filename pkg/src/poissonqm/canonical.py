"""Canonical mechanics on C^N and its pushforward to Gell-Mann coordinates.

Amplitudes are split as ``z = x + i y`` with brackets ``{x_m, y_n} = delta_mn``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InputError, NotHermitianError
from .gellmann import GellMannBasis, StructureTensors, check_hermitian
from .state import GellMannState, VerificationReport, _as_int, _as_vector

IMAG_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CanonicalState:
    n: int
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        for name in ("x", "y"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (self.n,):
                raise DimensionMismatchError(f"{name} must have length {self.n}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_complex(cls, z) -> CanonicalState:
        z = np.asarray(z, dtype=complex)
        return cls(z.size, z.real, z.imag)

    @property
    def z(self) -> np.ndarray:
        return self.x + 1j * self.y

    @property
    def norm2(self) -> float:
        return float(self.x @ self.x + self.y @ self.y)

    def normalized(self) -> CanonicalState:
        scale = np.sqrt(self.norm2)
        return CanonicalState(self.n, self.x / scale, self.y / scale)

    def to_dict(self) -> dict:
        return {"n": self.n, "x": self.x.tolist(), "y": self.y.tolist()}

    @classmethod
    def from_dict(cls, data) -> CanonicalState:
        n = _as_int(data, "n")
        if n < 1:
            raise InputError("n", "must be >= 1")
        return cls(n, _as_vector(data, "x", n), _as_vector(data, "y", n))


def random_canonical(n: int, seed=None, normalized: bool = True) -> CanonicalState:
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    state = CanonicalState.from_complex(z)
    return state.normalized() if normalized else state


def schrodinger_field(state: CanonicalState, op, hbar: float = 1.0):
    """(x_dot, y_dot) for i hbar dz/dt = H z."""
    op = check_hermitian(op, state.n)
    hr, hi = op.real, op.imag
    xdot = (hi @ state.x + hr @ state.y) / hbar
    ydot = (-hr @ state.x + hi @ state.y) / hbar
    return xdot, ydot


def hamiltonian_gradient(state: CanonicalState, op, hbar: float = 1.0):
    """Gradient of <H>/(2 hbar) in (x, y)."""
    op = check_hermitian(op, state.n)
    hr, hi = op.real, op.imag
    return (hr @ state.x - hi @ state.y) / hbar, (hi @ state.x + hr @ state.y) / hbar


def hamilton_field(state: CanonicalState, op, hbar: float = 1.0):
    """Canonical Hamilton equations x_dot = dH/dy, y_dot = -dH/dx."""
    gx, gy = hamiltonian_gradient(state, op, hbar)
    return gy, -gx


def expectation_hamiltonian(state: CanonicalState, op, hbar: float = 1.0) -> float:
    """Real part of sum_ab H_ab conj(z_a) z_b / (2 hbar)."""
    op = np.asarray(op, dtype=complex)
    if op.shape != (state.n, state.n):
        raise DimensionMismatchError(f"expected {state.n}x{state.n} operator")
    z = state.z
    value = np.vdot(z, op @ z) / (2.0 * hbar)
    scale = max(1.0, abs(value))
    if abs(value.imag) > IMAG_TOL * scale:
        raise NotHermitianError(f"expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def _generators(basis: GellMannBasis) -> np.ndarray:
    """Stack I/2 (for alpha0) in front of the basis so alpha_s = 2 z^dag G_s z."""
    return np.concatenate([np.eye(basis.n)[None] / 2.0, basis.matrices])


def pushforward_amplitudes(amps, basis: GellMannBasis) -> GellMannState:
    """Gell-Mann coordinates of sum_p a_p a_p^dag for amplitude columns a_p."""
    amps = np.asarray(amps, dtype=complex)
    if amps.ndim == 1:
        amps = amps[:, None]
    if amps.shape[0] != basis.n:
        raise DimensionMismatchError(f"amplitudes have {amps.shape[0]} rows, basis n={basis.n}")
    rho = amps @ amps.conj().T
    coords = 2.0 * np.einsum("ij,kji->k", rho, basis.matrices)
    if np.max(np.abs(coords.imag)) > IMAG_TOL * max(1.0, np.max(np.abs(rho))):
        raise NotHermitianError("pushforward produced complex coordinates")
    return GellMannState(basis.n, coords.real, float(np.trace(rho).real))


def pushforward(state: CanonicalState, basis: GellMannBasis) -> GellMannState:
    """alpha_s = 2 sum_ij z_i conj(z_j) <j|T_s|i>, alpha0 = |z|^2."""
    if state.n != basis.n:
        raise DimensionMismatchError(f"state n={state.n} but basis n={basis.n}")
    return pushforward_amplitudes(state.z, basis)


def alpha_gradients(x, y, basis: GellMannBasis):
    """Analytic gradients of (alpha_0, ..., alpha_K) in the real coordinates.

    ``x`` and ``y`` are N-vectors or N x M arrays (one column per traced-out
    level).  With ``T = TR + i TI`` (TR symmetric, TI antisymmetric), each
    column contributes ``2 (x.TR.x + y.TR.y + 2 y.TI.x)`` to alpha_s, so

        d alpha_s / dx = 4 (TR x - TI y),   d alpha_s / dy = 4 (TR y + TI x).

    Returns arrays of shape ``(K + 1,) + x.shape``.
    """
    gens = _generators(basis)
    tr, ti = gens.real, gens.imag
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    gx = 4.0 * (np.einsum("sij,j...->si...", tr, x) - np.einsum("sij,j...->si...", ti, y))
    gy = 4.0 * (np.einsum("sij,j...->si...", tr, y) + np.einsum("sij,j...->si...", ti, x))
    return gx, gy


def numeric_alpha_gradients(x, y, basis: GellMannBasis, step: float = 1e-6):
    """Central-difference counterpart of :func:`alpha_gradients`."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)

    def coords(xx, yy):
        st = pushforward_amplitudes(xx + 1j * yy, basis)
        return np.concatenate([[st.alpha0], st.alpha])

    k1 = basis.dim + 1
    gx = np.zeros((k1,) + x.shape)
    gy = np.zeros((k1,) + x.shape)
    for idx in np.ndindex(x.shape):
        e = np.zeros(x.shape)
        e[idx] = step
        gx[(slice(None),) + idx] = (coords(x + e, y) - coords(x - e, y)) / (2 * step)
        gy[(slice(None),) + idx] = (coords(x, y + e) - coords(x, y - e)) / (2 * step)
    return gx, gy


def bracket_matrix(gx, gy) -> np.ndarray:
    """All canonical brackets B_st = dA_s/dx . dA_t/dy - dA_t/dx . dA_s/dy."""
    k1 = gx.shape[0]
    gx = gx.reshape(k1, -1)
    gy = gy.reshape(k1, -1)
    cross = gx @ gy.T
    return cross - cross.T


def canonical_bracket_alpha(s: int, t: int, state: CanonicalState, basis: GellMannBasis,
                            method: str = "analytic", step: float = 1e-6) -> float:
    """{alpha_s, alpha_t} from the canonical bracket; index 0 is alpha_0."""
    k = basis.dim
    for name, idx in (("s", s), ("t", t)):
        if not 0 <= idx <= k:
            raise IndexError(f"{name}={idx} out of range 0..{k}")
    if state.n != basis.n:
        raise DimensionMismatchError(f"state n={state.n} but basis n={basis.n}")
    if method == "analytic":
        gx, gy = alpha_gradients(state.x, state.y, basis)
    elif method == "fd":
        gx, gy = numeric_alpha_gradients(state.x, state.y, basis, step)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(gx[s] @ gy[t] - gx[t] @ gy[s])


def verify_bracket_closure(basis: GellMannBasis, tensors: StructureTensors, samples: int = 20, seed=0,
                           method: str = "analytic", tolerance: float = 1e-11,
                           center_tolerance: float = 1e-12) -> VerificationReport:
    """{alpha_s, alpha_t} = 4 f_stu alpha_u and {alpha_0, .} = 0 on random states."""
    rng = np.random.default_rng(seed)
    worst = worst_center = 0.0
    for _ in range(samples):
        state = random_canonical(basis.n, rng)
        if method == "analytic":
            gx, gy = alpha_gradients(state.x, state.y, basis)
        else:
            gx, gy = numeric_alpha_gradients(state.x, state.y, basis)
        brackets = bracket_matrix(gx, gy)
        alpha = pushforward(state, basis).alpha
        expected = 4.0 * (tensors.f @ alpha)
        worst = max(worst, float(np.max(np.abs(brackets[1:, 1:] - expected))))
        worst_center = max(worst_center, float(np.max(np.abs(brackets[0]))))
    report = VerificationReport.from_residual(
        f"bracket_closure_{method}", worst, tolerance, samples,
        n=basis.n, center_residual=worst_center, center_tolerance=center_tolerance,
    )
    if method == "analytic" and worst_center > center_tolerance:
        return VerificationReport(report.name, report.max_residual, samples, False, report.details)
    return report


def pushed_flow(state: CanonicalState, op, basis: GellMannBasis, hbar: float = 1.0) -> np.ndarray:
    """Image of the Schrodinger field under the pushforward differential."""
    xdot, ydot = schrodinger_field(state, op, hbar)
    gx, gy = alpha_gradients(state.x, state.y, basis)
    return gx[1:] @ xdot + gy[1:] @ ydot
