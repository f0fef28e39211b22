"""Time evolution of Gell-Mann states under a constant Hamiltonian.

``evolve_exact`` conjugates by the propagator and serves as the oracle;
``evolve_rk4`` integrates the Lie-Poisson flow with classical fixed-step RK4.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .casimirs import casimir_report
from .errors import DivergenceError
from .gellmann import (
    GellMannBasis,
    StructureTensors,
    basis_for,
    check_hermitian,
    coeffs_to_operator,
    matrix_to_state,
    operator_to_coeffs,
    state_to_matrix,
    tensors_for,
)
from .poisson import flow_field, flow_generator, hamiltonian_value
from .state import GellMannState, HamiltonianCoeffs

UNITARITY_TOL = 1e-12


def _coeffs_and_operator(hamiltonian, basis, hbar):
    if isinstance(hamiltonian, HamiltonianCoeffs):
        return hamiltonian, coeffs_to_operator(hamiltonian, basis)
    op = check_hermitian(hamiltonian, basis.n)
    return operator_to_coeffs(op, basis, hbar), op


def propagator(op, t: float, hbar: float = 1.0) -> np.ndarray:
    """U = V exp(-i E t / hbar) V^dag for H = V E V^dag."""
    energies, vecs = np.linalg.eigh(op)
    u = (vecs * np.exp(-1j * energies * t / hbar)) @ vecs.conj().T
    err = np.max(np.abs(u.conj().T @ u - np.eye(len(op))))
    if err > UNITARITY_TOL * max(1.0, len(op)):
        raise ArithmeticError(f"propagator not unitary: {err:.3e}")
    return u


def _check_convention(state, coeffs, op, basis, tensors):
    # d/dt (U rho U^dag) at t=0 is -(i/hbar)[H, rho]; it must equal the Lie-Poisson field.
    rho = state_to_matrix(state, basis)
    deriv = -1j / coeffs.hbar * (op @ rho - rho @ op)
    lhs = 2.0 * np.einsum("ij,kji->k", deriv, basis.matrices).real
    rhs = flow_field(state, coeffs, tensors)
    scale = max(1.0, float(np.max(np.abs(rhs))))
    if np.max(np.abs(lhs - rhs)) > 1e-9 * scale:
        raise AssertionError("conjugation convention disagrees with the Lie-Poisson flow")


def evolve_exact(state: GellMannState, hamiltonian, t: float, basis: GellMannBasis,
                 hbar: float = 1.0, tensors: StructureTensors | None = None) -> GellMannState:
    """State at time t: rho(t) = U rho U^dag, U = exp(-i H t / hbar).

    ``hamiltonian`` is a :class:`HamiltonianCoeffs` (its hbar wins) or a
    Hermitian matrix.
    """
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    coeffs, op = _coeffs_and_operator(hamiltonian, basis, hbar)
    tensors = tensors if tensors is not None else tensors_for(basis.n)
    _check_convention(state, coeffs, op, basis, tensors)
    u = propagator(op, t, coeffs.hbar)
    rho = u @ state_to_matrix(state, basis) @ u.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    out = matrix_to_state(rho, basis)
    return GellMannState(basis.n, out.alpha, state.alpha0)


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: list
    casimir_track: list = field(default_factory=list)
    energies: np.ndarray | None = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if times.size != len(self.states):
            raise ValueError("times and states differ in length")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        if self.casimir_track and len(self.casimir_track) != times.size:
            raise ValueError("casimir_track not aligned with times")
        object.__setattr__(self, "times", times)

    @property
    def n(self) -> int:
        return self.states[0].n

    def final(self) -> GellMannState:
        return self.states[-1]

    def to_csv(self, target) -> None:
        """Header t, alpha_1..alpha_K, tr2..trN, S2..SN, entropy; 17 significant digits.

        ``target`` is a path or an open text stream.
        """
        if not self.casimir_track:
            raise ValueError("trajectory was computed without Casimir tracking")
        if hasattr(target, "write"):
            self._write_csv(target)
        else:
            with open(target, "w", newline="") as fh:
                self._write_csv(fh)

    def _write_csv(self, fh):
        n = self.n
        header = ["t"] + [f"alpha_{k}" for k in range(1, n * n)]
        header += [f"tr{m}" for m in range(2, n + 1)] + [f"S{m}" for m in range(2, n + 1)] + ["entropy"]
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for t, st, rep in zip(self.times, self.states, self.casimir_track):
            row = [t, *st.alpha, *rep.moments, *rep.char_coeffs[1:]]
            row.append(float("nan") if rep.entropy is None else rep.entropy)
            writer.writerow([format(float(v), ".17g") for v in row])


def _track(states, basis, tensors):
    return [casimir_report(s, basis, tensors) for s in states]


def exact_trajectory(state: GellMannState, hamiltonian, times, basis: GellMannBasis,
                     tensors: StructureTensors | None = None, hbar: float = 1.0) -> Trajectory:
    tensors = tensors if tensors is not None else tensors_for(basis.n)
    coeffs, _ = _coeffs_and_operator(hamiltonian, basis, hbar)
    states = [evolve_exact(state, coeffs, float(t), basis, tensors=tensors) for t in times]
    energies = np.array([hamiltonian_value(s, coeffs) for s in states])
    return Trajectory(np.asarray(times, dtype=float), states, _track(states, basis, tensors), energies)


def time_grid(t_end: float, dt: float) -> np.ndarray:
    """0, dt, 2 dt, ..., t_end with a shortened final interval."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if not (math.isfinite(t_end) and t_end >= 0):
        raise ValueError(f"t_end must be finite and non-negative, got {t_end}")
    steps = max(0, math.ceil(t_end / dt - 1e-9))
    grid = np.arange(steps + 1, dtype=float) * dt
    if steps:
        grid[-1] = t_end
    return grid


def evolve_rk4(state: GellMannState, coeffs: HamiltonianCoeffs, tensors: StructureTensors,
               t_end: float, dt: float, basis: GellMannBasis | None = None,
               track: bool = True) -> Trajectory:
    """Fixed-step classical RK4 on alpha_dot = A alpha; the last step is shortened to land on t_end."""
    grid = time_grid(t_end, dt)
    basis = basis if basis is not None else basis_for(state.n)
    gen = flow_generator(coeffs, tensors)
    alpha = np.array(state.alpha, dtype=float)
    alphas = [alpha.copy()]
    # overflow is reported as DivergenceError rather than numpy warnings
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(grid.size - 1):
            h = grid[i + 1] - grid[i]
            k1 = gen @ alpha
            k2 = gen @ (alpha + 0.5 * h * k1)
            k3 = gen @ (alpha + 0.5 * h * k2)
            k4 = gen @ (alpha + h * k3)
            alpha = alpha + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(alpha)):
                raise DivergenceError(i + 1)
            alphas.append(alpha.copy())
    states = [GellMannState(state.n, a, state.alpha0) for a in alphas]
    energies = np.array([hamiltonian_value(s, coeffs) for s in states])
    return Trajectory(grid, states, _track(states, basis, tensors) if track else [], energies)


def casimir_drift(trajectory: Trajectory) -> dict[str, float]:
    """Max |value(t) - value(0)| for every tracked invariant and the energy."""
    out: dict[str, float] = {}
    if trajectory.casimir_track:
        first = trajectory.casimir_track[0].values()
        for rep in trajectory.casimir_track:
            for key, value in rep.values().items():
                if math.isnan(first[key]) and math.isnan(value):
                    drift = 0.0
                else:
                    drift = abs(value - first[key])
                out[key] = max(out.get(key, 0.0), drift)
    if trajectory.energies is not None and trajectory.energies.size:
        out["hamiltonian"] = float(np.max(np.abs(trajectory.energies - trajectory.energies[0])))
    return out


def convergence_study(state: GellMannState, coeffs: HamiltonianCoeffs, tensors: StructureTensors,
                      basis: GellMannBasis, t_end: float, dts) -> dict:
    """Endpoint error of RK4 against the exact propagator over a dt ladder."""
    exact = evolve_exact(state, coeffs, t_end, basis, tensors=tensors).alpha
    dts = [float(dt) for dt in dts]
    errors = []
    for dt in dts:
        end = evolve_rk4(state, coeffs, tensors, t_end, dt, basis, track=False).final().alpha
        errors.append(float(np.max(np.abs(end - exact))))
    ratios = [errors[i] / errors[i + 1] for i in range(len(errors) - 1)]
    orders = [math.log(errors[i] / errors[i + 1]) / math.log(dts[i] / dts[i + 1]) for i in range(len(errors) - 1)]
    fitted = float(np.polyfit(np.log(dts), np.log(errors), 1)[0])
    return {"dts": dts, "errors": errors, "ratios": ratios, "orders": orders, "fitted_order": fitted}
