"""Verification suite: one seeded check per library-level identity.

Each ``check_*`` function returns a single :class:`VerificationReport`.
:func:`run_suite` selects checks by group and returns them sorted by name.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .bipartite import (
    dnm_dimension,
    max_entropy_check,
    moment_equality_check,
    random_bipartite,
    tracing_jacobian_rank,
)
from .canonical import pushforward, random_canonical, verify_bracket_closure
from .casimirs import (
    char_coeffs,
    entropy,
    is_psd,
    moments,
    pure_chain_check,
    verify_ad_invariance,
)
from .dynamics import casimir_drift, convergence_study, evolve_rk4, exact_trajectory
from .gellmann import (
    basis_for,
    commutator_residual,
    matrix_to_state,
    operator_to_coeffs,
    random_hermitian,
    state_to_matrix,
    tensors_for,
    verify_product_identity,
)
from .orbits import (
    OrbitSpectrum,
    classify_spectrum,
    generic_spectrum,
    orbit_dimension,
    partitions,
    poisson_rank,
    sample_orbit,
)
from .poisson import verify_jacobi
from .state import GellMannState, HamiltonianCoeffs, VerificationReport

SUITES = ("gellmann", "poisson", "casimirs", "orbits", "bipartite", "dynamics")
TRACING_PAIRS = ((2, 1), (3, 1), (3, 2), (4, 2), (3, 3))
MOMENT_PAIRS = ((2, 2), (3, 2), (4, 3))
ENTROPY_PAIRS = ((3, 1), (3, 2), (4, 2))
CONVERGENCE_DTS = (0.05, 0.025, 0.0125, 0.00625)
ORDER_RANGE = (3.7, 4.3)


@dataclass(frozen=True)
class SuiteConfig:
    n_max: int = 4
    trials: int = 50
    seed: int = 42
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))


def _report(name, residual, tolerance, samples, passed=None, **details):
    rep = VerificationReport.from_residual(name, residual, tolerance, samples, **details)
    if passed is not None and not passed:
        return VerificationReport(rep.name, rep.max_residual, rep.samples, False, rep.details)
    return rep


def _mismatch_report(name, mismatches, samples, **details):
    # integer-valued checks: residual is the number of disagreements
    return _report(name, len(mismatches), 0, samples, mismatches=mismatches[:10], **details)


def check_basis(ns=range(2, 7), tolerance: float = 1e-13) -> VerificationReport:
    worst = {}
    for n in ns:
        worst[n] = max(basis_for(n).invariant_residuals().values())
    return _report("basis", max(worst.values()), tolerance, len(worst), per_n=worst)


def check_structure_tensors(ns=range(2, 7), tolerance: float = 1e-12) -> VerificationReport:
    comm, prod = {}, {}
    for n in ns:
        basis, tensors = basis_for(n), tensors_for(n)
        comm[n] = commutator_residual(basis, tensors)
        prod[n] = verify_product_identity(basis, tensors, tolerance).max_residual
    spots = {}
    if 3 in ns:
        t3 = tensors_for(3)
        expected = {("f", 1, 2, 3): 1.0, ("f", 4, 5, 8): math.sqrt(3) / 2, ("d", 1, 1, 8): 1 / math.sqrt(3)}
        for (kind, a, b, c), value in expected.items():
            spots[f"{kind}{a}{b}{c}"] = abs(t3.value(kind, a, b, c) - value)
    worst = max([*comm.values(), *prod.values(), *spots.values()])
    return _report("structure_tensors", worst, tolerance, len(comm), commutator=comm, product_identity=prod,
                   spot_values=spots)


def check_jacobi(ns=(2, 3, 4), samples: int = 100, seed=42, tolerance: float = 1e-10) -> VerificationReport:
    per_n = {n: verify_jacobi(tensors_for(n), samples, seed + n, tolerance).max_residual for n in ns}
    return _report("jacobi", max(per_n.values()), tolerance, samples * len(per_n), per_n=per_n)


def check_bracket_closure(ns=(2, 3), samples: int = 20, seed=42, tolerance: float = 1e-11,
                          fd_tolerance: float = 1e-6, center_tolerance: float = 1e-12) -> VerificationReport:
    analytic, fd, center = {}, {}, {}
    for n in ns:
        basis, tensors = basis_for(n), tensors_for(n)
        rep = verify_bracket_closure(basis, tensors, samples, seed + n, "analytic", tolerance, center_tolerance)
        analytic[n] = rep.max_residual
        center[n] = rep.details["center_residual"]
        fd[n] = verify_bracket_closure(basis, tensors, samples, seed + n, "fd", fd_tolerance).max_residual
    passed = max(analytic.values()) <= tolerance and max(fd.values()) <= fd_tolerance
    passed = passed and max(center.values()) <= center_tolerance
    worst = max(analytic.values())
    return _report("bracket_closure", worst, tolerance, samples * len(ns), passed, analytic=analytic, fd=fd,
                   fd_tolerance=fd_tolerance, center=center, center_tolerance=center_tolerance)


def check_pure_states(ns=(2, 3, 4), samples: int = 50, seed=42, surface_tolerance: float = 1e-11,
                      chain_tolerance: float = 1e-10, moment_tolerance: float = 1e-11) -> VerificationReport:
    surface = chain = moment = 0.0
    for n in ns:
        basis, tensors = basis_for(n), tensors_for(n)
        rng = np.random.default_rng(seed + n)
        for _ in range(samples):
            state = pushforward(random_canonical(n, rng), basis)
            surface = max(surface, abs(state.alpha @ state.alpha - 2 * (1 - 1 / n)))
            chain = max(chain, pure_chain_check(state, basis, tensors, chain_tolerance).max_residual)
            moment = max(moment, float(np.max(np.abs(moments(state, basis, max(n, 4)) - 1.0))))
    passed = surface <= surface_tolerance and chain <= chain_tolerance and moment <= moment_tolerance
    return _report("pure_states", max(surface, chain, moment), max(surface_tolerance, chain_tolerance),
                   samples * len(ns), passed, surface=surface, chain=chain, moments=moment,
                   surface_tolerance=surface_tolerance, chain_tolerance=chain_tolerance,
                   moment_tolerance=moment_tolerance)


def elementary_symmetric(values, m: int) -> float:
    """e_m by brute-force enumeration of m-subsets."""
    return float(sum(math.prod(c) for c in itertools.combinations(values, m)))


def random_unit_trace(n: int, rng) -> np.ndarray:
    """I/N plus a random traceless perturbation; roughly half are not PSD."""
    x = random_hermitian(n, rng)
    x -= np.trace(x).real / n * np.eye(n)
    x /= np.linalg.norm(x)
    return np.eye(n) / n + rng.uniform(0.0, 1.0) * x


def check_newton(ns=(2, 3, 4), samples: int = 1000, seed=42, tolerance: float = 1e-10,
                 psd_tolerance: float = 1e-9) -> VerificationReport:
    worst = 0.0
    disagreements = []
    psd_count = 0
    for n in ns:
        basis = basis_for(n)
        rng = np.random.default_rng(seed + n)
        for i in range(samples):
            rho = random_unit_trace(n, rng)
            state = matrix_to_state(rho, basis)
            eig = np.linalg.eigvalsh(rho)
            s = char_coeffs(moments(state, basis, n), state.alpha0, n)
            oracle = np.array([elementary_symmetric(eig, m) for m in range(1, n + 1)])
            worst = max(worst, float(np.max(np.abs(s - oracle))))
            verdict = is_psd(state, basis, psd_tolerance)[0]
            truth = eig[0] >= -psd_tolerance
            psd_count += truth
            if verdict != truth:
                disagreements.append([n, i, float(eig[0])])
    passed = not disagreements
    return _report("newton_identities", worst, tolerance, samples * len(ns), passed,
                   psd_tolerance=psd_tolerance, psd_disagreements=disagreements[:10], psd_fraction=psd_count / (samples * len(ns)))


def check_ad_invariance(ns=(3, 4), samples: int = 20, seed=42, tolerance: float = 1e-9,
                        identity_tolerance: float = 1e-12) -> VerificationReport:
    details, worst_bracket, worst_identity, passed = {}, 0.0, 0.0, True
    for n in ns:
        tensors = tensors_for(n)
        for m in range(3, n + 1):
            rep = verify_ad_invariance(tensors, m, samples, seed + n, tolerance, identity_tolerance)
            details[f"n{n}_m{m}"] = rep.details
            worst_bracket = max(worst_bracket, rep.details["bracket_residual"])
            worst_identity = max(worst_identity, rep.details.get("identity_residual", 0.0))
            passed = passed and rep.passed
    return _report("ad_invariance", worst_bracket, tolerance, samples, passed, identity_residual=worst_identity,
                   identity_tolerance=identity_tolerance, runs=details)


def check_orbit_rank(ns=(2, 3, 4), samples: int = 50, seed=42) -> VerificationReport:
    mismatches, skipped, total = [], 0, 0
    for n in ns:
        basis, tensors = basis_for(n), tensors_for(n)
        rng = np.random.default_rng(seed + n)
        shapes = list(partitions(n)) + [("pure",)]
        for shape in shapes:
            if shape == ("pure",):
                spectrum = OrbitSpectrum(n, np.array([1.0, 0.0]), (1, n - 1))
                expected = 2 * (n - 1)
            else:
                spectrum = generic_spectrum(shape, rng)
                expected = orbit_dimension(spectrum)
            for _ in range(samples):
                state = sample_orbit(spectrum, basis, rng)
                if classify_spectrum(state, basis).near_degenerate:
                    skipped += 1
                    continue
                total += 1
                rank = poisson_rank(tensors, state)
                if rank != expected:
                    mismatches.append([n, list(shape), rank, expected])
    return _mismatch_report("orbit_rank", mismatches, total, skipped=skipped)


def check_tracing_dimension(pairs=TRACING_PAIRS, samples: int = 20, seed=42) -> VerificationReport:
    mismatches, ranks = [], {}
    rng = np.random.default_rng(seed)
    for n, m in pairs:
        basis = basis_for(n)
        expected = dnm_dimension(n, m)
        for _ in range(samples):
            rank = tracing_jacobian_rank(random_bipartite(n, m, rng), basis)
            if rank != expected:
                mismatches.append([n, m, rank, expected])
        ranks[f"{n}x{m}"] = expected
    return _mismatch_report("tracing_dimension", mismatches, samples * len(pairs), expected=ranks)


def check_moment_equality(pairs=MOMENT_PAIRS, samples: int = 100, seed=42, tolerance: float = 1e-12) -> VerificationReport:
    worst = 0.0
    rng = np.random.default_rng(seed)
    for n, m in pairs:
        for _ in range(samples):
            worst = max(worst, moment_equality_check(random_bipartite(n, m, rng), 4, tolerance).max_residual)
    return _report("moment_equality", worst, tolerance, samples * len(pairs), pairs=[list(p) for p in pairs])


def check_max_entropy(pairs=ENTROPY_PAIRS, samples: int = 50, seed=42, tolerance: float = 1e-8) -> VerificationReport:
    """Haar points of the {1/M (x M), 0 (x N-M)} leaf must pass, generic rank-M states must not."""
    eig_dev = ent_dev = 0.0
    failures = []
    rng = np.random.default_rng(seed)
    for n, m in pairs:
        basis, tensors = basis_for(n), tensors_for(n)
        spectrum = OrbitSpectrum(n, np.array([1 / m, 0.0]), (m, n - m))
        expected_rank = 2 * m * (n - m)
        for _ in range(samples):
            state = sample_orbit(spectrum, basis, rng)
            if not max_entropy_check(state, basis, m):
                failures.append([n, m, "rejected"])
                continue
            eig = np.linalg.eigvalsh(state_to_matrix(state, basis))
            eig_dev = max(eig_dev, float(np.max(np.minimum(np.abs(eig), np.abs(eig - 1 / m)))))
            ent_dev = max(ent_dev, abs(entropy(state, basis) - math.log(m)))
            rank = poisson_rank(tensors, state)
            if rank != expected_rank:
                failures.append([n, m, rank, expected_rank])
            # a generic point of D_N^M off the leaf
            other = generic_spectrum((1,) * m, rng) if m > 1 else None
            if other is not None:
                mixed = OrbitSpectrum(n, np.append(other.eigenvalues, 0.0), (1,) * m + (n - m,))
                if max_entropy_check(sample_orbit(mixed, basis, rng), basis, m):
                    failures.append([n, m, "accepted off-leaf state"])
    passed = not failures
    return _report("max_entropy", max(eig_dev, ent_dev), tolerance, samples * len(pairs), passed,
                   eigenvalue_deviation=eig_dev, entropy_deviation=ent_dev, failures=failures[:10])


def _random_mixed(n, rng):
    a = random_bipartite(n, n, rng).a
    return matrix_to_state(a @ a.conj().T, basis_for(n))


def check_dynamics(n: int = 3, seed=42, exact_tolerance: float = 1e-11, rk4_tolerance: float = 1e-8,
                   precession_tolerance: float = 1e-10, t_end: float = 10.0, dt: float = 1e-3,
                   dts=CONVERGENCE_DTS) -> VerificationReport:
    basis, tensors = basis_for(n), tensors_for(n)
    rng = np.random.default_rng(seed)
    coeffs = operator_to_coeffs(random_hermitian(n, rng), basis)
    state = _random_mixed(n, rng)

    conv = convergence_study(state, coeffs, tensors, basis, 2.0, dts)
    lo, hi = ORDER_RANGE
    order_ok = all(lo <= p <= hi for p in conv["orders"]) and lo <= conv["fitted_order"] <= hi

    times = np.linspace(0.0, t_end, 101)
    exact_drift = casimir_drift(exact_trajectory(state, coeffs, times, basis, tensors))
    rk4_drift = casimir_drift(evolve_rk4(state, coeffs, tensors, t_end, dt, basis))
    exact_worst = max(exact_drift.values())
    rk4_worst = max(rk4_drift.values())

    b2, t2 = basis_for(2), tensors_for(2)
    spin = GellMannState(2, [1.0, 0.0, 0.0])
    prec = HamiltonianCoeffs(2, 0.0, [0.0, 0.0, 1.0])
    end = evolve_rk4(spin, prec, t2, math.pi / 2, dt, b2, track=False).final().alpha
    prec_err = float(np.max(np.abs(end - [0.0, 1.0, 0.0])))

    passed = order_ok and exact_worst <= exact_tolerance and rk4_worst <= rk4_tolerance
    passed = passed and prec_err <= precession_tolerance
    return _report("dynamics", rk4_worst, rk4_tolerance, len(dts), passed, n=n, convergence=conv,
                   order_range=list(ORDER_RANGE), exact_drift=exact_drift, exact_tolerance=exact_tolerance,
                   rk4_drift=rk4_drift, precession_error=prec_err, precession_tolerance=precession_tolerance)


def check_no_go(ns=(2, 3, 4), samples: int = 100, seed=42, tolerance: float = 1e-12) -> VerificationReport:
    """Tr[A, B] = 0 for Hermitian A, B, so [A, B] = i hbar I has no solution."""
    worst = 0.0
    for n in ns:
        basis = basis_for(n)
        rng = np.random.default_rng(seed + n)
        for _ in range(samples):
            a, b = (rng.standard_normal() * np.eye(n) + np.einsum("k,kij->ij", rng.standard_normal(basis.dim),
                                                                  basis.matrices) for _ in range(2))
            worst = max(worst, abs(np.trace(a @ b - b @ a)))
    return _report("no_go", worst, tolerance, samples * len(ns))


def _ns(lo, hi, n_max):
    return tuple(range(lo, min(hi, n_max) + 1))


def _pairs(pairs, n_max):
    return tuple(p for p in pairs if p[0] <= n_max)


def _plan(config: SuiteConfig):
    t, s, k = config.trials, config.seed, config.n_max
    tol = config.tol
    return {
        "gellmann": [
            lambda: check_basis(_ns(2, k, k), tol("basis", 1e-13)),
            lambda: check_structure_tensors(_ns(2, k, k), tol("structure_tensors", 1e-12)),
            lambda: check_no_go(_ns(2, k, k), 2 * t, s, tol("no_go", 1e-12)),
        ],
        "poisson": [
            lambda: check_jacobi(_ns(2, k, k), 2 * t, s, tol("jacobi", 1e-10)),
            lambda: check_bracket_closure(_ns(2, min(k, 3), k), min(t, 20), s, tol("bracket_closure", 1e-11)),
        ],
        "casimirs": [
            lambda: check_pure_states(_ns(2, k, k), t, s),
            lambda: check_newton(_ns(2, k, k), 20 * t, s, tol("newton_identities", 1e-10)),
            lambda: check_ad_invariance(_ns(3, k, k), min(t, 20), s, tol("ad_invariance", 1e-9)),
        ],
        "orbits": [lambda: check_orbit_rank(_ns(2, k, k), t, s)],
        "bipartite": [
            lambda: check_tracing_dimension(_pairs(TRACING_PAIRS, k), min(t, 20), s),
            lambda: check_moment_equality(_pairs(MOMENT_PAIRS, k), 2 * t, s, tol("moment_equality", 1e-12)),
            lambda: check_max_entropy(_pairs(ENTROPY_PAIRS, k), t, s, tol("max_entropy", 1e-8)),
        ],
        "dynamics": [lambda: check_dynamics(min(3, k), s)],
    }


def run_suite(suite: str = "all", config: SuiteConfig | None = None) -> list[VerificationReport]:
    """Run one group (or ``"all"``) and return reports sorted by check name."""
    config = config or SuiteConfig()
    plan = _plan(config)
    if suite != "all" and suite not in plan:
        raise ValueError(f"unknown suite {suite!r}; expected 'all' or one of {', '.join(SUITES)}")
    groups = SUITES if suite == "all" else (suite,)
    reports = [check() for g in groups for check in plan[g]]
    return sorted(reports, key=lambda r: r.name)
