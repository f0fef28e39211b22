"""Acceptance gate: each criterion at its stated sample counts and tolerances.

Run ``pytest tests/test_acceptance.py`` (one PASS/FAIL line per criterion is
written to the terminal) or ``python3 tests/test_acceptance.py``.
"""

import sys

import pytest

from poissonqm import verify
from poissonqm.gellmann import basis_for, tensors_for
from poissonqm.orbits import OrbitSpectrum, poisson_rank, sample_orbit

SEED = 42

CRITERIA = {
    1: ("basis correctness", lambda: verify.check_basis(range(2, 7), 1e-13)),
    2: ("structure tensor fidelity", lambda: verify.check_structure_tensors(range(2, 7), 1e-12)),
    3: ("Jacobi identity", lambda: verify.check_jacobi((2, 3, 4), 100, SEED, 1e-10)),
    4: ("canonical bracket closure", lambda: verify.check_bracket_closure((2, 3), 20, SEED, 1e-11, 1e-6, 1e-12)),
    5: ("pure-state surface and chain", lambda: verify.check_pure_states((2, 3, 4), 50, SEED, 1e-11, 1e-10, 1e-11)),
    6: ("Newton identities vs eigenvalues", lambda: verify.check_newton((2, 3, 4), 1000, SEED, 1e-10, 1e-9)),
    7: ("ad-invariance", lambda: verify.check_ad_invariance((3, 4), 20, SEED, 1e-9, 1e-12)),
    8: ("orbit dimension vs Poisson rank", lambda: verify.check_orbit_rank((2, 3, 4), 50, SEED)),
    9: ("tracing dimension", lambda: verify.check_tracing_dimension(verify.TRACING_PAIRS, 20, SEED)),
    10: ("moment equality after tracing", lambda: verify.check_moment_equality(verify.MOMENT_PAIRS, 100, SEED, 1e-12)),
    11: ("maximal-entropy leaf", lambda: verify.check_max_entropy(verify.ENTROPY_PAIRS, 50, SEED, 1e-8)),
    12: ("dynamics", lambda: verify.check_dynamics(3, SEED, 1e-11, 1e-8, 1e-10, 10.0, 1e-3)),
    13: ("no-go witness", lambda: verify.check_no_go((2, 3, 4), 100, SEED, 1e-12)),
}


def _line(number, label, report):
    status = "PASS" if report.passed else "FAIL"
    return f"{status} criterion {number:2d} {label}: max residual {report.max_residual:.3e} over {report.samples} samples"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    label, check = CRITERIA[number]
    report = check()
    with capsys.disabled():
        print("\n" + _line(number, label, report))
    assert report.passed, report.to_dict()


def test_criterion_6_covers_both_verdicts():
    rep = verify.check_newton((2, 3, 4), 1000, SEED, 1e-10, 1e-9)
    assert 0.2 < rep.details["psd_fraction"] < 0.8


def test_criterion_8_specific_ranks():
    b3, t3 = basis_for(3), tensors_for(3)
    cases = [((0.5, 0.3, 0.2), (1, 1, 1), 6), ((0.5, 0.25), (1, 2), 4), ((1.0, 0.0), (1, 2), 4)]
    for values, mult, rank in cases:
        for seed in range(50):
            assert poisson_rank(t3, sample_orbit(OrbitSpectrum(3, values, mult), b3, seed)) == rank
    for n in (2, 3, 4):
        b, t = basis_for(n), tensors_for(n)
        pure = OrbitSpectrum(n, (1.0, 0.0), (1, n - 1))
        assert all(poisson_rank(t, sample_orbit(pure, b, s)) == 2 * (n - 1) for s in range(50))


if __name__ == "__main__":
    failed = 0
    for number in sorted(CRITERIA):
        label, check = CRITERIA[number]
        report = check()
        failed += not report.passed
        print(_line(number, label, report))
    sys.exit(1 if failed else 0)
