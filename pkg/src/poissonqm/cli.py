"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .bipartite import BipartiteState, partial_trace
from .casimirs import casimir_report
from .dynamics import casimir_drift, evolve_rk4, exact_trajectory, time_grid
from .errors import InputError, PoissonQMError
from .gellmann import basis_for, operator_to_coeffs, tensors_for
from .orbits import RANK_TOL, classify_spectrum, orbit_dimension, poisson_rank
from .state import GellMannState, HamiltonianCoeffs, _jsonable, complex_from_dict
from .verify import SUITES, SuiteConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _encode(obj, indent=0) -> str:
    # json.dumps writes floats with repr; outputs here use a fixed 17 significant digits
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_encode(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _encode(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, float):
        text = format(obj, ".17g")
        return text if any(c in text for c in ".en") else text + ".0"
    return json.dumps(obj)


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits, NaN as null."""
    return _encode(_jsonable(obj)) + "\n"


def _emit(obj, out=None):
    text = dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path, field):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(field, f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(field, f"malformed JSON in {path}: {exc.msg} at line {exc.lineno}") from None


def _prefixed(field, fn, data):
    try:
        return fn(data)
    except InputError as exc:
        raise InputError(f"{field}.{exc.field}", str(exc).split(": ", 1)[1]) from None
    except (PoissonQMError, ValueError) as exc:
        raise InputError(field, str(exc)) from None


def load_state(path) -> GellMannState:
    return _prefixed("state", GellMannState.from_dict, _load_json(path, "state"))


def load_hamiltonian(path, n) -> HamiltonianCoeffs:
    """Either {"n","h0","h","hbar"} or {"matrix": {"re","im"}, "hbar"}."""
    data = _load_json(path, "ham")

    def parse(d):
        if isinstance(d, dict) and "matrix" in d:
            hbar = d.get("hbar", 1.0)
            if isinstance(hbar, bool) or not isinstance(hbar, (int, float)) or not hbar > 0:
                raise InputError("hbar", "must be a positive number")
            return operator_to_coeffs(complex_from_dict(d, "matrix", (n, n)), basis_for(n), float(hbar))
        return HamiltonianCoeffs.from_dict(d)

    coeffs = _prefixed("ham", parse, data)
    if coeffs.n != n:
        raise InputError("ham.n", f"Hamiltonian has n={coeffs.n} but state has n={n}")
    return coeffs


def cmd_basis(args):
    _emit(basis_for(args.n).to_dict(), args.out)
    return EXIT_OK


def cmd_tensors(args):
    _emit(tensors_for(args.n).to_dict(), args.out)
    return EXIT_OK


def cmd_evolve(args):
    if not math.isfinite(args.dt) or args.dt <= 0:
        raise InputError("dt", f"must be positive, got {args.dt}")
    if not math.isfinite(args.t) or args.t < 0:
        raise InputError("t", f"must be finite and non-negative, got {args.t}")
    state = load_state(args.state)
    coeffs = load_hamiltonian(args.ham, state.n)
    basis, tensors = basis_for(state.n), tensors_for(state.n)
    if args.method == "rk4":
        traj = evolve_rk4(state, coeffs, tensors, args.t, args.dt, basis)
    else:
        traj = exact_trajectory(state, coeffs, time_grid(args.t, args.dt), basis, tensors)
    if args.out:
        traj.to_csv(args.out)
        _emit({"final": traj.final().to_dict(), "drift": casimir_drift(traj), "steps": len(traj.times) - 1})
    else:
        traj.to_csv(sys.stdout)
    return EXIT_OK


def cmd_casimirs(args):
    state = load_state(args.state)
    _emit(casimir_report(state, basis_for(state.n), tensors_for(state.n)).to_dict())
    return EXIT_OK


def cmd_classify(args):
    if not args.tol > 0:
        raise InputError("tol", "must be positive")
    state = load_state(args.state)
    basis, tensors = basis_for(state.n), tensors_for(state.n)
    spectrum = classify_spectrum(state, basis, args.tol)
    dim = orbit_dimension(spectrum)
    rank = poisson_rank(tensors, state, RANK_TOL)
    _emit({"spectrum": spectrum.to_dict(), "orbit_dimension": dim, "poisson_rank": rank, "agree": dim == rank})
    return EXIT_OK


def cmd_trace_out(args):
    bstate = _prefixed("bipartite", BipartiteState.from_dict, _load_json(args.bipartite, "bipartite"))
    kept = bstate.n if args.side == "A" else bstate.m
    if kept < 2:
        raise InputError("bipartite", f"kept factor must have dimension >= 2, got {kept}")
    _emit(partial_trace(bstate, args.side, basis_for(kept)).to_dict())
    return EXIT_OK


def cmd_verify(args):
    if args.n_max < 2:
        raise InputError("n-max", "must be >= 2")
    if args.trials < 1:
        raise InputError("trials", "must be >= 1")
    config = SuiteConfig(args.n_max, args.trials, args.seed)
    reports = run_suite(args.suite, config)
    payload = {
        "suite": args.suite,
        "config": {"n_max": config.n_max, "trials": config.trials, "seed": config.seed},
        "passed": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
    _emit(payload, args.report)
    failed = [r for r in reports if not r.passed]
    for r in failed:
        sys.stderr.write("FAILED " + dumps(r.to_dict()))
    return EXIT_FAIL if failed else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError("arguments", message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poissonqm", description="Lie-Poisson quantum state geometry toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("basis", help="generalized Gell-Mann basis as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("tensors", help="nonzero structure constants f and d")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_tensors)

    p = sub.add_parser("evolve", help="integrate a state under a constant Hamiltonian")
    p.add_argument("--state", required=True)
    p.add_argument("--ham", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--method", choices=("rk4", "exact"), default="rk4")
    p.add_argument("--out", help="trajectory CSV (default: standard output)")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("casimirs", help="moments, S_m, chain Casimirs, entropy")
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_casimirs)

    p = sub.add_parser("classify", help="spectrum, orbit dimension and Poisson rank")
    p.add_argument("--state", required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("trace-out", help="reduced state of a bipartite pure state")
    p.add_argument("--bipartite", required=True)
    p.add_argument("--side", choices=("A", "B"), required=True)
    p.set_defaults(func=cmd_trace_out)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (InputError, PoissonQMError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


def run(argv=None) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
