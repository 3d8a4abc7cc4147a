"""Command-line front end.

Subcommands: solve, eval, oracle, export, validate.  Exit codes: 0 success,
1 usage or input error, 2 computational failure.  Output is deterministic:
floats go through Python's shortest round-trip repr (at most 17 significant
digits) so repeated runs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import engine, oracles
from .expr import ExprError
from .funcspace import SpectralError, UnresolvedError
from .problem import (ProblemConfigError, StateError, analytic_sine_state,
                      load_problem, state_from_expr, validate_state)

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="pertbvp",
                description="Perturbation expansions for two-point boundary "
                            "eigenproblems with derivative couplings.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, problem=False, series=False):
        if problem:
            sp.add_argument("--problem", required=True,
                            help="problem config file")
        if series:
            sp.add_argument("series", help="series JSON file")
        sp.add_argument("--n", type=int, default=1, help="quantum number")
        sp.add_argument("--order", type=int, default=3,
                        help="highest perturbation order J")
        sp.add_argument("--lambda", dest="lam", type=float, default=None,
                        help="coupling strength")
        sp.add_argument("--normalize", action="store_true",
                        help="apply the normalization series")
        sp.add_argument("--out", default=None, help="output file path")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--tol-rel", type=float, default=1e-13,
                        help="spectral tail tolerance")
        sp.add_argument("--grid", type=int, default=None,
                        help="sample count (export) or FD interior points (oracle)")
        sp.add_argument("--amplitude", type=float, default=float(np.sqrt(2.0)),
                        help="requested unperturbed amplitude")

    sp_solve = sub.add_parser("solve", help="compute a perturbation series")
    common(sp_solve, problem=True)

    sp_eval = sub.add_parser("eval", help="partial sums from a series file")
    common(sp_eval, series=True)

    sp_oracle = sub.add_parser("oracle", help="finite-difference eigenvalue")
    common(sp_oracle, problem=True)
    sp_oracle.add_argument("--series", dest="series_file", default=None,
                           help="series JSON to compare against")
    sp_oracle.add_argument("--guess", type=float, default=None,
                           help="eigenvalue guess (default: unperturbed E0)")

    sp_export = sub.add_parser("export", help="sample wavefunctions to CSV")
    common(sp_export, series=True)

    sp_validate = sub.add_parser("validate", help="check an unperturbed state")
    common(sp_validate, problem=True)

    return p


def _check_config(args):
    if getattr(args, "order", 0) < 0:
        raise _UsageError(f"--order must be >= 0, got {args.order}")
    if getattr(args, "n", 1) < 1:
        raise _UsageError(f"--n must be >= 1, got {args.n}")
    if getattr(args, "grid", None) is not None and args.grid < 2:
        raise _UsageError(f"--grid must be >= 2, got {args.grid}")


def _load_problem_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return load_problem(fh.read())


def _make_state(problem, args):
    if problem.y0_expr is not None:
        return state_from_expr(problem, n=args.n)
    return analytic_sine_state(problem, args.n, amplitude=args.amplitude)


def _load_series_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return engine.series_from_dict(data)


def _fmt(v: float) -> str:
    return repr(float(v))


def cmd_solve(args) -> int:
    problem = _load_problem_file(args.problem)
    state = _make_state(problem, args)
    series = engine.compute_series(problem, state, args.order)
    print(f"{'j':>3} {'E_j':>24} {'N_j':>24}")
    for j in range(series.order + 1):
        print(f"{j:>3} {series.energies[j]:>24.16e} "
              f"{series.norm_coeffs[j]:>24.16e}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(engine.series_to_dict(series), fh, indent=2)
            fh.write("\n")
    return 0


def cmd_eval(args) -> int:
    series = _load_series_file(args.series)
    lam = args.lam if args.lam is not None else 0.0
    upto = min(args.order, series.order) if args.order is not None else series.order
    print(f"{'order':>5} {'E(lambda)':>24}")
    for j in range(upto + 1):
        energy, _ = engine.sum_series(series, lam, j)
        print(f"{j:>5} {energy:>24.16e}")
    if args.normalize:
        _, y = engine.sum_series(series, lam, upto, normalize=True)
        points = args.grid if args.grid is not None else 11
        xs = np.linspace(y.a, y.b, points)
        print("x,y")
        for x, v in zip(xs, y(xs)):
            print(f"{_fmt(x)},{_fmt(v)}")
    return 0


def cmd_oracle(args) -> int:
    problem = _load_problem_file(args.problem)
    lam = args.lam if args.lam is not None else 0.0
    M = args.grid if args.grid is not None else 512
    series = _load_series_file(args.series_file) if args.series_file else None
    if args.guess is not None:
        guess = args.guess
    elif series is not None:
        guess, _ = engine.sum_series(series, lam, series.order)
    else:
        length = problem.b - problem.a
        guess = (args.n * np.pi / length) ** 2
    value = oracles.fd_eigenvalue(problem, lam, guess, M)
    print(f"fd_eigenvalue = {value:.12e}")
    if series is not None:
        summed, _ = engine.sum_series(series, lam, series.order)
        print(f"series_sum    = {summed:.12e}")
        print(f"deviation     = {summed - value:.6e}")
    return 0


def cmd_export(args) -> int:
    series = _load_series_file(args.series)
    points = args.grid if args.grid is not None else 201
    y0 = series.wavefuns[0]
    xs = np.linspace(y0.a, y0.b, points)
    if args.lam is not None:
        upto = min(args.order, series.order)
        _, y = engine.sum_series(series, args.lam, upto,
                                 normalize=args.normalize)
        header = "x,y_sum"
        columns = [y(xs)]
    else:
        upto = min(args.order, series.order) if args.order is not None \
            else series.order
        header = "x," + ",".join(f"y{j}" for j in range(upto + 1))
        columns = [series.wavefuns[j](xs) for j in range(upto + 1)]
    lines = [header]
    for i, x in enumerate(xs):
        row = [_fmt(x)] + [_fmt(col[i]) for col in columns]
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_validate(args) -> int:
    problem = _load_problem_file(args.problem)
    state = _make_state(problem, args)
    res, left, right = validate_state(problem, state)
    print(f"ode_residual = {res:.6e}")
    print(f"|y0(a)|      = {left:.6e}")
    print(f"|y0(b)|      = {right:.6e}")
    ypp = state.dy0.derivative()
    bound = 1e-9 * max(1.0, ypp.sup_norm())
    ok = res <= bound and left <= 1e-10 and right <= 1e-10
    print("state OK" if ok else "state INVALID")
    return 0 if ok else 2


_COMMANDS = {
    "solve": cmd_solve,
    "eval": cmd_eval,
    "oracle": cmd_oracle,
    "export": cmd_export,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _check_config(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except (OSError, json.JSONDecodeError, KeyError,
            ProblemConfigError, ExprError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (engine.EngineError, StateError, UnresolvedError, SpectralError,
            oracles.OracleError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
