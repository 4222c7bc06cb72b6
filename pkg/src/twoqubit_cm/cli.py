"""Command-line entry point: ``twoqubit-cm <command> ...``.

Exit codes: 0 success, 1 usage error, 2 numerical-invariant violation,
3 steady state not reached.  ``TWOQUBIT_CM_OUT`` sets the default output
directory (otherwise ``./results``).
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .configio import ConfigError, csv_text, eval_number, parse_config, write_series_csv
from .engine import InvariantViolation, find_steady_state
from .linalg import NotPositiveError
from .model import STATE_NAMES, named_state
from .presets import (
    MEASURE_NAMES,
    PRESETS,
    default_threads,
    gibbs_fidelities,
    measure_trajectory,
    run_preset,
    sweep,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_NO_CONVERGENCE = 0, 1, 2, 3
OUT_ENV = "TWOQUBIT_CM_OUT"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_out() -> Path:
    return Path(os.environ.get(OUT_ENV, "results"))


def _parse_values(text: str) -> list:
    items = [t.strip() for t in text.split(",") if t.strip()]
    out = []
    for t in items:
        try:
            v = eval_number(t)
        except (ValueError, SyntaxError):
            out.append(t)
            continue
        out.append(int(v) if isinstance(v, int) else float(v))
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="twoqubit-cm", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=None, help="maximum worker processes")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list-presets", help="show available figure presets")

    r = sub.add_parser("run", help="compute a figure preset")
    r.add_argument("preset")
    r.add_argument("--out", type=Path, default=None)
    r.add_argument("--n-collisions", type=int, default=None, help="override trajectory length")

    s = sub.add_parser("sweep", help="vary one configuration field")
    s.add_argument("--config", required=True, type=Path)
    s.add_argument("--param", required=True)
    s.add_argument("--values", required=True, help="comma-separated, e.g. '0, 0.95*pi/2'")
    s.add_argument("--measure", default="trace_distance", choices=MEASURE_NAMES)
    s.add_argument("--state", action="append", choices=STATE_NAMES, default=None)
    s.add_argument("--out", type=Path, default=None)

    m = sub.add_parser("measure", help="one measure along a trajectory")
    m.add_argument("name", choices=MEASURE_NAMES)
    m.add_argument("--config", required=True, type=Path)
    m.add_argument("--state", action="append", required=True, choices=STATE_NAMES)
    m.add_argument("--out", type=Path, default=None, help="CSV path; stdout when omitted")

    ss = sub.add_parser("steady-state", help="iterate to the steady state")
    ss.add_argument("--config", required=True, type=Path)
    ss.add_argument("--state", required=True, choices=STATE_NAMES)
    ss.add_argument("--tol", type=float, default=1e-8)
    ss.add_argument("--max-steps", type=int, default=200_000)
    return p


def _dispatch(args) -> int:
    threads = args.threads if args.threads is not None else default_threads()
    if threads < 1:
        raise UsageError("--threads must be at least 1")
    if args.command == "list-presets":
        for pid, preset in PRESETS.items():
            print(f"{pid:8s} {preset.description}")
        return EXIT_OK
    if args.command == "run":
        if args.preset not in PRESETS:
            raise UsageError(f"unknown preset {args.preset!r}; available: {', '.join(PRESETS)}")
        for path in run_preset(args.preset, args.out or _default_out(), threads, args.n_collisions):
            print(path)
        return EXIT_OK
    config = parse_config(args.config)
    if args.command == "sweep":
        states = args.state or (["bell_phi_plus", "bell_phi_minus"] if args.measure == "trace_distance"
                                else ["bell_phi_plus"])
        index = sweep(config, args.param, _parse_values(args.values), args.out or _default_out(),
                      args.measure, states, threads)
        print(index)
        return EXIT_OK
    if args.command == "measure":
        cols = measure_trajectory(args.name, config, args.state)
        if args.out:
            write_series_csv(args.out, cols)
            print(args.out)
        else:
            n = len(next(iter(cols.values())))
            sys.stdout.write(csv_text(["step", *cols], [[i, *(float(c[i]) for c in cols.values())]
                                                        for i in range(n)]))
        return EXIT_OK
    if args.command == "steady-state":
        if args.tol <= 0:
            raise UsageError("--tol must be positive")
        res = find_steady_state(named_state(args.state), config, args.tol, args.max_steps)
        f1, f2 = gibbs_fidelities(res.state, config)
        print(f"converged = {res.converged}")
        print(f"steps = {res.steps}")
        print(f"residual = {res.residual:.17g}")
        print(f"fidelity_gibbs_s1 = {f1:.17g}")
        print(f"fidelity_gibbs_s2 = {f2:.17g}")
        with np.printoptions(precision=10, suppress=True):
            print("state =")
            print(res.state)
        return EXIT_OK if res.converged else EXIT_NO_CONVERGENCE
    raise UsageError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (InvariantViolation, NotPositiveError) as exc:
        print(f"numerical invariant violated: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ConfigError, KeyError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
