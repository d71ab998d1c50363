"""
Command line front end::

    floqseirs <simulate|r0|dfe|sweep|persist-check|check-f> --config PATH [options]

Exit codes: 0 success, 1 invalid configuration, 2 numerical failure,
3 incidence assumption violation. Set ``FLOQSEIRS_LOG`` to ``error``,
``info`` or ``debug`` for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace

import numpy as np

from .config import ConfigError, RunConfig, load_config
from .dfe import N_SAMPLES, disease_free_solution
from .errors import AssumptionViolation, DomainError, NumericalFailure
from .experiments import persist_check, simulate, sweep
from .incidence import check_assumptions
from .reproduction import r0_solve

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_ASSUMPTION = 0, 1, 2, 3

log = logging.getLogger("floqseirs")


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def to_csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def cmd_simulate(config: RunConfig, horizon=None) -> str:
    traj = simulate(config, horizon=horizon)
    rows = np.column_stack([traj.t, traj.y])
    return to_csv(["t", "S", "E", "I", "R"], rows)


def cmd_r0(config: RunConfig, tol=None) -> str:
    rep = r0_solve(config.params, config.incidence, tol=tol or config.r0_tol)
    return to_json(rep.to_dict())


def cmd_dfe(config: RunConfig) -> str:
    sol = disease_free_solution(config.params)
    ts = np.linspace(0.0, config.params.period_lt, N_SAMPLES)
    return to_csv(["t", "S_hat"], np.column_stack([ts, sol(ts)]))


def cmd_sweep(config: RunConfig, beta0_min, beta0_max, steps, tol=None, jobs=1) -> tuple:
    rows = sweep(config, beta0_min, beta0_max, steps, tol=tol, jobs=jobs)
    ok = any(not str(r[3]).startswith("error") for r in rows)
    return to_csv(["beta0", "r0_avg", "r0", "classification"], rows), ok


def cmd_persist_check(config: RunConfig, tail_periods=None, floor=None,
                      threshold=None, horizon=None) -> str:
    verdict = persist_check(config, tail_periods=tail_periods, floor=floor,
                            threshold=threshold, horizon=horizon)
    return to_json(verdict.to_dict())


def cmd_check_f(config: RunConfig) -> tuple:
    report = check_assumptions(config.incidence, config.params.N)
    return to_json(report.to_dict()), report.passed


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="floqseirs", description=__doc__.split("\n\n")[0])
    ap.add_argument("command", choices=["simulate", "r0", "dfe", "sweep", "persist-check", "check-f"])
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--out", help="output file (default: stdout)")
    ap.add_argument("--horizon", type=float, help="override simulation horizon (years)")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for sweep")
    ap.add_argument("--tol", type=float, help="bisection tolerance on lambda")
    ap.add_argument("--beta0-min", type=float)
    ap.add_argument("--beta0-max", type=float)
    ap.add_argument("--steps", type=int)
    ap.add_argument("--tail-periods", type=int)
    ap.add_argument("--floor", type=float, help="persistence floor (individuals)")
    ap.add_argument("--threshold", type=float, help="extinction threshold on E+I")
    return ap


def _setup_logging():
    level = os.environ.get("FLOQSEIRS_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.horizon is not None:
            config = replace(config, horizon=args.horizon)
        config.check()
    except ConfigError as exc:
        log.error("%s", exc)
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        code = EXIT_OK
        if args.command == "simulate":
            text = cmd_simulate(config)
        elif args.command == "r0":
            text = cmd_r0(config, tol=args.tol)
        elif args.command == "dfe":
            text = cmd_dfe(config)
        elif args.command == "sweep":
            if None in (args.beta0_min, args.beta0_max, args.steps):
                print("sweep needs --beta0-min, --beta0-max and --steps", file=sys.stderr)
                return EXIT_CONFIG
            text, ok = cmd_sweep(config, args.beta0_min, args.beta0_max, args.steps,
                                 tol=args.tol, jobs=args.jobs)
            code = EXIT_OK if ok else EXIT_NUMERIC
        elif args.command == "persist-check":
            text = cmd_persist_check(config, tail_periods=args.tail_periods,
                                     floor=args.floor, threshold=args.threshold)
        else:
            text, ok = cmd_check_f(config)
            if not ok:
                failed = ", ".join(json.loads(text)["failures"])
                print(f"assumption violation: {failed}", file=sys.stderr)
            code = EXIT_OK if ok else EXIT_ASSUMPTION
    except (ValueError, DomainError) as exc:
        if isinstance(exc, AssumptionViolation):
            print(f"assumption violation: {exc}", file=sys.stderr)
            return EXIT_ASSUMPTION
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(text, args.out)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
