"""Command line entry point: ``sl-hmars {sweep-dd,duty-cycle,sweep-dt,validate}``."""

import argparse
import csv
from dataclasses import replace
import sys

from . import harness
from .harness import ConfigError, ExperimentConfig
from .hmars import SHARED, TIME_SHARE, OutageConvention
from .validation import validate

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG = 0, 1, 2

_RUNNERS = {
    "sweep-dd": harness.sweep_dd,
    "duty-cycle": harness.duty_cycle_grid,
    "sweep-dt": harness.sweep_dt,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="sl-hmars", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*_RUNNERS, "validate"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON document with ExperimentConfig fields")
        p.add_argument("--out", help="CSV destination (default: stdout)")
        p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
        p.add_argument("--trials", type=int, help="Monte Carlo trials per point")
        p.add_argument("--convention", choices=["as-printed", "rederived"])
        p.add_argument("--oma-gamma", choices=[SHARED, TIME_SHARE],
                       help="OMA SINR threshold mapping used by the NOMA activation test")
        p.add_argument("--workers", type=int, default=1, help="worker processes")
        p.add_argument("--with-sem", action="store_true",
                       help="append standard-error columns to the CSV")
        p.add_argument("-q", "--quiet", action="store_true")
    return parser


def load_config(args) -> ExperimentConfig:
    config = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.convention is not None:
        overrides["convention"] = OutageConvention.parse(args.convention)
    if args.oma_gamma is not None:
        overrides["oma_gamma"] = args.oma_gamma
    try:
        return replace(config, **overrides)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _write_checks(report, out):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["check", "passed", "measured", "tolerance"])
    for c in report.checks:
        writer.writerow([c.name, int(c.passed), repr(c.measured), repr(c.tolerance)])


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        if config.oma_gamma not in (SHARED, TIME_SHARE):
            raise ConfigError(f"unknown oma_gamma {config.oma_gamma!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "validate":
        report = validate(config.master_seed)
        if not args.quiet:
            for c in report.checks:
                status = "PASS" if c.passed else "FAIL"
                print(f"{status} {c.name}: measured={c.measured:.3g} tol={c.tolerance:.3g}", file=sys.stderr)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                _write_checks(report, fh)
        else:
            _write_checks(report, sys.stdout)
        return EXIT_OK if report.passed else EXIT_VALIDATION

    def progress(rec):
        if not args.quiet:
            print(f"d0D/R={rec.d0D_over_R:g} d0T/R={rec.d0T_over_R:g} r_e={rec.r_e:g}: "
                  f"OMA={rec.se_bfs_oma:.3f} NOMA={rec.se_bfs_noma:.3f} "
                  f"H-MARS={rec.se_hmars:.3f} duty={rec.noma_duty_cycle:.3f}", file=sys.stderr)

    records = _RUNNERS[args.command](config, workers=args.workers, progress=progress)
    try:
        harness.emit_csv(records, args.out or sys.stdout, with_sem=args.with_sem)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
