"""Batch command line: run a sweep and emit CSV or an aligned table.

Usage examples:

    pcmc --seed 42 --trials 100000 --output results.csv
    pcmc --seed 42 --orders 4,5 --deviations 0.1,0.5 --trials 1000 --format table

CSV columns are fixed: order, D, trials, the two mean consistency factors,
both methods' mean distances with diff and win percentage per metric, the
rank-reversal percentage, and the master seed. Reals are written in
shortest round-trip form. The table format groups columns per metric and
shows the winning method's mean distance (geometric means for Euclidean,
eigenvector for Tchebychev).

The eigenvalue consistency factor is reported without dividing by the mean
random-matrix index; divide by published random-index values yourself if
you need the strict consistency ratio.
"""

from __future__ import annotations

import argparse
import os
import secrets
import sys
import time

from . import __version__, kernel
from .errors import ParameterError
from .generator import DEFAULT_SCALE_MAX
from .montecarlo import (DEFAULT_DEVIATIONS, DEFAULT_ORDERS, DEFAULT_TRIALS,
                         CellAggregate, ExperimentConfig, run_experiment)

CSV_HEADER = ("order,D,trials,cf_triad,cf_lambda,dist_gm_euclid,dist_ev_euclid,"
              "diff_euclid,wins_gm_euclid_pct,dist_gm_cheb,dist_ev_cheb,diff_cheb,"
              "wins_ev_cheb_pct,rank_reversal_pct,seed")


def _int_list(text: str):
    return [int(part) for part in text.split(",") if part]


def _float_list(text: str):
    return [float(part) for part in text.split(",") if part]


def _default_workers() -> int:
    env = os.environ.get("PCMC_WORKERS", "").strip()
    if env:
        try:
            value = int(env)
            if value >= 1:
                return value
        except ValueError:
            pass
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcmc",
        description="Monte Carlo comparison of geometric-means and eigenvector "
                    "solutions of randomly perturbed pairwise comparison matrices.",
        epilog="The cf_lambda column omits the division by the random-matrix "
               "eigenvalue index; divide externally for the strict ratio.",
    )
    parser.add_argument("--orders", type=_int_list, default=list(DEFAULT_ORDERS),
                        metavar="N,N,...", help="matrix orders, each in [3, 7] "
                        "(default: %(default)s)")
    parser.add_argument("--deviations", type=_float_list, default=list(DEFAULT_DEVIATIONS),
                        metavar="D,D,...", help="perturbation deviations, each in [0, 1) "
                        "(default: %(default)s)")
    parser.add_argument("--trials", type=int, default=DEFAULT_TRIALS,
                        help="trials per cell (default: %(default)s)")
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed; generated and logged when omitted")
    parser.add_argument("--scale-max", type=float, default=DEFAULT_SCALE_MAX,
                        help="weight-scale bound M, weights drawn from [1/M, M] "
                        "(default: %(default)s)")
    parser.add_argument("--workers", type=int, default=None,
                        help="parallel workers (default: PCMC_WORKERS or CPU count)")
    parser.add_argument("--triad-agg", choices=("max", "mean"), default="max",
                        help="aggregation of per-triad scores (default: %(default)s)")
    parser.add_argument("--format", choices=("csv", "table"), default="csv",
                        dest="fmt", help="output format (default: %(default)s)")
    parser.add_argument("--output", default="-", metavar="PATH",
                        help="output destination, '-' or 'stdout' for stdout "
                        "(default: stdout)")
    parser.add_argument("--version", action="version", version=f"pcmc {__version__}")
    return parser


def parse_args(argv=None) -> tuple[ExperimentConfig, argparse.Namespace]:
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = args.seed if args.seed is not None else secrets.randbits(63)
    workers = args.workers if args.workers is not None else _default_workers()
    try:
        config = ExperimentConfig(
            orders=tuple(args.orders),
            deviations=tuple(args.deviations),
            trials_per_cell=args.trials,
            master_seed=seed,
            scale_max=args.scale_max,
            workers=workers,
            triad_agg=args.triad_agg,
        )
    except ParameterError as exc:
        parser.error(str(exc))
    return config, args


def _csv_row(agg: CellAggregate, seed: int) -> str:
    fields = [
        str(agg.order), repr(agg.deviation), str(agg.trials),
        repr(agg.mean_cf_triad), repr(agg.mean_cf_lambda),
        repr(agg.mean_dist_gm_euclid), repr(agg.mean_dist_ev_euclid),
        repr(agg.diff_euclid), repr(agg.wins_gm_euclid_pct),
        repr(agg.mean_dist_gm_cheb), repr(agg.mean_dist_ev_cheb),
        repr(agg.diff_cheb), repr(agg.wins_ev_cheb_pct),
        repr(agg.rank_reversal_pct), str(seed),
    ]
    return ",".join(fields)


def render_csv(results, seed: int) -> str:
    lines = [CSV_HEADER]
    lines.extend(_csv_row(agg, seed) for agg in results)
    return "\n".join(lines) + "\n"


def render_table(results, config: ExperimentConfig) -> str:
    head1 = (f"{'':9}  {'cf':>14}  {'Euclidean metric':>26}  "
             f"{'Tchebychev metric':>26}")
    head2 = (f"{'Ord':>4} {'D':>4}  {'triad':>6} {'lambda':>6}  "
             f"{'dist':>8} {'diff':>9} {'wins GM':>7}  "
             f"{'dist':>8} {'diff':>9} {'wins EV':>7}  {'rankrev':>8}")
    lines = [head1, head2, "-" * len(head2)]
    for agg in results:
        lines.append(
            f"{agg.order:>4} {agg.deviation:>4.1f}  "
            f"{agg.mean_cf_triad:>6.3f} {agg.mean_cf_lambda:>6.3f}  "
            f"{agg.mean_dist_gm_euclid:>8.4f} {agg.diff_euclid:>9.5f} "
            f"{agg.wins_gm_euclid_pct:>6.1f}%  "
            f"{agg.mean_dist_ev_cheb:>8.4f} {agg.diff_cheb:>9.5f} "
            f"{agg.wins_ev_cheb_pct:>6.1f}%  "
            f"{agg.rank_reversal_pct:>7.2f}%"
        )
    lines.append("-" * len(head2))
    lines.append(f"trials/cell={config.trials_per_cell}  seed={config.master_seed}  "
                 f"scale_max={config.scale_max}  triad_agg={config.triad_agg}  "
                 f"pcmc {__version__}")
    return "\n".join(lines) + "\n"


def emit(results, fmt: str, destination: str, config: ExperimentConfig) -> None:
    """Write rendered results to a path, or stdout for '-' / 'stdout'."""
    text = (render_csv(results, config.master_seed) if fmt == "csv"
            else render_table(results, config))
    if destination in ("-", "stdout"):
        sys.stdout.write(text)
    else:
        with open(destination, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    config, args = parse_args(argv)
    t0 = time.monotonic()
    print(f"pcmc {__version__}: {len(config.cells)} cells x {config.trials_per_cell} trials, "
          f"seed={config.master_seed} scale_max={config.scale_max} "
          f"triad_agg={config.triad_agg} workers={config.workers} "
          f"kernel={kernel.BACKEND}", file=sys.stderr)

    def progress(done, total, agg):
        print(f"[{done}/{total}] order={agg.order} D={agg.deviation:g} done "
              f"({time.monotonic() - t0:.1f}s)", file=sys.stderr)

    results = run_experiment(config, progress=progress)
    try:
        emit(results, args.fmt, args.output, config)
    except OSError as exc:
        print(f"pcmc: cannot write {args.output!r}: {exc}", file=sys.stderr)
        return 1

    failures = sum(agg.failures for agg in results)
    elapsed = time.monotonic() - t0
    print(f"pcmc: finished in {elapsed:.1f}s, solver failures: {failures}", file=sys.stderr)
    if failures:
        for a in results:
            if a.failures:
                shown = ", ".join(str(t) for t in a.failure_trials[:10])
                more = "..." if a.failures > len(a.failure_trials[:10]) else ""
                print(f"pcmc: cell order={a.order} D={a.deviation:g}: "
                      f"{a.failures} failed trials (seed={config.master_seed}, "
                      f"trials {shown}{more})", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
