"""Command line interface: ``soliton-entangle <subcommand> [options]``.

Exit codes: 0 success, 1 validation failure, 2 config error, 3 runtime/numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import kernels
from .classical import mid_intensity, write_field_csv
from .entanglement import mode_contributions, write_modes_csv
from .errors import ConfigError, IntegratorError, InvalidPartitionError, SolitonEntanglementError
from .experiments import (
    ScenarioConfig,
    analyze_snapshot,
    find_optimal_cut,
    load_config,
    parse_number,
    propagate_to,
    run_sweep,
    simulate,
    validate,
)
from .fluctuations import write_matrix_csv

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3

_CONFIG_FLAGS = [
    ("--order-n", "order_n", "soliton order N"),
    ("--nbar", "nbar", "photon-number scale"),
    ("--grid-m", "grid_m", "number of grid points"),
    ("--dx", "dx", "grid spacing in x0"),
    ("--dt", "dt", "split-step size in t_d"),
    ("--t-max", "t_max", "final propagation distance (accepts pi/2 etc.)"),
    ("--t-samples", "t_samples", "number of sampling intervals"),
    ("--domain", "domain_tag", "partition domain: x or omega"),
    ("--cut", "cut", "cut position"),
    ("--relevance-threshold", "relevance_threshold", "relevant-mode fraction"),
]


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH", help="key = value config file")
    p.add_argument("--out", metavar="PATH", help="output file")
    p.add_argument("--bits", action="store_true", help="display entropies in bits")
    p.add_argument("--debug-dump", action="store_true", help="dump u/v matrices as CSV next to --out")
    p.add_argument("--gnuplot", action="store_true", help="also write two-column .dat files per curve")
    p.add_argument("-v", "--verbose", action="store_true")
    for flag, dest, help_ in _CONFIG_FLAGS:
        p.add_argument(flag, dest=dest, default=None, help=help_)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="soliton-entangle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("classical", parents=[common], help="propagate the classical soliton only")
    sub.add_parser("sweep", parents=[common], help="entanglement versus propagation distance")

    modes = sub.add_parser("modes", parents=[common], help="thermal-mode functions at one distance")
    modes.add_argument("--t", dest="at_t", default=None, help="distance (default t_max)")
    modes.add_argument("--top-k", type=int, default=3)

    opt = sub.add_parser("optimal-cut", parents=[common], help="grid search for the best cut")
    opt.add_argument("--t", dest="at_t", default=None, help="distance (default t_max)")
    opt.add_argument("--range", nargs=2, default=["-1", "1"], metavar=("LO", "HI"))
    opt.add_argument("--samples", type=int, default=41)

    val = sub.add_parser("validate", parents=[common], help="run the invariant suite")
    val.add_argument("--corrupt-v", action="store_true", help=argparse.SUPPRESS)
    val.add_argument("--snapshots", type=int, default=None, help="fluctuation snapshots to check")
    return parser


def _config(args) -> ScenarioConfig:
    overrides = {dest: getattr(args, dest) for _, dest, _ in _CONFIG_FLAGS}
    if args.out:
        overrides["output_path"] = args.out
    return load_config(args.config, overrides)


def _unit(args) -> tuple[float, str]:
    return (1.0 / math.log(2.0), "bits") if args.bits else (1.0, "nats")


def _stem(cfg: ScenarioConfig, default: str) -> Path:
    return Path(cfg.output_path or default)


def _dump(fs, stem: Path):
    write_matrix_csv(fs.u, stem.with_name(f"{stem.stem}_u.csv"))
    write_matrix_csv(fs.v, stem.with_name(f"{stem.stem}_v.csv"))


def cmd_classical(args, cfg: ScenarioConfig) -> int:
    ts, mids = [], []
    last = None
    print("t,mid_intensity,photon_number")
    for snap in simulate(cfg, fluctuations=False):
        ts.append(snap.t)
        mids.append(mid_intensity(snap.field))
        last = snap.field
        print(f"{snap.t:.6f},{mids[-1]:.9f},{last.photon_number():.9e}")
    out = _stem(cfg, "field.csv")
    write_field_csv(last, out)
    if args.gnuplot:
        np.savetxt(out.with_name(f"{out.stem}_mid.dat"), np.column_stack([ts, mids]), fmt="%.17g", header="t mid")
    return EXIT_OK


def cmd_sweep(args, cfg: ScenarioConfig) -> int:
    if cfg.output_path is None:
        cfg.output_path = "sweep.csv"
    result = run_sweep(cfg)
    scale, unit = _unit(args)
    for row in result.rows:
        print(f"t={row.t:.6f}  E={row.e_total * scale:.6f} {unit}  relevant={row.relevant_count}")
    if args.gnuplot:
        result.write_gnuplot(cfg.output_path)
    if args.debug_dump:
        _dump(propagate_to(cfg, cfg.t_max).fluctuations, Path(cfg.output_path))
    if result.metadata.get("aborted"):
        print(f"aborted: {result.metadata.get('error')} (partial results written)", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_modes(args, cfg: ScenarioConfig) -> int:
    t = parse_number(args.at_t) if args.at_t is not None else cfg.t_max
    snap = propagate_to(cfg, t)
    _, report = analyze_snapshot(snap, cfg)
    scale, unit = _unit(args)
    print(f"t={snap.t:.6f}  E={report.total * scale:.6f} {unit}  relevant={report.relevant_count}")
    for idx, s, frac in mode_contributions(report, args.top_k):
        print(f"mode {idx + 1}: nu_bar={report.decomposition.nu_bar[idx]:.6e}  S={s * scale:.6f} {unit}  fraction={frac:.4f}")
    out = _stem(cfg, "modes.csv")
    write_modes_csv(report, out, args.top_k)
    if args.debug_dump:
        _dump(snap.fluctuations, out)
    return EXIT_OK


def cmd_optimal_cut(args, cfg: ScenarioConfig) -> int:
    t = parse_number(args.at_t) if args.at_t is not None else cfg.t_max
    lo, hi = (parse_number(x) for x in args.range)
    res = find_optimal_cut(cfg, t, (lo, hi), args.samples)
    scale, unit = _unit(args)
    print(f"best_cut={res.best_cut:.6f}  E_best={res.e_best * scale:.6f} {unit}  "
          f"E_symmetric={res.e_symmetric * scale:.6f} {unit}  gain={res.gain_vs_symmetric:.6f}")
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write("cut,E_nats\n")
            for c, e in zip(res.cuts, res.energies):
                fh.write(f"{float(c)!r},{float(e)!r}\n")
    return EXIT_OK


def cmd_validate(args, cfg: ScenarioConfig) -> int:
    report = validate(cfg, corrupt_v=args.corrupt_v, snapshots=args.snapshots)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.ok else EXIT_VALIDATION


COMMANDS = {
    "classical": cmd_classical,
    "sweep": cmd_sweep,
    "modes": cmd_modes,
    "optimal-cut": cmd_optimal_cut,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    logging.getLogger(__name__).info("kernel backend: %s", kernels.BACKEND)
    try:
        cfg = _config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](args, cfg)
    except (ConfigError, InvalidPartitionError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (IntegratorError, SolitonEntanglementError, FloatingPointError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
