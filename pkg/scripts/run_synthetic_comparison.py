#!/usr/bin/env python3
"""Full model comparison on a synthetic seasonal series.

Generates a seasonal-sine-plus-noise series, optionally calibrates the
frequency of each trigonometric grey model on it, rolls all sixteen models,
and prints the comparison table (or CSV).
"""
import argparse
import sys

from greycast.config import load_config
from greycast.data import Dataset, generate_synthetic
from greycast.errors import GreycastError
from greycast.models import ModelKind
from greycast.report import compare, format_csv, format_table
from greycast.rolling import ALL_MODEL_NAMES, OmegaGrid, RollingConfig, calibrate_omega

TRIG_KINDS = (ModelKind.GM_S, ModelKind.GM_C, ModelKind.GM_SC, ModelKind.GM_ESC)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--n", type=int, default=500)
    parser.add_argument("--mean", type=float, default=20.0)
    parser.add_argument("--amp", type=float, default=5.0)
    parser.add_argument("--period", type=float, default=12.0)
    parser.add_argument("--sigma", type=float, default=0.5)
    parser.add_argument("--window", type=int, default=4)
    parser.add_argument("--calibrate", action="store_true",
                        help="grid-search omega per trig model before comparing")
    parser.add_argument("--grid", default="0.05:6.30:0.05", metavar="LO:HI:STEP")
    parser.add_argument("--format", choices=("table", "csv"), default="table")
    args = parser.parse_args()

    series = generate_synthetic("seasonal", seed=args.seed, mean=args.mean,
                                amp=args.amp, period=args.period,
                                sigma=args.sigma, n=args.n)
    dataset = Dataset(series=(series,), source=series.label)
    config = RollingConfig(window=args.window)
    specs = load_config()

    omegas = None
    if args.calibrate:
        lo, hi, step = (float(p) for p in args.grid.split(":"))
        grid = OmegaGrid(lo, hi, step)
        omegas = {}
        for kind in TRIG_KINDS:
            try:
                omegas[kind] = calibrate_omega(series, kind, grid)
                print(f"calibrated {kind.value}: omega = {omegas[kind]:g}",
                      file=sys.stderr)
            except GreycastError as exc:
                print(f"calibration failed for {kind.value}: {exc}", file=sys.stderr)

    report, _ = compare(dataset, models=ALL_MODEL_NAMES, config=config,
                        specs=specs, omegas=omegas)
    text = format_csv(report) if args.format == "csv" else format_table(report)
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
