#!/usr/bin/env python3
"""Grid-search the angular frequency of each trigonometric grey model.

Reads a timestamp,value CSV (or generates a synthetic series), runs the
rolling RMSE grid search per model, and prints a config snippet that can be
passed back via --config.
"""
import argparse
import sys

from greycast.data import generate_synthetic, ingest_csv
from greycast.errors import GreycastError
from greycast.models import ModelKind
from greycast.rolling import OmegaGrid, RollingConfig, calibrate_omega

TRIG_KINDS = (ModelKind.GM_S, ModelKind.GM_C, ModelKind.GM_SC, ModelKind.GM_ESC)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--input", default=None, help="timestamp,value CSV")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed of the fallback synthetic seasonal series")
    parser.add_argument("--grid", default="0.05:100.0:0.05", metavar="LO:HI:STEP")
    parser.add_argument("--window", type=int, default=4)
    args = parser.parse_args()

    if args.input is not None:
        series = ingest_csv(args.input).series[0]
    else:
        series = generate_synthetic("seasonal", seed=args.seed, sigma=0.5, n=500)
    lo, hi, step = (float(p) for p in args.grid.split(":"))
    grid = OmegaGrid(lo, hi, step)
    config = RollingConfig(window=args.window)

    print("[omega]")
    for kind in TRIG_KINDS:
        try:
            omega = calibrate_omega(series, kind, grid, config)
            print(f"{kind.value} = {omega:g}")
        except GreycastError as exc:
            print(f"# {kind.value}: calibration failed ({exc})", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
