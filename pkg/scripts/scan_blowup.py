#!/usr/bin/env python3
"""Sweep the continuity certificate up to the sharp threshold.

Emits one CSV row per weight s: the lattice sup of the normalized moment
ratio, the analytic bound, and the argmax index.  The sup blowing up as
s approaches the threshold (and the DIVERGENT rows past it) is the
numerical face of the sharp regularity statement; plot sup_ratio
against s to see it.

Example:
    python scripts/scan_blowup.py --mu 4.285714285714286 --p 0 \
        --points 16 --output blowup.csv
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from bergsob import cli, regularity
from bergsob.geometry import DomainParams


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--mu", type=float, required=True)
    parser.add_argument("--p", type=int, choices=(0, 1, 2), required=True)
    parser.add_argument("--points", type=int, default=12)
    parser.add_argument("--overshoot", type=float, default=0.04,
                        help="extend the grid this far past the threshold")
    parser.add_argument("--lattice", default="40,40")
    parser.add_argument("--output", default=None)
    args = parser.parse_args()

    thr = regularity.threshold(DomainParams(args.mu), args.p)
    stop = min(0.499, thr.r + args.overshoot)
    step = stop / args.points
    grid = f"0:{stop}:{step}"
    print(f"threshold r = {thr.r} (binding: {thr.binding}); scanning {grid}",
          file=sys.stderr)
    argv = ["scan", "--mu", str(args.mu), "--p", str(args.p),
            "--s-grid", grid, "--lattice", args.lattice]
    if args.output:
        argv += ["--output", args.output]
    return cli.main(argv)


if __name__ == "__main__":
    raise SystemExit(main())
