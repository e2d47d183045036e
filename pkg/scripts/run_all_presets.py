#!/usr/bin/env python3
"""Regenerate every canned working point's CSV artifacts.

Usage: python3 scripts/run_all_presets.py [--out DIR] [--only fig2,fig3]
"""

import argparse
import sys
import time

from dcesim.cli import run_preset
from dcesim.presets import PRESETS


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("--only", default=None,
                    help="comma-separated preset ids (default: all)")
    args = ap.parse_args()

    names = args.only.split(",") if args.only else sorted(PRESETS)
    unknown = set(names) - set(PRESETS)
    if unknown:
        ap.error(f"unknown presets: {sorted(unknown)}")

    for name in names:
        t0 = time.perf_counter()
        files = run_preset(name, args.out)
        dt = time.perf_counter() - t0
        print(f"{name}: {len(files)} files in {dt:.1f}s")
        for f in files:
            print(f"  {f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
