#!/usr/bin/env python3
"""Recompute D_N for every level with a model file and compare with the expected sets."""

import argparse
import os
import time

from mwsieve.model import SUPPORTED_LEVELS, builtin_model, builtin_path
from mwsieve.quadpoint import compute_DN
from mwsieve.sieve import LocalDataCache, SieveConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dmax", type=int, default=100)
    ap.add_argument("--tmax", type=int, default=5)
    ap.add_argument("--workers", type=int, default=os.cpu_count())
    args = ap.parse_args()

    for level in SUPPORTED_LEVELS:
        if not builtin_path(level).exists():
            print(f"N={level:3d}: no model file, skipped")
            continue
        model = builtin_model(level)
        t0 = time.perf_counter()
        D = compute_DN(model, args.dmax, args.tmax, SieveConfig(), LocalDataCache(), args.workers)
        status = "" if model.expected_D is None else ("  ok" if sorted(model.expected_D) == D else "  MISMATCH")
        print(f"N={level:3d}: D = {D}  ({time.perf_counter() - t0:.1f}s){status}")


if __name__ == "__main__":
    main()
