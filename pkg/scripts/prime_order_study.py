#!/usr/bin/env python3
"""How prime selection affects the sieve for X0(53).

Compares the smooth-order prime list against plain ascending primes below the
same bound: number of primes consumed before a contradiction and the largest
intermediate residue set.
"""

import argparse

from mwsieve.arith import primes_below, squarefree_range
from mwsieve.model import builtin_model
from mwsieve.sieve import CombinatorialExplosionError, LocalDataCache, SieveConfig, choose_primes, run_sieve


def summarize(v):
    peak = max((s.count for s in v.trace), default=0)
    return f"{v.label:13s} primes={len(v.trace):3d} peak={peak}"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dmax", type=int, default=30)
    ap.add_argument("--bound", type=int, default=400)
    args = ap.parse_args()

    model = builtin_model(53)
    cache = LocalDataCache()
    plain = [p for p in primes_below(args.bound) if p != 2 and 106 % p]
    for d in squarefree_range(args.dmax):
        smooth = run_sieve(model, d, SieveConfig(primes=choose_primes(model, d, args.bound, cache=cache)), cache)
        ramified = [p for p in plain if d % p == 0]
        try:
            naive = summarize(run_sieve(model, d, SieveConfig(primes=ramified + [p for p in plain if d % p], max_residue_count=10**6), cache))
        except CombinatorialExplosionError as exc:
            naive = f"explosion: {exc}"
        print(f"d={d:4d}  smooth: {summarize(smooth)}   ascending: {naive}")


if __name__ == "__main__":
    main()
