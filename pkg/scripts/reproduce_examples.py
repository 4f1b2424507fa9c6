#!/usr/bin/env python3
"""Worked N = 53 computations: the d = -47 trace, the ell = 3 kill for d = 3,
the survivor structure for d = -11 and the fields of psi^*(tR) for |t| <= 5."""

import time

import numpy as np

from mwsieve.arith import squarefree_range
from mwsieve.cli import verdict_text
from mwsieve.model import builtin_model
from mwsieve.quadpoint import identify_field
from mwsieve.sieve import LocalDataCache, SieveConfig, run_sieve


def main():
    model = builtin_model(53)
    cache = LocalDataCache()

    print("\n".join(verdict_text(run_sieve(model, -47, SieveConfig(primes=[5, 7, 11]), cache))))
    print()
    print("\n".join(verdict_text(run_sieve(model, 3, cache=cache))))
    print()

    t0 = time.perf_counter()
    v = run_sieve(model, -11, cache=cache)
    s = v.survivors
    print(f"d=-11: {len(v.trace)} primes, modulus {s.modulus}, {len(s)} survivors ({time.perf_counter() - t0:.2f}s)")
    print(f"  smallest survivors: {s.tolist()[:5]}")
    print(f"  survivors in [2, 1905120]: {int(np.sum((s.residues >= 2) & (s.residues <= 1905120)))}")
    print()

    candidates = squarefree_range(100)
    for t in range(-5, 6):
        if t:
            print(f"psi^*({t:2d} R): {identify_field(model, t, candidates, cache=cache) or '-'}")


if __name__ == "__main__":
    main()
