"""Integer and modular arithmetic helpers: Legendre symbols, splitting of
odd primes in quadratic fields, squarefree parts, small factorizations."""

from __future__ import annotations

import enum
import math
from functools import lru_cache


class SplittingType(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for p in range(3, math.isqrt(n) + 1, 2):
        if n % p == 0:
            return False
    return True


@lru_cache(maxsize=None)
def primes_below(bound: int) -> tuple[int, ...]:
    """All primes p < bound, ascending."""
    if bound <= 2:
        return ()
    flags = bytearray([1]) * bound
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(bound - 1) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, bound, p)))
    return tuple(i for i, f in enumerate(flags) if f)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_smooth(n: int, bound: int) -> bool:
    """True when every prime factor of n is <= bound."""
    return all(p <= bound for p in factorize(n))


def _check_odd_prime(ell: int) -> None:
    if ell == 2 or not is_prime(ell):
        raise ValueError(f"expected an odd prime, got {ell}")


def legendre_symbol(a: int, ell: int) -> int:
    """Legendre symbol (a / ell) for an odd prime ell, via Euler's criterion."""
    _check_odd_prime(ell)
    a %= ell
    if a == 0:
        return 0
    return 1 if pow(a, (ell - 1) // 2, ell) == 1 else -1


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorize(n).values())


def squarefree_part(n: int) -> int:
    """The squarefree d with n/d a positive square; sign(d) == sign(n)."""
    if n == 0:
        raise ValueError("squarefree part of 0 is undefined")
    d = 1
    for p, e in factorize(n).items():
        if e % 2:
            d *= p
    return d if n > 0 else -d


def splitting_type(d: int, ell: int) -> SplittingType:
    """How the odd prime ell behaves in Q(sqrt(d)), for squarefree d != 0, 1."""
    if d in (0, 1) or not is_squarefree(d):
        raise ValueError(f"d must be squarefree and not 0 or 1, got {d}")
    s = legendre_symbol(d, ell)
    if s == 0:
        return SplittingType.RAMIFIED
    return SplittingType.SPLIT if s == 1 else SplittingType.INERT


def squarefree_range(bound: int) -> list[int]:
    """Squarefree d with |d| < bound, excluding 0 and 1, ascending."""
    return [d for d in range(-bound + 1, bound) if d not in (0, 1) and is_squarefree(d)]
