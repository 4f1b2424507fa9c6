"""Fields of definition of the fibres psi^*(t*R), read off from square classes mod ell.

A quadratic point has the shape (b1*sqrt(d) : a2 : ... : ag), so at a prime
ell not dividing b1 the quadric value q(a2, ..., ag) = b1^2 d has the square
class of d mod ell.  Comparing these classes with Legendre symbols over many
primes singles out d.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .arith import legendre_symbol, primes_below, squarefree_range
from .model import CurveModelData
from .sieve import (
    Coset,
    FiberCase,
    LocalDataCache,
    SieveConfig,
    UnusablePrimeError,
    Verdict,
    _default_cache,
    sieve_many,
)


class SquareClass(enum.Enum):
    SQUARE = "square"
    NONSQUARE = "nonsquare"
    ZERO = "zero"
    UNKNOWN = "unknown"

    @property
    def symbol(self) -> int | None:
        return {SquareClass.SQUARE: 1, SquareClass.NONSQUARE: -1, SquareClass.ZERO: 0}.get(self)


_FROM_CASE = {
    FiberCase.PAIR_OVER_BASE: SquareClass.SQUARE,
    FiberCase.CONJUGATE_PAIR: SquareClass.NONSQUARE,
    FiberCase.SINGLE: SquareClass.ZERO,
    FiberCase.UNKNOWN: SquareClass.UNKNOWN,
}


class InsufficientDataError(RuntimeError):
    pass


class InconsistencyError(RuntimeError):
    pass


@dataclass
class FieldFingerprint:
    t: int
    coset: Coset = Coset.BASE
    observations: list[tuple[int, SquareClass]] = field(default_factory=list)

    def informative(self) -> list[tuple[int, int]]:
        """(ell, +-1) pairs, dropping Zero and Unknown observations."""
        return [(ell, c.symbol) for ell, c in self.observations if c.symbol]


def fiber_square_class(
    model: CurveModelData,
    ell: int,
    t: int,
    coset: Coset = Coset.BASE,
    cache: LocalDataCache | None = None,
) -> SquareClass:
    local = (cache or _default_cache).get(model, ell)
    return _FROM_CASE[local.cases_for(coset)[t % local.G]]


def fingerprint(
    model: CurveModelData,
    t: int,
    prime_budget: int = 40,
    coset: Coset = Coset.BASE,
    cache: LocalDataCache | None = None,
    prime_bound: int = 5000,
) -> FieldFingerprint:
    """Square classes over the first ``prime_budget`` usable primes not dividing 2N."""
    fp = FieldFingerprint(t, coset)
    used = 0
    for ell in primes_below(prime_bound):
        if used >= prime_budget:
            break
        if ell == 2 or (2 * model.N) % ell == 0:
            continue
        try:
            cls = fiber_square_class(model, ell, t, coset, cache)
        except UnusablePrimeError:
            continue
        fp.observations.append((ell, cls))
        used += 1
    return fp


def identify_field(
    model: CurveModelData,
    t: int,
    candidates: Sequence[int],
    prime_budget: int = 40,
    mismatch_tolerance: int = 2,
    coset: Coset = Coset.BASE,
    cache: LocalDataCache | None = None,
) -> list[int]:
    """Candidates d whose Legendre symbols match the fibre over t*R at all but a few primes."""
    if not candidates:
        return []
    obs = fingerprint(model, t, prime_budget, coset, cache).informative()
    if len(obs) < 10:
        raise InsufficientDataError(f"only {len(obs)} informative primes for t={t}")
    out = []
    for d in candidates:
        misses = sum(1 for ell, s in obs if legendre_symbol(d, ell) != s)
        if misses <= mismatch_tolerance:
            out.append(d)
    return sorted(out)


@dataclass
class DNResult:
    N: int
    D: list[int]
    by_t: dict[tuple[str, int], list[int]]
    verdicts: list[Verdict]


def _targets(model: CurveModelData, t_bound: int) -> list[tuple[Coset, int]]:
    ts = [t for t in range(-t_bound, t_bound + 1) if t != 0]
    out = [(Coset.BASE, t) for t in ts]
    if model.torsion is not None:
        # Q itself is not the identity, so t = 0 is a genuine target on this coset
        out += [(Coset.TORSION, t) for t in range(-t_bound, t_bound + 1)]
    return out


def compute_DN_detailed(
    model: CurveModelData,
    d_bound: int = 100,
    t_bound: int = 5,
    config: SieveConfig | None = None,
    cache: LocalDataCache | None = None,
    workers: int | None = None,
) -> DNResult:
    config = config or SieveConfig()
    cache = cache or _default_cache
    candidates = squarefree_range(d_bound)
    by_t: dict[tuple[str, int], list[int]] = {}
    found: set[int] = set()
    for coset, t in _targets(model, t_bound):
        ids = identify_field(model, t, candidates, config.prime_budget, coset=coset, cache=cache)
        by_t[(coset.value, t)] = ids
        found.update(ids)

    verdicts = sieve_many(model, candidates, config, cache, workers)
    problems = []
    for d, v in zip(candidates, verdicts):
        if d in found and v.contradiction:
            problems.append(f"d={d}: identified as a field of definition but the sieve reached a contradiction")
        if d not in found and not v.contradiction:
            problems.append(f"d={d}: sieve left survivors but no fibre with |t| <= {t_bound} is defined over Q(sqrt {d})")
    if problems:
        raise InconsistencyError("; ".join(problems))
    return DNResult(model.N, sorted(found), by_t, verdicts)


def compute_DN(
    model: CurveModelData,
    d_bound: int = 100,
    t_bound: int = 5,
    config: SieveConfig | None = None,
    cache: LocalDataCache | None = None,
    workers: int | None = None,
) -> list[int]:
    """Squarefree |d| < d_bound with X0(N)(Q(sqrt d)) != X0(N)(Q), cross-checked by the sieve."""
    return compute_DN_detailed(model, d_bound, t_bound, config, cache, workers).D
