"""The Mordell-Weil sieve.

For a prime ell of good reduction, every point m*R of X0+(N)(Q) reduces to
m*R~ whose index m mod G_ell (G_ell the order of R~) is recorded together with
the shape of the fibre of psi_ell over it.  A quadratic point over Q(sqrt d)
forces the fibre shape to be compatible with how ell splits in Q(sqrt d).
Intersecting the surviving indices over many primes either empties the set
(no quadratic point) or leaves a residue description of the candidates.
"""

from __future__ import annotations

import enum
import logging
import math
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .arith import SplittingType, factorize, is_smooth, legendre_symbol, primes_below, splitting_type, squarefree_part
from .ec import INFINITY, NotOnCurveError, Point, reduce_point
from .model import CurveModelData, enumerate_C_points, inverse_image, psi_image
from .series import SingularPointError

log = logging.getLogger(__name__)


class FiberCase(enum.Enum):
    PAIR_OVER_BASE = "pair"        # two distinct F_ell-points
    CONJUGATE_PAIR = "conjugate"   # two conjugate F_ell^2-points
    SINGLE = "single"              # one point fixed by w_N
    UNKNOWN = "unknown"


class Coset(enum.Enum):
    BASE = "base"
    TORSION = "torsion"


class UnusablePrimeError(ArithmeticError):
    pass


class CombinatorialExplosionError(RuntimeError):
    pass


@dataclass
class SieveConfig:
    prime_bound: int = 1000
    smoothness: int = 7
    max_residue_count: int = 10**7
    max_modulus: int = 10**12
    prime_budget: int = 40
    cache_dir: Optional[str] = None
    output_format: str = "text"
    primes: Optional[list[int]] = None  # explicit prime list, bypasses choose_primes
    workers: Optional[int] = None

    def __post_init__(self) -> None:
        for name in ("prime_bound", "max_residue_count", "max_modulus", "prime_budget"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.smoothness < 2:
            raise ValueError("smoothness must be at least 2")
        if self.output_format not in ("text", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")


def classify_fiber(q: int, ell: int) -> FiberCase:
    """Shape of the solutions of x1^2 = q over F_ell."""
    s = legendre_symbol(q, ell)
    if s == 0:
        return FiberCase.SINGLE
    return FiberCase.PAIR_OVER_BASE if s == 1 else FiberCase.CONJUGATE_PAIR


@dataclass(frozen=True)
class LocalData:
    ell: int
    G: int
    cases: tuple[FiberCase, ...]
    cases_torsion: Optional[tuple[FiberCase, ...]] = None

    def cases_for(self, coset: Coset) -> tuple[FiberCase, ...]:
        if coset is Coset.TORSION:
            if self.cases_torsion is None:
                raise ValueError("local data has no torsion coset")
            return self.cases_torsion
        return self.cases

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "G": self.G,
            "cases": [c.value for c in self.cases],
            "cases_torsion": [c.value for c in self.cases_torsion] if self.cases_torsion is not None else None,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LocalData":
        tors = data.get("cases_torsion")
        return cls(
            ell=int(data["ell"]),
            G=int(data["G"]),
            cases=tuple(FiberCase(c) for c in data["cases"]),
            cases_torsion=tuple(FiberCase(c) for c in tors) if tors is not None else None,
        )


def generator_order(model: CurveModelData, ell: int) -> int:
    E = model.curve_mod(ell)
    return E.point_order(reduce_point(model.generator, ell, E))


def _merge(old: FiberCase | None, new: FiberCase) -> FiberCase:
    if old is None or old is new:
        return new
    return FiberCase.UNKNOWN


def compute_local_data(model: CurveModelData, ell: int) -> LocalData:
    """Fibre shapes of psi_ell over m*R~ (and m*R~ + Q~) for 0 <= m < G_ell."""
    if (2 * model.N) % ell == 0:
        raise UnusablePrimeError(f"ell={ell} divides 2N")
    try:
        E = model.curve_mod(ell)
    except ValueError as exc:
        raise UnusablePrimeError(str(exc)) from exc
    R = reduce_point(model.generator, ell, E)
    G = E.point_order(R)
    index: dict[Point, int] = {}
    P: Point = INFINITY
    for k in range(G):
        index[P] = k
        P = E._add(P, R)

    tindex: dict[Point, int] = {}
    if model.torsion is not None:
        Q = reduce_point(model.torsion, ell, E)
        for pt, k in index.items():
            tindex[E._add(pt, Q)] = k

    cases: list[FiberCase | None] = [None] * G
    tcases: list[FiberCase | None] = [None] * G

    def record(pt, img: Point) -> None:
        case = classify_fiber(model.q_poly.evaluate(pt, ell), ell)
        if img in index:
            k = index[img]
            cases[k] = _merge(cases[k], case)
        if img in tindex:
            k = tindex[img]
            tcases[k] = _merge(tcases[k], case)

    try:
        if model.inverse_map is not None:
            targets = list(index) + [t for t in tindex if t not in index]
            for img in targets:
                try:
                    pt = inverse_image(model, img, ell)
                except (SingularPointError, ValueError):
                    continue
                record(pt, img)
        else:
            for pt in enumerate_C_points(model, ell):
                img = psi_image(model, pt, ell)
                if not E.contains(img):
                    raise NotOnCurveError(f"psi image of {pt} off-curve mod {ell}")
                record(pt, img)
    except (SingularPointError, NotOnCurveError) as exc:
        raise UnusablePrimeError(f"ell={ell}: {exc}") from exc

    fill = lambda arr: tuple(FiberCase.UNKNOWN if c is None else c for c in arr)  # noqa: E731
    return LocalData(ell, G, fill(cases), fill(tcases) if model.torsion is not None else None)


_KEEP = {
    SplittingType.SPLIT: {FiberCase.PAIR_OVER_BASE, FiberCase.SINGLE, FiberCase.UNKNOWN},
    SplittingType.INERT: {FiberCase.CONJUGATE_PAIR, FiberCase.SINGLE, FiberCase.UNKNOWN},
    SplittingType.RAMIFIED: {FiberCase.SINGLE, FiberCase.UNKNOWN},
}


def allowed_residues(local: LocalData, s: SplittingType, coset: Coset = Coset.BASE) -> list[int]:
    keep = _KEEP[s]
    return [k for k, c in enumerate(local.cases_for(coset)) if c in keep]


@dataclass(frozen=True)
class ResidueSet:
    """Sorted residues modulo ``modulus``."""

    modulus: int
    residues: np.ndarray

    def __post_init__(self) -> None:
        r = np.asarray(self.residues, dtype=np.int64)
        object.__setattr__(self, "residues", r)
        if r.size and (r[0] < 0 or r[-1] >= self.modulus or np.any(np.diff(r) <= 0)):
            raise ValueError("residues must be strictly increasing in [0, modulus)")

    @classmethod
    def full(cls) -> "ResidueSet":
        return cls(1, np.zeros(1, dtype=np.int64))

    @classmethod
    def of(cls, modulus: int, residues: Iterable[int]) -> "ResidueSet":
        return cls(modulus, np.array(sorted({int(r) % modulus for r in residues}), dtype=np.int64))

    def __len__(self) -> int:
        return int(self.residues.size)

    def __contains__(self, m: int) -> bool:
        r = int(m) % self.modulus
        i = int(np.searchsorted(self.residues, r))
        return i < self.residues.size and int(self.residues[i]) == r

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ResidueSet)
            and self.modulus == other.modulus
            and np.array_equal(self.residues, other.residues)
        )

    def __hash__(self) -> int:
        return hash((self.modulus, self.residues.tobytes()))

    def is_empty(self) -> bool:
        return self.residues.size == 0

    def tolist(self) -> list[int]:
        return [int(r) for r in self.residues]


def intersect(
    acc: ResidueSet,
    constraint: Sequence[int],
    G: int,
    max_residue_count: int = 10**7,
    max_modulus: int = 10**12,
) -> ResidueSet:
    """Residues mod lcm(M, G) reducing into ``acc`` mod M and into ``constraint`` mod G."""
    M = acc.modulus
    L = math.lcm(M, G)
    if L > max_modulus:
        raise CombinatorialExplosionError(f"modulus {L} exceeds max_modulus {max_modulus}")
    cons = np.array(sorted({int(c) % G for c in constraint}), dtype=np.int64)
    lift_acc = len(acc) * (L // M)
    lift_cons = cons.size * (L // G)
    if min(lift_acc, lift_cons) > max_residue_count:
        raise CombinatorialExplosionError(
            f"{min(lift_acc, lift_cons)} candidate residues mod {L} exceed max_residue_count {max_residue_count}"
        )
    if lift_acc <= lift_cons:
        lifted = (acc.residues[None, :] + M * np.arange(L // M, dtype=np.int64)[:, None]).ravel()
        mask = np.zeros(G, dtype=bool)
        mask[cons] = True
        out = lifted[mask[lifted % G]]
    else:
        lifted = (cons[None, :] + G * np.arange(L // G, dtype=np.int64)[:, None]).ravel()
        red = lifted % M
        pos = np.searchsorted(acc.residues, red)
        pos[pos >= acc.residues.size] = 0
        hit = acc.residues[pos] == red if acc.residues.size else np.zeros(red.shape, dtype=bool)
        out = lifted[hit]
    out.sort()
    if out.size > max_residue_count:
        raise CombinatorialExplosionError(f"{out.size} residues mod {L} exceed max_residue_count {max_residue_count}")
    return ResidueSet(L, out)


class LocalDataCache:
    """Per-(model, ell) LocalData, memoized in memory and optionally on disk.

    Reads are lock-free; insertions are serialized.
    """

    def __init__(self, store=None):
        self._mem: dict[tuple[str, int], LocalData | UnusablePrimeError] = {}
        self._orders: dict[tuple[str, int], int | None] = {}
        self._lock = threading.Lock()
        self.store = store

    def get(self, model: CurveModelData, ell: int) -> LocalData:
        key = (model.content_hash, ell)
        hit = self._mem.get(key)
        if hit is None:
            hit = self.store.load(model, ell) if self.store is not None else None
            if hit is None:
                try:
                    hit = compute_local_data(model, ell)
                except UnusablePrimeError as exc:
                    hit = exc
                else:
                    if self.store is not None:
                        self.store.save(model, hit)
            with self._lock:
                self._mem.setdefault(key, hit)
        if isinstance(hit, UnusablePrimeError):
            raise hit
        return hit

    def order(self, model: CurveModelData, ell: int) -> int | None:
        """G_ell, or None when the Weierstrass model is singular mod ell."""
        key = (model.content_hash, ell)
        if key not in self._orders:
            try:
                g = generator_order(model, ell)
            except (ValueError, NotOnCurveError):
                g = None
            with self._lock:
                self._orders[key] = g
        return self._orders[key]


_default_cache = LocalDataCache()


def choose_primes(
    model: CurveModelData,
    d: int,
    bound: int = 1000,
    smoothness: int = 7,
    cache: LocalDataCache | None = None,
) -> list[int]:
    """Ramified odd primes first, then primes below ``bound`` with smooth G_ell."""
    cache = cache or _default_cache
    splitting_type(d, 3)  # validates d
    bad = 2 * model.N
    ramified = sorted(p for p in _odd_prime_divisors(d) if bad % p)
    tail = []
    for ell in primes_below(bound):
        if ell == 2 or bad % ell == 0 or d % ell == 0:
            continue
        G = cache.order(model, ell)
        if G is not None and is_smooth(G, smoothness):
            tail.append(ell)
    return ramified + tail


def _odd_prime_divisors(d: int) -> list[int]:
    return [p for p in factorize(d) if p != 2]


@dataclass(frozen=True)
class TraceStep:
    ell: int
    splitting: SplittingType
    G: int
    coset: Coset
    allowed: tuple[int, ...]
    modulus: int
    count: int
    combined: Optional[tuple[int, ...]]  # kept only for small sets

    def describe(self, limit: int = 24) -> str:
        def fmt(rs: Sequence[int], total: int) -> str:
            shown = ",".join(str(r) for r in rs[:limit])
            return shown + (f",... ({total} total)" if total > limit else "")

        tag = "" if self.coset is Coset.BASE else " [+Q]"
        if self.allowed:
            line = f"ℓ={self.ell} {self.splitting.value}{tag}: m ≡ {fmt(self.allowed, len(self.allowed))} (mod {self.G})"
        else:
            line = f"ℓ={self.ell} {self.splitting.value}{tag}: no m (mod {self.G})"
        if self.count == 0:
            return line + "; combined: none"
        if self.combined is not None:
            return line + f"; combined: m ≡ {fmt(self.combined, self.count)} (mod {self.modulus})"
        return line + f"; combined: {self.count} residues (mod {self.modulus})"


@dataclass(frozen=True)
class Verdict:
    N: int
    d: int
    primes: tuple[int, ...]
    trace: tuple[TraceStep, ...]
    survivors: Optional[ResidueSet]
    torsion_survivors: Optional[ResidueSet] = None
    skipped: tuple[int, ...] = ()

    @property
    def contradiction(self) -> bool:
        sets = [s for s in (self.survivors, self.torsion_survivors) if s is not None]
        return all(s.is_empty() for s in sets)

    @property
    def label(self) -> str:
        return "CONTRADICTION" if self.contradiction else "SURVIVORS"


_COMBINED_KEEP = 64


def _accumulate(
    model: CurveModelData,
    d: int,
    primes: Sequence[int],
    coset: Coset,
    config: SieveConfig,
    cache: LocalDataCache,
    trace: list[TraceStep],
    skipped: list[int],
) -> ResidueSet:
    acc = ResidueSet.full()
    for ell in primes:
        try:
            local = cache.get(model, ell)
        except UnusablePrimeError as exc:
            log.info("skipping %s", exc)
            if ell not in skipped:
                skipped.append(ell)
            continue
        s = splitting_type(d, ell)
        allowed = allowed_residues(local, s, coset)
        acc = intersect(acc, allowed, local.G, config.max_residue_count, config.max_modulus)
        trace.append(TraceStep(
            ell, s, local.G, coset, tuple(allowed), acc.modulus, len(acc),
            tuple(acc.tolist()) if len(acc) <= _COMBINED_KEEP else None,
        ))
        if acc.is_empty():
            break
    return acc


def _prepare(model: CurveModelData, d: int, config: SieveConfig, cache: LocalDataCache) -> tuple[int, list[int]]:
    d0 = squarefree_part(d)
    if d0 == 1:
        raise ValueError(f"d = {d} is a square; Q(sqrt d) = Q")
    if config.primes is not None:
        bad = [p for p in config.primes if p == 2 or (2 * model.N) % p == 0]
        if bad:
            raise ValueError(f"primes {bad} divide 2N")
        return d0, list(config.primes)
    return d0, choose_primes(model, d0, config.prime_bound, config.smoothness, cache)


def run_sieve(
    model: CurveModelData,
    d: int,
    config: SieveConfig | None = None,
    cache: LocalDataCache | None = None,
) -> Verdict:
    """Sieve for points of X0(N)(Q(sqrt d)) not defined over Q."""
    config = config or SieveConfig()
    cache = cache or _default_cache
    if model.torsion is not None:
        return run_sieve_with_torsion(model, d, config, cache)
    d0, primes = _prepare(model, d, config, cache)
    trace: list[TraceStep] = []
    skipped: list[int] = []
    acc = _accumulate(model, d0, primes, Coset.BASE, config, cache, trace, skipped)
    return Verdict(model.N, d0, tuple(primes), tuple(trace), acc, None, tuple(skipped))


def run_sieve_with_torsion(
    model: CurveModelData,
    d: int,
    config: SieveConfig | None = None,
    cache: LocalDataCache | None = None,
) -> Verdict:
    """Sieve separately over psi(P) = m*R and psi(P) = m*R + Q."""
    if model.torsion is None:
        raise ValueError("model has no torsion point")
    config = config or SieveConfig()
    cache = cache or _default_cache
    d0, primes = _prepare(model, d, config, cache)
    trace: list[TraceStep] = []
    skipped: list[int] = []
    base = _accumulate(model, d0, primes, Coset.BASE, config, cache, trace, skipped)
    tors = _accumulate(model, d0, primes, Coset.TORSION, config, cache, trace, skipped)
    return Verdict(model.N, d0, tuple(primes), tuple(trace), base, tors, tuple(skipped))


def sieve_many(
    model: CurveModelData,
    ds: Sequence[int],
    config: SieveConfig | None = None,
    cache: LocalDataCache | None = None,
    workers: int | None = None,
    progress: Callable[[Verdict], None] | None = None,
) -> list[Verdict]:
    """run_sieve for each d, optionally on a thread pool; results in input order."""
    config = config or SieveConfig()
    cache = cache or _default_cache
    if workers is None or workers <= 1:
        out = []
        for d in ds:
            v = run_sieve(model, d, config, cache)
            if progress:
                progress(v)
            out.append(v)
        return out
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda d: run_sieve(model, d, config, cache), ds))
