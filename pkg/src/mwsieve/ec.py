"""Elliptic curves in long Weierstrass form over prime fields.

Points are either ``INFINITY`` (``None``) or an affine tuple ``(x, y)`` of
residues in ``[0, ell)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .arith import factorize, legendre_symbol

Point = Optional[tuple[int, int]]
INFINITY: Point = None


class NotOnCurveError(ValueError):
    pass


def weierstrass_form(coeffs: Sequence[int], X: int, Y: int, Z: int) -> int:
    """Homogenized Weierstrass polynomial evaluated over the integers."""
    a1, a2, a3, a4, a6 = coeffs
    return (
        Y * Y * Z + a1 * X * Y * Z + a3 * Y * Z * Z
        - X**3 - a2 * X * X * Z - a4 * X * Z * Z - a6 * Z**3
    )


def discriminant(coeffs: Sequence[int]) -> int:
    a1, a2, a3, a4, a6 = coeffs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over F_ell."""

    ell: int
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self) -> None:
        if self.ell < 3 or self.ell % 2 == 0:
            raise ValueError(f"modulus must be an odd prime, got {self.ell}")
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, getattr(self, name) % self.ell)
        if discriminant(self.coeffs) % self.ell == 0:
            raise ValueError(f"singular reduction at ell={self.ell}")

    @classmethod
    def reduce(cls, coeffs: Sequence[int], ell: int) -> "WeierstrassCurve":
        return cls(ell, *coeffs)

    @property
    def coeffs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def contains(self, P: Point) -> bool:
        if P is INFINITY:
            return True
        x, y = P
        return weierstrass_form(self.coeffs, x, y, 1) % self.ell == 0

    def _check(self, P: Point) -> None:
        if not self.contains(P):
            raise NotOnCurveError(f"{P} is not on {self}")

    def negate(self, P: Point) -> Point:
        if P is INFINITY:
            return P
        x, y = P
        return (x, (-y - self.a1 * x - self.a3) % self.ell)

    def add(self, P: Point, Q: Point) -> Point:
        self._check(P)
        self._check(Q)
        return self._add(P, Q)

    def _add(self, P: Point, Q: Point) -> Point:
        if P is INFINITY:
            return Q
        if Q is INFINITY:
            return P
        p = self.ell
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2 + self.a1 * x2 + self.a3) % p == 0:
                return INFINITY
            num = 3 * x1 * x1 + 2 * self.a2 * x1 + self.a4 - self.a1 * y1
            den = 2 * y1 + self.a1 * x1 + self.a3
        else:
            num = y2 - y1
            den = x2 - x1
        lam = num * pow(den, -1, p) % p
        nu = (y1 - lam * x1) % p
        x3 = (lam * lam + self.a1 * lam - self.a2 - x1 - x2) % p
        y3 = (-(lam + self.a1) * x3 - nu - self.a3) % p
        return (x3, y3)

    def scalar_mul(self, k: int, P: Point) -> Point:
        self._check(P)
        if k < 0:
            k, P = -k, self.negate(P)
        result: Point = INFINITY
        addend = P
        while k:
            if k & 1:
                result = self._add(result, addend)
            addend = self._add(addend, addend)
            k >>= 1
        return result

    def count_points(self) -> int:
        """#E(F_ell) including the point at infinity."""
        p = self.ell
        a1, a2, a3, a4, a6 = self.coeffs
        total = 1
        for x in range(p):
            b = a1 * x + a3
            f = ((x + a2) * x + a4) * x + a6
            total += 1 + legendre_symbol(b * b + 4 * f, p)
        return total

    def point_order(self, P: Point) -> int:
        self._check(P)
        order = self.count_points()
        for q in factorize(order):
            while order % q == 0 and self._mul_unchecked(order // q, P) is INFINITY:
                order //= q
        return order

    def _mul_unchecked(self, k: int, P: Point) -> Point:
        result: Point = INFINITY
        while k:
            if k & 1:
                result = self._add(result, P)
            P = self._add(P, P)
            k >>= 1
        return result

    def points(self) -> list[Point]:
        """Every point of E(F_ell), infinity first, then by (x, y)."""
        p = self.ell
        roots: dict[int, list[int]] = {}
        for y in range(p):
            roots.setdefault(y * y % p, []).append(y)
        inv2 = pow(2, -1, p)
        out: list[Point] = [INFINITY]
        for x in range(p):
            b = self.a1 * x + self.a3
            f = ((x + self.a2) * x + self.a4) * x + self.a6
            ys = sorted({(-b + r) * inv2 % p for r in roots.get((b * b + 4 * f) % p, [])})
            out.extend((x, y) for y in ys)
        return out


def reduce_point(coords: Sequence[int], ell: int, curve: WeierstrassCurve) -> Point:
    """Reduce a projective integer triple (X : Y : Z) modulo ell onto ``curve``."""
    X, Y, Z = (c % ell for c in coords)
    if X == Y == Z == 0:
        raise ValueError(f"{tuple(coords)} vanishes mod {ell}; coordinates are not coprime")
    if Z == 0:
        P: Point = INFINITY
        if X != 0:
            raise NotOnCurveError(f"{tuple(coords)} reduces off the curve mod {ell}")
    else:
        zi = pow(Z, -1, ell)
        P = (X * zi % ell, Y * zi % ell)
    if not curve.contains(P):
        raise NotOnCurveError(f"{tuple(coords)} reduces off the curve mod {ell}")
    return P


def from_projective(coords: Sequence[int], ell: int) -> Point:
    """Affine form of a projective triple over F_ell, without a curve check."""
    X, Y, Z = (c % ell for c in coords)
    if Z == 0:
        return INFINITY
    zi = pow(Z, -1, ell)
    return (X * zi % ell, Y * zi % ell)
