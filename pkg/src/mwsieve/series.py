"""Evaluating rational maps on smooth curves over F_ell at points where every
component of the map vanishes.

A projective curve is cut out by homogeneous equations.  At a smooth point we
parametrize the curve by truncated power series in a local parameter t
(Newton iteration with the constant Jacobian), push the series through the map
and divide out the common power of t.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .poly import SparsePolynomial


class SingularPointError(ArithmeticError):
    pass


class PowerSeries:
    """Power series over F_p truncated at t^prec."""

    __slots__ = ("c", "p")

    def __init__(self, coeffs: Sequence[int], p: int):
        self.c = [x % p for x in coeffs]
        self.p = p

    @classmethod
    def constant(cls, a: int, p: int, prec: int) -> "PowerSeries":
        return cls([a] + [0] * (prec - 1), p)

    def _lift(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return other
        return PowerSeries.constant(int(other), self.p, len(self.c))

    def __add__(self, other) -> "PowerSeries":
        o = self._lift(other)
        return PowerSeries([a + b for a, b in zip(self.c, o.c)], self.p)

    __radd__ = __add__

    def __sub__(self, other) -> "PowerSeries":
        o = self._lift(other)
        return PowerSeries([a - b for a, b in zip(self.c, o.c)], self.p)

    def __mul__(self, other) -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            k = int(other)
            return PowerSeries([a * k for a in self.c], self.p)
        n = len(self.c)
        out = [0] * n
        for i, a in enumerate(self.c):
            if a:
                for j in range(n - i):
                    out[i + j] += a * other.c[j]
        return PowerSeries(out, self.p)

    __rmul__ = __mul__

    def valuation(self) -> int | None:
        for i, a in enumerate(self.c):
            if a:
                return i
        return None


def _inverse_mod(matrix: list[list[int]], p: int) -> list[list[int]] | None:
    n = len(matrix)
    aug = [[x % p for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = pow(aug[col][col], -1, p)
        aug[col] = [x * inv % p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def local_parametrization(
    equations: Sequence[SparsePolynomial], point: Sequence[int], p: int, prec: int
) -> list[PowerSeries]:
    """Power series for every homogeneous coordinate of the curve branch through ``point``.

    ``point`` is an F_p-point of the curve cut out by ``equations`` with first
    nonzero coordinate 1; that coordinate stays the constant 1.
    """
    n = len(point)
    chart = next(i for i, x in enumerate(point) if x % p)
    free = [i for i in range(n) if i != chart]
    need = len(free) - 1
    jac = [[eq.derivative(i).evaluate(point, p) for i in free] for eq in equations]

    chosen = None
    for rows in combinations(range(len(equations)), need):
        for cols in combinations(range(len(free)), need):
            inv = _inverse_mod([[jac[r][c] for c in cols] for r in rows], p)
            if inv is not None:
                chosen = rows, cols, inv
                break
        if chosen:
            break
    if chosen is None:
        raise SingularPointError(f"{tuple(point)} is not a smooth point mod {p}")
    rows, cols, inv = chosen
    param = next(c for c in range(len(free)) if c not in cols)

    coords = [PowerSeries.constant(x, p, prec) for x in point]
    coords[free[param]] = PowerSeries([point[free[param]], 1] + [0] * (prec - 2), p)
    one = PowerSeries.constant(1, p, prec)
    for _ in range(prec):
        residual = [equations[r].evaluate_generic(coords, one) for r in rows]
        if all(s.valuation() is None for s in residual):
            break
        for a, c in enumerate(cols):
            delta = PowerSeries([0] * prec, p)
            for b in range(need):
                delta = delta + residual[b] * inv[a][b]
            coords[free[c]] = coords[free[c]] - delta
    return coords


def evaluate_map_at(
    equations: Sequence[SparsePolynomial],
    components: Sequence[SparsePolynomial],
    point: Sequence[int],
    p: int,
    prec: int = 6,
    max_prec: int = 48,
) -> tuple[int, ...]:
    """Image of a smooth curve point under the map given by ``components``.

    Works when all components vanish at ``point``; raises SingularPointError
    when the point is singular or the map cannot be resolved within max_prec.
    """
    direct = tuple(c.evaluate(point, p) for c in components)
    if any(direct):
        return direct
    while prec <= max_prec:
        coords = local_parametrization(equations, point, p, prec)
        one = PowerSeries.constant(1, p, prec)
        images = [c.evaluate_generic(coords, one) for c in components]
        vals = [v for v in (s.valuation() for s in images) if v is not None]
        if vals:
            v = min(vals)
            return tuple(s.c[v] for s in images)
        prec *= 2
    raise SingularPointError(f"map is undefined to precision {max_prec} at {tuple(point)} mod {p}")
