"""Sparse multivariate integer polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

Term = tuple[int, tuple[int, ...]]

_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class SparsePolynomial:
    """Integer polynomial in ``nvars`` variables stored as (coefficient, exponents) terms.

    Terms are combined, zero terms dropped, and the rest sorted by descending
    exponent vector, so equal polynomials compare equal.
    """

    nvars: int
    terms: tuple[Term, ...] = ()

    @classmethod
    def from_terms(cls, nvars: int, terms: Iterable[Sequence[Any]]) -> "SparsePolynomial":
        acc: dict[tuple[int, ...], int] = {}
        for coeff, exps in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent vector {exps} has length {len(exps)}, expected {nvars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            acc[exps] = acc.get(exps, 0) + int(coeff)
        ordered = sorted(((c, e) for e, c in acc.items() if c != 0), key=lambda t: t[1], reverse=True)
        return cls(nvars, tuple(ordered))

    @classmethod
    def zero(cls, nvars: int) -> "SparsePolynomial":
        return cls(nvars, ())

    @classmethod
    def from_json(cls, nvars: int, data: Sequence[Sequence[Any]]) -> "SparsePolynomial":
        return cls.from_terms(nvars, ((int(c), e) for c, e in data))

    def to_json(self) -> list[list[Any]]:
        return [[c if abs(c) <= _INT64_MAX else str(c), list(e)] for c, e in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for _, e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for _, e in self.terms}) <= 1

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial(self.nvars, tuple((-c, e) for c, e in self.terms))

    def __add__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        return SparsePolynomial.from_terms(self.nvars, self.terms + other.terms)

    def __sub__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        return self + (-other)

    def __mul__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        return SparsePolynomial.from_terms(
            self.nvars,
            ((c1 * c2, tuple(a + b for a, b in zip(e1, e2))) for c1, e1 in self.terms for c2, e2 in other.terms),
        )

    def derivative(self, i: int) -> "SparsePolynomial":
        return SparsePolynomial.from_terms(
            self.nvars,
            ((c * e[i], e[:i] + (e[i] - 1,) + e[i + 1 :]) for c, e in self.terms if e[i] > 0),
        )

    def evaluate(self, point: Sequence[int], ell: int | None = None) -> int:
        """Value at an integer point; reduced into [0, ell) when ell is given."""
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        total = 0
        if ell is None:
            for c, e in self.terms:
                v = c
                for x, k in zip(point, e):
                    if k:
                        v *= x**k
                total += v
            return total
        for c, e in self.terms:
            v = c % ell
            for x, k in zip(point, e):
                if k:
                    v = v * pow(x, k, ell) % ell
            total += v
        return total % ell

    def evaluate_generic(self, values: Sequence[Any], one: Any) -> Any:
        """Evaluate over any commutative ring whose elements support +, * and int scaling."""
        if len(values) != self.nvars:
            raise ValueError("length mismatch")
        powers: list[list[Any]] = []
        maxdeg = [max((e[i] for _, e in self.terms), default=0) for i in range(self.nvars)]
        for v, m in zip(values, maxdeg):
            row = [one]
            for _ in range(m):
                row.append(row[-1] * v)
            powers.append(row)
        total = one * 0
        for c, e in self.terms:
            mono = one * c
            for i, k in enumerate(e):
                if k:
                    mono = mono * powers[i][k]
            total = total + mono
        return total

    def evaluate_grid(self, columns: Sequence[Any], ell: int) -> np.ndarray:
        """Vectorized evaluation mod ell; each column is an int64 array or a scalar."""
        if len(columns) != self.nvars:
            raise ValueError("length mismatch")
        shape = np.broadcast_shapes(*(np.shape(c) for c in columns))
        maxdeg = [max((e[i] for _, e in self.terms), default=0) for i in range(self.nvars)]
        powers: list[list[Any]] = []
        for col, m in zip(columns, maxdeg):
            col = np.asarray(col, dtype=np.int64) % ell
            row = [None, col]
            for _ in range(1, m):
                row.append(row[-1] * col % ell)
            powers.append(row)
        total = np.zeros(shape, dtype=np.int64)
        for c, e in self.terms:
            mono: Any = c % ell
            for i, k in enumerate(e):
                if k:
                    mono = mono * powers[i][k] % ell
            total = (total + mono) % ell
        return total

    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for c, e in self.terms:
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __str__ = format  # type: ignore[assignment]
