"""Curve-model data for X0(N): loading, validation and point enumeration.

A model stores the x1-eliminated form of a diagonalised canonical model:

* ``q_poly``: the quadric solved for x1, i.e. ``x1^2 = q_poly(x2, ..., xg)``;
* ``c_equations``: x1-free equations of the image C of the projection to x2..xg;
* ``psi``: three forms in x2..xg giving C -> E, E the Weierstrass model of X0+(N).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from .ec import INFINITY, NotOnCurveError, Point, WeierstrassCurve, reduce_point, weierstrass_form
from .poly import SparsePolynomial
from .series import SingularPointError, evaluate_map_at

SUPPORTED_LEVELS = (53, 61, 65, 79, 83, 89, 101, 131)
VALIDATION_PRIMES = (3, 5, 7, 11, 13)
_ENUM_CHUNK = 1 << 22

ProjectivePoint = tuple[int, ...]


class ModelError(ValueError):
    """Malformed or inconsistent model data."""


class UnsupportedLevelError(ModelError):
    pass


class ModelValidationError(ModelError):
    pass


@dataclass(frozen=True)
class CurveModelData:
    N: int
    genus: int
    variables: tuple[str, ...]
    q_poly: SparsePolynomial
    c_equations: tuple[SparsePolynomial, ...]
    psi: tuple[SparsePolynomial, SparsePolynomial, SparsePolynomial]
    e_coeffs: tuple[int, int, int, int, int]
    generator: tuple[int, int, int]
    torsion: Optional[tuple[int, int, int]] = None
    inverse_map: Optional[tuple[SparsePolynomial, SparsePolynomial, SparsePolynomial]] = None
    expected_D: Optional[tuple[int, ...]] = None
    _hash: str = field(default="", compare=False, repr=False)

    @property
    def nvars(self) -> int:
        return self.genus - 1

    @property
    def e_equation(self) -> SparsePolynomial:
        """Homogeneous Weierstrass cubic in X, Y, Z."""
        a1, a2, a3, a4, a6 = self.e_coeffs
        return SparsePolynomial.from_terms(3, [
            (1, (0, 2, 1)), (a1, (1, 1, 1)), (a3, (0, 1, 2)),
            (-1, (3, 0, 0)), (-a2, (2, 0, 1)), (-a4, (1, 0, 2)), (-a6, (0, 0, 3)),
        ])

    def curve_mod(self, ell: int) -> WeierstrassCurve:
        return WeierstrassCurve.reduce(self.e_coeffs, ell)

    def to_json(self) -> dict[str, Any]:
        return {
            "N": self.N,
            "genus": self.genus,
            "variables": list(self.variables),
            "q_poly": self.q_poly.to_json(),
            "c_equations": [p.to_json() for p in self.c_equations],
            "psi": [p.to_json() for p in self.psi],
            "e_coeffs": list(self.e_coeffs),
            "generator": list(self.generator),
            "torsion": list(self.torsion) if self.torsion else None,
            "inverse_map": [p.to_json() for p in self.inverse_map] if self.inverse_map else None,
            "expected_D": list(self.expected_D) if self.expected_D is not None else None,
        }

    @property
    def content_hash(self) -> str:
        if not self._hash:
            blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
            object.__setattr__(self, "_hash", hashlib.sha256(blob.encode()).hexdigest())
        return self._hash


def _triple(value: Any, name: str) -> tuple[int, int, int]:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ModelError(f"{name} must be a list of three integers")
    return tuple(int(v) for v in value)  # type: ignore[return-value]


def parse_model(data: dict[str, Any]) -> CurveModelData:
    """Build a CurveModelData from the JSON document, without validation."""
    try:
        N = int(data["N"])
        genus = int(data["genus"])
        variables = tuple(data["variables"])
        n = genus - 1
        if len(variables) != n:
            raise ModelError(f"expected {n} variables for genus {genus}, got {len(variables)}")
        poly = lambda terms: SparsePolynomial.from_json(n, terms)  # noqa: E731
        psi = tuple(poly(t) for t in data["psi"])
        if len(psi) != 3:
            raise ModelError("psi must have three components")
        coeffs = tuple(int(a) for a in data["e_coeffs"])
        if len(coeffs) != 5:
            raise ModelError("e_coeffs must be [a1, a2, a3, a4, a6]")
        inverse = data.get("inverse_map")
        if inverse is not None:
            inverse = tuple(SparsePolynomial.from_json(3, t) for t in inverse)
            if len(inverse) != n:
                raise ModelError(f"inverse_map must have {n} components")
        torsion = data.get("torsion")
        expected = data.get("expected_D")
        return CurveModelData(
            N=N,
            genus=genus,
            variables=variables,
            q_poly=poly(data["q_poly"]),
            c_equations=tuple(poly(t) for t in data["c_equations"]),
            psi=psi,  # type: ignore[arg-type]
            e_coeffs=coeffs,  # type: ignore[arg-type]
            generator=_triple(data["generator"], "generator"),
            torsion=_triple(torsion, "torsion") if torsion is not None else None,
            inverse_map=inverse,
            expected_D=tuple(int(d) for d in expected) if expected is not None else None,
        )
    except ModelError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed model file: {exc!r}") from exc


def _structural_checks(model: CurveModelData) -> None:
    if model.N in (37, 43):
        raise UnsupportedLevelError(
            f"X0({model.N}) is not supported: "
            + ("it is hyperelliptic as well as bielliptic" if model.N == 37
               else "it has a non-cuspidal rational point fixed by w_N")
        )
    if model.N == 65 and model.torsion is None:
        raise ModelValidationError("torsion required for N = 65")
    if weierstrass_form(model.e_coeffs, *model.generator) != 0:
        raise ModelValidationError("generator off-curve")
    if model.torsion is not None and weierstrass_form(model.e_coeffs, *model.torsion) != 0:
        raise ModelValidationError("torsion off-curve")
    for p in (model.q_poly, *model.c_equations, *model.psi):
        if not p.is_homogeneous():
            raise ModelValidationError(f"non-homogeneous form {p}")


def load_model(source: str | Path | dict[str, Any], validate: bool = True) -> CurveModelData:
    """Read, parse and (by default) validate a model file or an already-decoded document."""
    if isinstance(source, dict):
        data = source
    else:
        try:
            data = json.loads(Path(source).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ModelError(f"malformed model file {source}: {exc}") from exc
    model = parse_model(data)
    _structural_checks(model)
    if validate:
        primes = [p for p in VALIDATION_PRIMES if (2 * model.N) % p]
        report = validate_model(model, primes)
        if report.failures:
            raise ModelValidationError("; ".join(report.failures))
    return model


def builtin_path(level: int) -> Path:
    return Path(str(resources.files("mwsieve") / "data" / f"X0_{level}.json"))


def builtin_model(level: int) -> CurveModelData:
    if level in (37, 43):
        raise UnsupportedLevelError(f"X0({level}) is not supported")
    path = builtin_path(level)
    if not path.exists():
        raise ModelError(f"no model file shipped for N = {level}")
    return load_model(path)


def normalize(coords: Sequence[int], ell: int) -> ProjectivePoint:
    """Scale so the first nonzero coordinate is 1."""
    coords = [c % ell for c in coords]
    lead = next((c for c in coords if c), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    inv = pow(lead, -1, ell)
    return tuple(c * inv % ell for c in coords)


def enumerate_C_points(model: CurveModelData, ell: int) -> list[ProjectivePoint]:
    """All points of C(F_ell), each once, normalized, patch by patch."""
    n = model.nvars
    out: list[ProjectivePoint] = []
    for lead in range(n):
        free = n - lead - 1
        prefix = (0,) * lead + (1,)
        if free == 0:
            if all(eq.evaluate(prefix, ell) == 0 for eq in model.c_equations):
                out.append(prefix)
            continue
        # the first free coordinate is looped in Python when the grid is large
        outer = 1 if ell**free <= _ENUM_CHUNK else ell
        inner_free = free if outer == 1 else free - 1
        grids = np.meshgrid(*([np.arange(ell, dtype=np.int64)] * inner_free), indexing="ij")
        flat = [g.ravel() for g in grids]
        for head in range(outer):
            cols: list[Any] = [0] * lead + [1]
            cols += flat if outer == 1 else [head] + flat
            mask = np.ones(flat[0].shape if flat else (1,), dtype=bool)
            for eq in model.c_equations:
                mask &= eq.evaluate_grid(cols, ell) == 0
            idx = np.nonzero(mask)[0]
            rest = np.stack([f[idx] for f in flat], axis=1) if flat else np.zeros((len(idx), 0), dtype=np.int64)
            pre = prefix if outer == 1 else prefix + (head,)
            out.extend(pre + tuple(int(v) for v in row) for row in rest)
    return out


def psi_image(model: CurveModelData, point: ProjectivePoint, ell: int) -> Point:
    """psi(point) on the reduced Weierstrass curve (affine tuple or INFINITY).

    Points where every component of psi vanishes are resolved by local
    power-series expansion along C.
    """
    X, Y, Z = evaluate_map_at(model.c_equations, model.psi, point, ell)
    if Z % ell == 0:
        if X % ell:
            raise NotOnCurveError(f"psi({point}) = ({X}:{Y}:{Z}) is off the curve mod {ell}")
        return INFINITY
    zi = pow(Z, -1, ell)
    return (X * zi % ell, Y * zi % ell)


def inverse_image(model: CurveModelData, P: Point, ell: int) -> ProjectivePoint:
    """Point of C over P via the optional inverse map E -> C."""
    if model.inverse_map is None:
        raise ModelError("model has no inverse map")
    coords = (0, 1, 0) if P is INFINITY else (P[0], P[1], 1)
    image = evaluate_map_at([model.e_equation], model.inverse_map, coords, ell)
    return normalize(image, ell)


@dataclass
class ValidationReport:
    primes: list[int]
    failures: list[str] = field(default_factory=list)
    unusable: list[int] = field(default_factory=list)
    base_points: dict[int, int] = field(default_factory=dict)
    point_counts: dict[int, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def validate_model(model: CurveModelData, primes: Sequence[int]) -> ValidationReport:
    """Check psi lands on E, and generator/torsion reduce correctly, at each prime."""
    report = ValidationReport(list(primes))
    for ell in primes:
        try:
            E = model.curve_mod(ell)
        except ValueError:
            report.failures.append(f"singular Weierstrass reduction at ell={ell}")
            continue
        try:
            reduce_point(model.generator, ell, E)
        except (NotOnCurveError, ValueError):
            report.failures.append(f"generator off-curve at ell={ell}")
        if model.torsion is not None:
            try:
                Q = reduce_point(model.torsion, ell, E)
                if E.scalar_mul(2, Q) is not INFINITY:
                    report.failures.append(f"torsion not 2-torsion at ell={ell}")
            except (NotOnCurveError, ValueError):
                report.failures.append(f"torsion off-curve at ell={ell}")
        points = enumerate_C_points(model, ell)
        report.point_counts[ell] = len(points)
        base = 0
        for pt in points:
            if not any(c.evaluate(pt, ell) for c in model.psi):
                base += 1
            try:
                img = psi_image(model, pt, ell)
            except SingularPointError:
                if ell not in report.unusable:
                    report.unusable.append(ell)
                continue
            except NotOnCurveError:
                report.failures.append(f"psi image off-curve at ell={ell}, point {pt}")
                break
            if not E.contains(img):
                report.failures.append(f"psi image off-curve at ell={ell}, point {pt}")
                break
        report.base_points[ell] = base
    return report
