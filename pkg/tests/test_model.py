import json
import random

import pytest

from mwsieve.arith import primes_below
from mwsieve.ec import WeierstrassCurve
from mwsieve.model import (
    ModelError,
    ModelValidationError,
    UnsupportedLevelError,
    builtin_path,
    enumerate_C_points,
    load_model,
    normalize,
    parse_model,
    psi_image,
    validate_model,
)
from mwsieve.poly import SparsePolynomial

from oracles import c53_points, projective_plane, quadric53

X = lambda *e: e  # noqa: E731

# The six equations of the diagonalised model of X0(53) in x1..x4.
PAPER_EQUATIONS = [
    [(1, X(2, 0, 0, 0)), (-1, X(0, 2, 0, 0)), (2, X(0, 1, 1, 0)), (-6, X(0, 1, 0, 1)), (11, X(0, 0, 2, 0)), (-6, X(0, 0, 1, 1)), (-1, X(0, 0, 0, 2))],
    [(1, X(3, 0, 0, 0)), (-1, X(1, 2, 0, 0)), (2, X(1, 1, 1, 0)), (-6, X(1, 1, 0, 1)), (11, X(1, 0, 2, 0)), (-6, X(1, 0, 1, 1)), (-1, X(1, 0, 0, 2))],
    [(1, X(2, 1, 0, 0)), (-1, X(0, 3, 0, 0)), (2, X(0, 2, 1, 0)), (5, X(0, 1, 2, 0)), (5, X(0, 1, 0, 2)), (-6, X(0, 0, 2, 1)), (6, X(0, 0, 0, 3))],
    [(1, X(2, 0, 1, 0)), (-1, X(0, 2, 1, 0)), (2, X(0, 1, 2, 0)), (-6, X(0, 1, 1, 1)), (11, X(0, 0, 3, 0)), (-6, X(0, 0, 2, 1)), (-1, X(0, 0, 1, 2))],
    [(1, X(2, 0, 0, 1)), (-1, X(0, 1, 2, 0)), (3, X(0, 1, 1, 1)), (-5, X(0, 1, 0, 2)), (10, X(0, 0, 2, 1)), (-6, X(0, 0, 1, 2))],
    [(1, X(0, 2, 0, 1)), (-1, X(0, 1, 2, 0)), (1, X(0, 1, 1, 1)), (1, X(0, 1, 0, 2)), (-1, X(0, 0, 2, 1)), (1, X(0, 0, 0, 3))],
]


def raw53():
    return json.loads(builtin_path(53).read_text())


def test_builtin_53_contents(model53):
    m = model53
    assert m.N == 53 and m.genus == 4
    assert m.q_poly.terms == SparsePolynomial.from_terms(
        3, [(1, (2, 0, 0)), (-2, (1, 1, 0)), (6, (1, 0, 1)), (-11, (0, 2, 0)), (6, (0, 1, 1)), (1, (0, 0, 2))]
    ).terms
    assert len(m.c_equations) == 1
    assert m.c_equations[0] == SparsePolynomial.from_terms(
        3, [(1, (2, 0, 1)), (-1, (1, 2, 0)), (1, (1, 1, 1)), (1, (1, 0, 2)), (-1, (0, 2, 1)), (1, (0, 0, 3))]
    )
    assert m.e_coeffs == (1, -1, 1, 0, 0)
    assert m.generator == (0, -1, 1)
    assert m.torsion is None


def test_eliminated_form_matches_full_model(model53):
    """Every (x1 : P) with P on C and x1^2 = q(P) satisfies all six model equations."""
    full = [SparsePolynomial.from_terms(4, eq) for eq in PAPER_EQUATIONS]
    for p in (3, 5, 7, 11, 13, 17, 19, 23):
        for pt in enumerate_C_points(model53, p):
            q = model53.q_poly.evaluate(pt, p)
            for x1 in range(p):
                if (x1 * x1 - q) % p == 0:
                    assert all(eq.evaluate((x1,) + pt, p) == 0 for eq in full)


def test_generator_off_curve():
    data = raw53()
    data["generator"] = [1, 1, 1]
    with pytest.raises(ModelValidationError, match="generator off-curve"):
        load_model(data)


def test_level_65_requires_torsion():
    data = raw53()
    data["N"] = 65
    with pytest.raises(ModelValidationError, match="torsion required for N = 65"):
        load_model(data)


@pytest.mark.parametrize("level", [37, 43])
def test_unsupported_levels(level):
    data = raw53()
    data["N"] = level
    with pytest.raises(UnsupportedLevelError):
        load_model(data)


def test_malformed_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ModelError):
        load_model(bad)
    data = raw53()
    del data["psi"]
    with pytest.raises(ModelError):
        load_model(data)
    data = raw53()
    data["variables"] = ["x2", "x3"]
    with pytest.raises(ModelError):
        load_model(data)


def test_roundtrip(model53, tmp_path):
    doc = model53.to_json()
    again = parse_model(json.loads(json.dumps(doc)))
    assert again == model53
    assert again.to_json() == doc
    assert again.content_hash == model53.content_hash
    path = tmp_path / "m.json"
    path.write_text(json.dumps(doc))
    assert load_model(path) == model53


def test_enumerate_mod_5_against_plane_scan(model53):
    assert len(projective_plane(5)) == 31
    assert sorted(enumerate_C_points(model53, 5)) == sorted(c53_points(5))


@pytest.mark.parametrize("ell", [3, 5, 7, 11, 13])
def test_enumerate_complete_and_duplicate_free(model53, ell):
    pts = enumerate_C_points(model53, ell)
    assert len(set(pts)) == len(pts)
    assert sorted(pts) == sorted(c53_points(ell))
    assert all(model53.c_equations[0].evaluate(p, ell) == 0 for p in pts)
    assert all(normalize(p, ell) == p for p in pts)


def test_count_mod_7_within_hasse(model53):
    n = len(enumerate_C_points(model53, 7))
    assert abs(n - 8) <= 2 * 7**0.5


def test_evaluate_quadric_oracle(model53):
    rng = random.Random(0)
    for _ in range(200):
        p = rng.choice([101, 997])
        pt = tuple(rng.randrange(p) for _ in range(3))
        assert model53.q_poly.evaluate(pt, p) == quadric53(*pt, p)


def test_validate_builtin(model53):
    rep = validate_model(model53, [3, 5, 7, 11, 13])
    assert rep.failures == [] and rep.unusable == []
    assert rep.base_points[7] == 3  # (0:1:0) and the two points with x3 = 0, x2^2 + x2 x4 + x4^2 = 0


def test_validate_zeroed_psi_component():
    data = raw53()
    data["psi"][2] = []
    m = load_model(data, validate=False)
    rep = validate_model(m, [3, 5, 7])
    assert rep.failures and "ell=3" in rep.failures[0]


def test_validate_sign_flipped_equation():
    data = raw53()
    data["c_equations"][0][0][0] = -1  # x2^2 x4 -> -x2^2 x4
    m = load_model(data, validate=False)
    rep = validate_model(m, [3, 5, 7, 11, 13])
    corrupted = lambda a, b, c, p: (-a * a * c - a * b * b + a * b * c + a * c * c - b * b * c + c**3) % p  # noqa: E731
    counts = {p: sum(1 for pt in projective_plane(p) if corrupted(*pt, p) == 0) for p in rep.primes}
    assert counts == rep.point_counts
    assert any("psi image off-curve" in f for f in rep.failures)


def test_composite_stays_on_curve(model53):
    for ell in primes_below(101):
        if ell == 2 or ell == 53:
            continue
        E = WeierstrassCurve.reduce(model53.e_coeffs, ell)
        assert all(E.contains(psi_image(model53, pt, ell)) for pt in enumerate_C_points(model53, ell))
