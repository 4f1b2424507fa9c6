"""Independent reference computations for N = 53, used only by tests.

Nothing here touches the bucket table, the power-series resolution of psi or
the residue-set code.
"""

from mwsieve.ec import INFINITY, WeierstrassCurve


def cubic53(x2, x3, x4, p):
    return (x2 * x2 * x4 - x2 * x3 * x3 + x2 * x3 * x4 + x2 * x4 * x4 - x3 * x3 * x4 + x4**3) % p


def quadric53(x2, x3, x4, p):
    return (x2 * x2 - 2 * x2 * x3 + 6 * x2 * x4 - 11 * x3 * x3 + 6 * x3 * x4 + x4 * x4) % p


def projective_plane(p):
    pts = [(1, a, b) for a in range(p) for b in range(p)]
    pts += [(0, 1, b) for b in range(p)]
    pts.append((0, 0, 1))
    return pts


def c53_points(p):
    return [pt for pt in projective_plane(p) if cubic53(*pt, p) == 0]


def psi53(pt, p):
    """psi on C53 mod p, with hand-derived fallbacks at its base points.

    On C the ratio (x2^2 + x2 x4 + x4^2) / x3 equals (x2 x3 - x2 x4 + x3 x4) / x4,
    which gives the second form below; (0:1:0) has tangent x2 + x4 = 0 and maps to R.
    """
    x2, x3, x4 = pt
    for X, Y, Z in (
        (x2 * x3 + x3 * x4, x2 * x2 + x2 * x4 - x3 * x4 + x4 * x4, x3 * x4),
        ((x2 + x4) * x4, x2 * x3 - x2 * x4 + x3 * x4 - x4 * x4, x4 * x4),
    ):
        X, Y, Z = X % p, Y % p, Z % p
        if X or Y or Z:
            if Z == 0:
                return INFINITY
            zi = pow(Z, -1, p)
            return (X * zi % p, Y * zi % p)
    assert (x2 % p, x3 % p, x4 % p) == (0, 1, 0)
    return (0, p - 1)


def fiber_shape(q, p):
    roots = sum(1 for x in range(p) if (x * x - q) % p == 0)
    return {2: "pair", 0: "conjugate", 1: "single"}[roots]


def direct_local_data(p):
    """(G, cases) by brute-force discrete log and brute-force square roots."""
    E = WeierstrassCurve(p, 1, -1, 1, 0, 0)
    R = (0, p - 1)
    multiples = [INFINITY]
    while True:
        nxt = E.scalar_mul(len(multiples), R)
        if nxt is INFINITY:
            break
        multiples.append(nxt)
    G = len(multiples)
    cases = [None] * G
    for pt in c53_points(p):
        img = psi53(pt, p)
        assert E.contains(img)
        if img in multiples:
            k = multiples.index(img)
            shape = fiber_shape(quadric53(*pt, p), p)
            cases[k] = shape if cases[k] in (None, shape) else "unknown"
    return G, [c or "unknown" for c in cases]
