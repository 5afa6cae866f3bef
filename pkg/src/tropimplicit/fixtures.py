"""Worked example systems used by the tests, the acceptance suite and the CLI docs."""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .polytope import Point, lattice_points, conv
from .recovery import LaurentPolynomial

# bicubic surface; exponents are (s, t)
BICUBIC = [
    {(0, 3): 3, (0, 2): -6, (0, 1): 3, (3, 0): 1, (2, 0): -3, (1, 0): 6, (0, 0): -1},
    {(3, 0): 3, (2, 0): -6, (1, 0): 3, (0, 3): 1, (0, 1): 3},
    {(3, 3): -3, (2, 3): 15, (1, 3): -15, (3, 2): -3, (2, 2): -18, (1, 2): 27, (0, 2): -3,
     (3, 1): 6, (2, 1): 9, (1, 1): -18, (0, 1): 3, (2, 0): -3, (1, 0): 3},
]

# inner normals of the octagon P1+P2+P3, counterclockwise from (1, 0), and their images under psi
BICUBIC_NORMALS = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
BICUBIC_PSI = [(0, 0, 0), (0, 1, 1), (0, 0, 0), (-3, -3, -2), (-3, -3, -3), (-3, -3, -6), (-3, -3, -3), (-3, -3, -2)]

# (rays of C as column numbers of BICUBIC_NORMALS (1-based), J (1-based), index, mixed volume)
BICUBIC_PAIRS = [
    ((), (1, 2), 1, 9),
    ((), (1, 3), 1, 18),
    ((), (2, 3), 1, 17),
    ((2,), (2,), 1, 1),
    ((2,), (3,), 1, 1),
    ((6,), (1,), 3, 3),
    ((6,), (2,), 3, 3),
    ((4,), (3,), 3, 1),
    ((8,), (3,), 3, 1),
    ((5,), (3,), 3, 2),
    ((7,), (3,), 3, 2),
    ((4, 5), (), 3, 1),
    ((5, 6), (), 9, 1),
    ((6, 7), (), 9, 1),
    ((7, 8), (), 3, 1),
]

BICUBIC_Q = [(0, 0, 0), (18, 0, 0), (0, 18, 0), (0, 0, 9)]
BICUBIC_COEFFS = {(18, 0, 0): 3 ** 18, (0, 18, 0): 3 ** 18, (0, 0, 9): -2 ** 54,
                  (0, 2, 0): -12777985432959891776936639829, (0, 0, 0): -3707912273492242256259566313}

THREE_TRIANGLES = [
    [(1, 0), (3, 1), (2, 2)],
    [(-1, 0), (0, -1), (0, 0)],
    [(2, 1), (0, 2), (1, 3)],
]


def _e(*idx, d=3) -> Point:
    return tuple(int(i in idx) for i in range(d))


# six linear forms in t1, t2, t3
TRANSVERSAL = [
    [_e(0), _e(1)],
    [_e(0)],
    [_e(0), _e(2)],
    [_e(1)],
    [_e(2)],
    [_e(1), _e(2)],
]

# quotient graph modulo (1,...,1): node labels list the coordinates equal to 1
TRANSVERSAL_EDGES = {
    frozenset(p) for p in [
        ("e2", "e124"), ("e124", "e4"), ("e4", "e456"), ("e456", "e5"), ("e5", "e235"), ("e235", "e2"),
        ("e124", "e1"), ("e2", "e6"), ("e235", "e3"), ("e5", "e1"), ("e456", "e6"), ("e4", "e3"),
        ("e1", "e3"), ("e1", "e6"), ("e3", "e6"),
    ]
}


def bicubic() -> list[LaurentPolynomial]:
    return [LaurentPolynomial.from_terms(f) for f in BICUBIC]


def generic(supports: Sequence[Sequence[Sequence[int]]], seed: int = 0,
            scale: int = 10 ** 6) -> list[LaurentPolynomial]:
    """Polynomials with the given supports and random integer coefficients.

    Coefficients are drawn from [-scale, scale] minus zero; small ranges
    quickly produce accidental common roots.
    """
    rng = np.random.default_rng(seed)
    out = []
    for A in supports:
        terms = {}
        for a in sorted({tuple(int(x) for x in p) for p in A}):
            c = 0
            while c == 0:
                c = int(rng.integers(-scale, scale + 1))
            terms[a] = c
        out.append(LaurentPolynomial.from_terms(terms))
    return out


def gaussian(supports: Sequence[Sequence[Sequence[int]]], seed: int = 0) -> list[LaurentPolynomial]:
    """Polynomials with the given supports and standard complex normal coefficients.

    Better conditioned for numerical recovery than wide-range integers.
    """
    rng = np.random.default_rng(seed)
    out = []
    for A in supports:
        pts = sorted({tuple(int(x) for x in p) for p in A})
        c = rng.normal(size=len(pts)) + 1j * rng.normal(size=len(pts))
        out.append(LaurentPolynomial.from_terms(dict(zip(pts, c))))
    return out


def plane_curve_supports(a: int, b: int, c: int, d: int) -> list[list[Point]]:
    """Dense supports on the segments [a, b] and [c, d]."""
    return [[(k,) for k in range(a, b + 1)], [(k,) for k in range(c, d + 1)]]


def plane_curve_q(a: int, b: int, c: int, d: int) -> Optional[list[Point]]:
    """Closed-form Newton polygon of the curve with segments [a, b], [c, d]."""
    if a >= 0 and c >= 0:
        return [(0, b), (0, a), (c, 0), (d, 0)]
    if b <= 0 and d <= 0:
        return [(0, -a), (0, -b), (-d, 0), (-c, 0)]
    if a <= 0 and d >= 0 and b * c >= a * d:
        return [(0, b - a), (0, 0), (d - c, 0), (d, -a)]
    if b >= 0 and c <= 0 and b * c <= a * d:
        return [(0, b - a), (0, 0), (d - c, 0), (-c, b)]
    return None


def plane_curve_case(a: int, b: int, c: int, d: int) -> int:
    """Which of the four closed forms applies (1-4), first match wins."""
    if a >= 0 and c >= 0:
        return 1
    if b <= 0 and d <= 0:
        return 2
    if a <= 0 and d >= 0 and b * c >= a * d:
        return 3
    if b >= 0 and c <= 0 and b * c <= a * d:
        return 4
    return 0


def unmixed_supports(polygon: Sequence[Sequence[int]], n: int = 3) -> list[list[Point]]:
    """n copies of all lattice points of one polygon."""
    pts = lattice_points(conv(polygon))
    return [list(pts) for _ in range(n)]
