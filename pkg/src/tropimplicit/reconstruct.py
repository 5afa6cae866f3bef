"""From the weighted tropical variety to the Newton (or Chow) polytope.

The vertex of Q minimising a generic v has i-th coordinate equal to the
weighted number of points where the halfline v + R_{>=0} e_i meets the
tropical hypersurface.  Each hit is counted with intrinsic multiplicity
(index * mixed volume of the covering pieces) times the extrinsic index
[Z^n : Z e_i + (span of the piece) cap Z^n].  In codimension c the halfline
becomes the orthant cone v + R_{>=0}{e_s : s in S} over c-subsets S.

The full polytope is explored through this oracle.  A query in direction
v = N u + r, with r a small random perturbation and N larger than |r|_1
times a coordinate bound, returns a vertex of face_u(Q); that is what lets
every facet of the current hull be certified exactly.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Optional, Sequence

import numpy as np

from .intlinalg import det, dot, solve_rational, sublattice_index
from .polytope import LatticePolytope, Point, conv
from .tropical import ConePair, TropicalCycle, is_hypersurface

log = logging.getLogger(__name__)


class GenericityError(ArithmeticError):
    """The direction is not generic for the cycle; draw a new one."""


class PreconditionError(ValueError):
    pass


@dataclass
class Hit:
    point: tuple[Fraction, ...]
    pairs: list[str]
    intrinsic: int
    extrinsic: int
    contribution: int


@dataclass
class RayShootReport:
    direction: tuple[int, ...]         # indices of the unit vectors spanning the shooting cone
    base_point: tuple[Fraction, ...]
    hits: list[Hit] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(h.contribution for h in self.hits)


@dataclass
class ReconstructedPolytope:
    polytope: LatticePolytope
    provenance: dict[Point, tuple[int, ...]]
    queries: int = 0


def _as_fractions(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def _check_codim(cycle: TropicalCycle) -> int:
    c = cycle.system.n - cycle.system.dim
    if c < 1:
        raise PreconditionError("the image is not a proper subvariety (n <= d)")
    return c


def shoot(cycle: TropicalCycle, v: Sequence, S: Sequence[int]) -> RayShootReport:
    """Intersect the cycle with the cone v + R_{>=0}{e_s : s in S}, |S| = codimension.

    Raises GenericityError whenever the intersection is not a finite set of
    smooth transversal points.
    """
    n = cycle.ambient_dim
    c = _check_codim(cycle)
    S = tuple(sorted(S))
    if len(S) != c:
        raise ValueError(f"need {c} directions, got {S}")
    v = _as_fractions(v)
    if len(v) != n:
        raise ValueError(f"base point has length {len(v)}, expected {n}")
    report = RayShootReport(S, v)
    groups: dict[tuple, list[tuple[ConePair, int]]] = {}
    for pair in cycle.pairs:
        E = pair.geometry.equations
        ES = [[e[s] for s in S] for e in E]
        rhs = [-dot(e, v) for e in E]
        D = det(ES)
        if D == 0:
            if solve_rational(ES, rhs) is not None:
                raise GenericityError(f"cone over {S} meets the span of {pair.label} in a positive-dimensional set")
            continue
        t = solve_rational(ES, rhs)
        if any(x < 0 for x in t):
            continue
        gamma = list(v)
        for s, x in zip(S, t):
            gamma[s] += x
        gamma = tuple(gamma)
        if not pair.geometry.contains(gamma):
            continue
        if any(x == 0 for x in t):
            raise GenericityError(f"hit on the boundary of the shooting cone at {gamma}")
        if not pair.geometry.in_relative_interior(gamma):
            raise GenericityError(f"hit on the boundary of {pair.label} at {gamma}")
        ext = sublattice_index([list(b) for b in pair.geometry.span_basis] +
                               [[int(i == s) for i in range(n)] for s in S])
        if ext != abs(D):
            raise ArithmeticError(f"extrinsic index {ext} disagrees with |det| {abs(D)}")
        groups.setdefault(gamma, []).append((pair, ext))
    for gamma in sorted(groups):
        members = groups[gamma]
        if len({p.geometry.span_key() for p, _ in members}) > 1:
            raise GenericityError(f"pieces of different span meet at {gamma}")
        intrinsic = sum(p.weight for p, _ in members)
        ext = members[0][1]
        report.hits.append(Hit(gamma, [p.label for p, _ in members], intrinsic, ext,
                               sum(p.weight * e for p, e in members)))
    return report


def chow_vertex(cycle: TropicalCycle, v: Sequence, reports: Optional[list] = None) -> Point:
    """Vertex of the Chow polytope minimising v (the Newton polytope vertex when c = 1)."""
    n = cycle.ambient_dim
    c = _check_codim(cycle)
    if c > 1 and not cycle.system.is_homogeneous():
        raise PreconditionError("codimension > 1 needs homogeneous supports of one common degree")
    coords = [0] * n
    for S in combinations(range(n), c):
        rep = shoot(cycle, v, S)
        if reports is not None:
            reports.append(rep)
        mu = rep.total
        for s in S:
            coords[s] += mu
    return tuple(coords)


def vertex_oracle(cycle: TropicalCycle, v: Sequence, reports: Optional[list] = None) -> Point:
    """Vertex face_v(Q) of the Newton polytope of the implicit equation."""
    system = cycle.system
    if system.n != system.dim + 1:
        raise PreconditionError(f"not a hypersurface: n={system.n}, d={system.dim}")
    if not is_hypersurface(system):
        raise PreconditionError("NOT_HYPERSURFACE: no choice of support points has rank d")
    return chow_vertex(cycle, v, reports)


def coordinate_bound(cycle: TropicalCycle) -> int:
    """An upper bound for every coordinate of every vertex."""
    n = cycle.ambient_dim
    c = _check_codim(cycle)
    total = 0
    for pair in cycle.pairs:
        E = pair.geometry.equations
        total += pair.weight * sum(abs(det([[e[s] for s in S] for e in E])) for S in combinations(range(n), c))
    return total


def _random_perturbation(rng: np.random.Generator, n: int, scale: int) -> tuple[int, ...]:
    return tuple(int(x) for x in rng.integers(-scale, scale + 1, size=n))


def _generic_query(oracle: Callable, u: Sequence[int], bound: int, rng, retries: int):
    # v = N u + r: any minimiser of v lies in face_u(Q)
    n = len(u)
    scale = 1000
    for attempt in range(retries):
        r = _random_perturbation(rng, n, scale)
        N = sum(abs(x) for x in r) * bound + 1
        v = tuple(N * a + b for a, b in zip(u, r))
        try:
            return oracle(v), v
        except GenericityError as exc:
            log.debug("resampling after genericity failure: %s", exc)
            scale *= 2
    raise GenericityError(f"no generic direction near {tuple(u)} after {retries} attempts")


def reconstruct_polytope(oracle: Callable, n: int, bound: int, seed: int = 0,
                         retries: int = 20) -> ReconstructedPolytope:
    """Explore conv of all oracle answers until every facet is certified.

    ``oracle(v)`` must return the vertex of an unknown lattice polytope
    minimising v, with all coordinates in [0, bound].
    """
    rng = np.random.default_rng(seed)
    provenance: dict[Point, tuple[int, ...]] = {}
    queries = 0

    def ask(u):
        nonlocal queries
        x, v = _generic_query(oracle, u, bound, rng, retries)
        queries += 1
        provenance.setdefault(x, v)
        return x

    unit = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    for e in unit:
        ask(e)
        ask(tuple(-a for a in e))
    certified: set[tuple] = set()
    while True:
        H = conv(list(provenance))
        pending = []
        for eq, val in H.equations:
            pending.append((tuple(eq), val))
            pending.append((tuple(-a for a in eq), -val))
        for f in H.facets:
            pending.append((f.normal, f.offset))
        grew = False
        for u, h in pending:
            if (u, h) in certified:
                continue
            x = ask(u)
            if dot(u, x) < h:
                grew = True
                break
            if dot(u, x) > h:
                raise ArithmeticError(f"oracle answer {x} is not minimal in direction {u}")
            certified.add((u, h))
        if not grew:
            return ReconstructedPolytope(H, dict(sorted(provenance.items())), queries)


def reconstruct_newton(cycle: TropicalCycle, seed: int = 0, retries: int = 20) -> ReconstructedPolytope:
    """Newton polytope Q of the implicit equation (hypersurface case)."""
    system = cycle.system
    if system.n != system.dim + 1:
        raise PreconditionError(f"not a hypersurface: n={system.n}, d={system.dim}")
    if not is_hypersurface(system):
        raise PreconditionError("NOT_HYPERSURFACE: no choice of support points has rank d")
    return reconstruct_polytope(lambda v: vertex_oracle(cycle, v), system.n,
                                coordinate_bound(cycle), seed, retries)


def reconstruct_chow(cycle: TropicalCycle, seed: int = 0, retries: int = 20) -> ReconstructedPolytope:
    """Chow polytope of the image (any codimension, homogeneous input when c > 1)."""
    return reconstruct_polytope(lambda v: chow_vertex(cycle, v), cycle.ambient_dim,
                                coordinate_bound(cycle), seed, retries)


def degree(cycle: TropicalCycle, seed: int = 0, retries: int = 20) -> int:
    """Degree read off the Chow vertex in a generic direction near -(1, ..., 1).

    Every minimal prime of codimension c contributes to c coordinates, so the
    coordinate sum is c times the degree; it is divided out here.  For
    homogeneous input all vertices give the same value.  For a hypersurface
    with non-homogeneous input this is the largest coordinate sum over Q,
    the total degree of the implicit equation.  Multiplicities are those of
    the pushforward cycle: a parametrization of degree k multiplies the
    answer by k.
    """
    n = cycle.ambient_dim
    c = _check_codim(cycle)
    rng = np.random.default_rng(seed)
    x, _ = _generic_query(lambda v: chow_vertex(cycle, v), (-1,) * n, coordinate_bound(cycle), rng, retries)
    total = sum(x)
    if total % c:
        raise ArithmeticError(f"coordinate sum {total} is not divisible by the codimension {c}")
    return total // c
