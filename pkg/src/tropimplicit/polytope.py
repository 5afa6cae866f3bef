"""Lattice polytopes with exact vertex data.

All polytopes live in Z^d and are stored by their (lexicographically sorted)
vertex list.  Facet and face data are computed lazily in the integer lattice
parallel to the affine span, so lower dimensional polytopes (segments in the
plane, hexagons in R^3, ...) are handled the same way as full dimensional ones.
Inner normals are used throughout: ``face_in_direction(P, w)`` is the face
on which ``u -> w.u`` is *minimised*.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from itertools import combinations, product
from math import factorial
from typing import Iterable, Optional, Sequence

import numpy as np

from .intlinalg import (
    dot,
    echelon_coordinates,
    hnf_with_transform,
    integer_kernel,
    integer_solve,
    primitive,
    rank,
    saturated_basis,
)

Point = tuple[int, ...]


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Facet:
    normal: Point          # primitive inner normal (ambient representative)
    offset: int            # normal . x >= offset on P, equality on the facet
    vertices: frozenset


@dataclass(frozen=True)
class _Geometry:
    origin: Point
    basis: list            # saturated lattice basis of the direction space (HNF rows)
    equations: list        # integer normals of the affine hull, paired with values
    facets: list           # list of (local normal, local offset, Facet)


@dataclass(frozen=True, eq=True)
class LatticePolytope:
    ambient_dim: int
    vertices: tuple[Point, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("empty polytope")
        for v in self.vertices:
            if len(v) != self.ambient_dim:
                raise DimensionMismatch(f"vertex {v} is not in Z^{self.ambient_dim}")

    def __repr__(self):
        return f"LatticePolytope({list(self.vertices)})"

    @cached_property
    def _geom(self) -> _Geometry:
        return _compute_geometry(self.vertices, self.ambient_dim)[1]

    @property
    def dim(self) -> int:
        return len(self._geom.basis)

    @property
    def facets(self) -> list[Facet]:
        return [f for _, _, f in self._geom.facets]

    @property
    def equations(self) -> list[tuple[Point, int]]:
        """Affine hull as a list of (normal, value) with normal . x == value."""
        return self._geom.equations

    @property
    def lattice_basis(self) -> list[Point]:
        return self._geom.basis

    def local_coordinates(self, x: Sequence[int]) -> list:
        return echelon_coordinates(self._geom.basis, [a - b for a, b in zip(x, self._geom.origin)])

    def contains(self, x: Sequence) -> bool:
        if any(dot(n, x) != b for n, b in self.equations):
            return False
        return all(dot(f.normal, x) >= f.offset for f in self.facets)

    @cached_property
    def faces(self) -> list["LatticePolytope"]:
        """All nonempty faces (P itself included), sorted by dimension then vertices."""
        seen: dict[tuple, LatticePolytope] = {self.vertices: self}
        stack = [self]
        while stack:
            Q = stack.pop()
            for f in Q.facets:
                key = tuple(sorted(f.vertices))
                if key not in seen:
                    seen[key] = _from_vertices(key, self.ambient_dim)
                    stack.append(seen[key])
        return sorted(seen.values(), key=lambda F: (F.dim, F.vertices))

    def translate(self, a: Sequence[int]) -> "LatticePolytope":
        return LatticePolytope(self.ambient_dim, tuple(sorted(tuple(x + y for x, y in zip(v, a)) for v in self.vertices)))

    def scale(self, k: int) -> "LatticePolytope":
        if k < 0:
            raise ValueError("negative dilation")
        return conv([tuple(k * x for x in v) for v in self.vertices])

    def f_vector(self) -> tuple[int, ...]:
        counts = [0] * (self.dim + 1)
        for F in self.faces:
            counts[F.dim] += 1
        return tuple(counts[:-1]) if self.dim > 0 else (1,)


def _from_vertices(vertices: Sequence[Point], d: int) -> LatticePolytope:
    return LatticePolytope(d, tuple(sorted(vertices)))


# ----------------------------------------------------------------- hull core

def _det_stack(A: np.ndarray) -> np.ndarray:
    """Exact determinants of a stack of small integer matrices (Laplace)."""
    r = A.shape[1]
    if r == 0:
        return np.ones(A.shape[0], dtype=A.dtype)
    if r == 1:
        return A[:, 0, 0]
    if r == 2:
        return A[:, 0, 0] * A[:, 1, 1] - A[:, 0, 1] * A[:, 1, 0]
    rest = A[:, 1:, :]
    total = np.zeros(A.shape[0], dtype=A.dtype)
    for j in range(r):
        minor = np.delete(rest, j, axis=2)
        term = A[:, 0, j] * _det_stack(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _cross_stack(D: np.ndarray) -> np.ndarray:
    """Generalised cross products of stacks of (k-1) vectors in Z^k."""
    k = D.shape[2]
    out = np.empty((D.shape[0], k), dtype=D.dtype)
    for j in range(k):
        c = _det_stack(np.delete(D, j, axis=2))
        out[:, j] = c if j % 2 == 0 else -c
    return out


def _primitive_rows(N: np.ndarray) -> np.ndarray:
    if N.dtype == object:
        return np.array([primitive(row) for row in N], dtype=object).reshape(N.shape)
    g = np.gcd.reduce(np.abs(N), axis=1)
    g = np.where(g == 0, 1, g)
    return N // g[:, None]


def _supporting_hyperplanes(pts: list[Point], k: int, through_origin: bool) -> list[tuple[Point, int]]:
    """Facet hyperplanes of a full dimensional point configuration in Z^k.

    With ``through_origin`` the hull is the cone generated by ``pts`` and
    every hyperplane passes through 0.  Brute force over subsets, vectorised.
    Returns (inner normal, offset) pairs.
    """
    P = np.array(pts, dtype=object)
    m = len(pts)
    span = max(1, int(max(abs(int(x)) for p in pts for x in p)))
    need = k if not through_origin else k - 1
    bound = factorial(k - 1) * (2 * span) ** (k - 1) * (k + 1) * 2 * span
    dtype = np.int64 if bound < 2 ** 62 else object
    P = P.astype(dtype)
    found: dict[tuple, int] = {}
    idx_iter = combinations(range(m), need)
    chunk = 20000
    while True:
        block = list(_take(idx_iter, chunk))
        if not block:
            break
        C = np.array(block, dtype=np.int64)
        if through_origin:
            base = np.zeros((len(C), k), dtype=dtype)
            D = P[C] if need else np.zeros((len(C), 0, k), dtype=dtype)
        else:
            base = P[C[:, 0]]
            D = P[C[:, 1:]] - base[:, None, :]
        N = _cross_stack(D)
        nz = np.any(N != 0, axis=1)
        N, base = N[nz], base[nz]
        if not len(N):
            continue
        N = _primitive_rows(N)
        off = np.einsum("ij,ij->i", N, base) if dtype != object else np.array([dot(a, b) for a, b in zip(N, base)], dtype=object)
        vals = N.dot(P.T) - off[:, None]
        ge = np.all(vals >= 0, axis=1)
        le = np.all(vals <= 0, axis=1)
        for row, o, g, l in zip(N, off, ge, le):
            if g:
                found[tuple(int(x) for x in row)] = int(o)
            elif l:
                found[tuple(-int(x) for x in row)] = -int(o)
    return sorted(found.items())


def _take(it, n):
    for _, x in zip(range(n), it):
        yield x


def _hull_local(pts: list[Point], k: int) -> list[tuple[Point, int]]:
    """Facets (inner normal, offset) of a full dimensional configuration in Z^k."""
    if k == 0:
        return []
    if k == 1:
        xs = [p[0] for p in pts]
        return [((1,), min(xs)), ((-1,), -max(xs))]
    if k == 2:
        ring = _monotone_chain(pts)
        out = []
        for a, b in zip(ring, ring[1:] + ring[:1]):
            n = primitive((a[1] - b[1], b[0] - a[0]))
            out.append((n, dot(n, a)))
        return out
    return _supporting_hyperplanes(pts, k, through_origin=False)


def _monotone_chain(pts: list[Point]) -> list[Point]:
    """Counter-clockwise strict vertex cycle of a full dimensional planar set."""
    P = sorted(set(pts))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in P:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(P):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _lift_functional(basis: list[Point], local: Sequence[int], lineality: list[Point]) -> Point:
    """Integer u with basis @ u == local, reduced modulo the lineality lattice."""
    u = integer_solve(basis, local)
    if u is None:
        raise ArithmeticError("functional does not lift; basis not saturated")
    if len(lineality) == 1 and all(x > 0 for x in lineality[0]):
        # e.g. homogeneous supports: shift so the smallest ratio is zero
        g = lineality[0]
        t = min(a // b for a, b in zip(u, g))
        u = tuple(a - t * b for a, b in zip(u, g))
    elif lineality:
        H, _ = hnf_with_transform([list(r) for r in lineality])
        u = list(u)
        for row in H:
            if not any(row):
                continue
            p = next(j for j, a in enumerate(row) if a)
            q = u[p] // row[p]
            if q:
                u = [a - q * b for a, b in zip(u, row)]
        u = tuple(u)
    return u


def _compute_geometry(points: Iterable[Sequence[int]], d: int) -> tuple[list[Point], _Geometry]:
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if not pts:
        raise ValueError("conv of an empty point set")
    for p in pts:
        if len(p) != d:
            raise DimensionMismatch(f"point {p} is not in Z^{d}")
    origin = pts[0]
    diffs = [tuple(a - b for a, b in zip(p, origin)) for p in pts[1:]]
    basis = saturated_basis(diffs, d)
    k = len(basis)
    normals = integer_kernel([list(b) for b in basis]) if k else [tuple(int(i == j) for j in range(d)) for i in range(d)]
    if k == d:
        normals = []
    equations = [(tuple(n), dot(n, origin)) for n in normals]
    local = {p: tuple(echelon_coordinates(basis, [a - b for a, b in zip(p, origin)])) for p in pts} if k else {p: () for p in pts}
    hyper = _hull_local(list(local.values()), k)
    on = []
    for n, off in hyper:
        on.append(frozenset(p for p in pts if dot(n, local[p]) == off))
    if k == 0:
        verts = [origin]
    else:
        verts = []
        for p in pts:
            ns = [hyper[i][0] for i, s in enumerate(on) if p in s]
            if len(ns) >= k and rank([list(x) for x in ns]) == k:
                verts.append(p)
    vset = set(verts)
    facets = []
    for (n, off), s in zip(hyper, on):
        fv = frozenset(s & vset)
        amb = _lift_functional(basis, n, normals)
        facets.append((n, off, Facet(amb, dot(amb, next(iter(fv))), fv)))
    facets.sort(key=lambda t: t[2].normal)
    return verts, _Geometry(origin, basis, equations, facets)


# ------------------------------------------------------------ public surface

def conv(points: Iterable[Sequence[int]]) -> LatticePolytope:
    """Convex hull of a finite nonempty set of lattice points."""
    pts = [tuple(int(x) for x in p) for p in points]
    if not pts:
        raise ValueError("conv of an empty point set")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise DimensionMismatch("points of mixed dimension")
    verts, geom = _compute_geometry(pts, d)
    P = LatticePolytope(d, tuple(sorted(verts)))
    # facet data already computed on a superset: only the origin may differ
    if geom.origin == P.vertices[0]:
        P.__dict__["_geom"] = geom
    return P


def minkowski_sum(P: LatticePolytope, R: LatticePolytope) -> LatticePolytope:
    if P.ambient_dim != R.ambient_dim:
        raise DimensionMismatch("Minkowski sum of polytopes in different ambient spaces")
    return conv({tuple(a + b for a, b in zip(p, r)) for p in P.vertices for r in R.vertices})


def minkowski_sum_all(polytopes: Sequence[LatticePolytope], ambient_dim: Optional[int] = None) -> LatticePolytope:
    """Sum of a list of polytopes; the empty sum is the origin."""
    if not polytopes:
        if ambient_dim is None:
            raise ValueError("empty sum needs an ambient dimension")
        return LatticePolytope(ambient_dim, ((0,) * ambient_dim,))
    return reduce(minkowski_sum, polytopes)


def _check_dir(P: LatticePolytope, w: Sequence) -> None:
    if len(w) != P.ambient_dim:
        raise DimensionMismatch(f"direction of length {len(w)} for a polytope in Z^{P.ambient_dim}")


def support_value(P: LatticePolytope, w: Sequence) -> Fraction:
    """min { w.v : v in P }."""
    _check_dir(P, w)
    return min(dot(w, v) for v in P.vertices)


def face_in_direction(P: LatticePolytope, w: Sequence) -> LatticePolytope:
    """The face of P on which w is minimised."""
    _check_dir(P, w)
    vals = [dot(w, v) for v in P.vertices]
    m = min(vals)
    return LatticePolytope(P.ambient_dim, tuple(v for v, x in zip(P.vertices, vals) if x == m))


def normalized_volume(P: LatticePolytope) -> int:
    """dim(P)! times the volume of P in the lattice of its affine span (0 for points)."""
    k = P.dim
    if k == 0:
        return 0
    return _nvol(P)


def _nvol(P: LatticePolytope) -> int:
    k = P.dim
    if k == 0:
        return 1
    g = P._geom
    loc = [tuple(echelon_coordinates(g.basis, [a - b for a, b in zip(v, g.origin)])) for v in P.vertices]
    if k == 1:
        xs = [c[0] for c in loc]
        return max(xs) - min(xs)
    if k == 2:
        ring = _monotone_chain(loc)
        s = sum(a[0] * b[1] - a[1] * b[0] for a, b in zip(ring, ring[1:] + ring[:1]))
        return abs(s)
    # pyramid decomposition from a fixed vertex: lattice height times facet volume
    apex_local = loc[0]
    total = 0
    for n, off, f in g.facets:
        h = dot(n, apex_local) - off
        if h:
            total += h * _nvol(_from_vertices(sorted(f.vertices), P.ambient_dim))
    return total


def mixed_volume(polytopes: Sequence[LatticePolytope]) -> int:
    """Normalised mixed volume of k polytopes whose sum is k-dimensional.

    Normalised so that MV(P, ..., P) equals ``normalized_volume(P)``; this is
    the number of solutions of a generic system with these Newton polytopes.
    Inputs whose sum is not k-dimensional give 0; the empty list gives 1.
    """
    k = len(polytopes)
    if k == 0:
        return 1
    d = polytopes[0].ambient_dim
    if any(P.ambient_dim != d for P in polytopes):
        raise DimensionMismatch("mixed volume of polytopes in different ambient spaces")
    full = minkowski_sum_all(polytopes)
    if full.dim != k:
        return 0
    total = 0
    for r in range(1, k + 1):
        for S in combinations(range(k), r):
            PS = minkowski_sum_all([polytopes[i] for i in S])
            if PS.dim == k:
                total += (-1) ** (k - r) * _nvol(PS)
    q, rem = divmod(total, factorial(k))
    if rem:
        raise ArithmeticError("inclusion-exclusion did not produce an integer")
    return q


def lattice_points(P: LatticePolytope) -> list[Point]:
    """All points of Z^d in P, sorted lexicographically."""
    g = P._geom
    k = P.dim
    if k == 0:
        return [P.vertices[0]]
    loc = np.array([echelon_coordinates(g.basis, [a - b for a, b in zip(v, g.origin)]) for v in P.vertices], dtype=np.int64)
    lo, hi = loc.min(axis=0), loc.max(axis=0)
    axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, k)
    keep = np.ones(len(grid), dtype=bool)
    for n, off, _ in g.facets:
        keep &= grid.dot(np.array(n, dtype=np.int64)) >= off
    grid = grid[keep]
    B = np.array(g.basis, dtype=np.int64)
    pts = grid.dot(B) + np.array(g.origin, dtype=np.int64)
    return sorted(tuple(int(x) for x in p) for p in pts)


# ----------------------------------------------------------------- normal fan

@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone given by ray and lineality generators."""
    ambient_dim: int
    rays: tuple[Point, ...]
    lineality: tuple[Point, ...] = ()
    face: Optional[LatticePolytope] = field(default=None, compare=False)

    @cached_property
    def dim(self) -> int:
        gens = [list(g) for g in self.rays + self.lineality]
        return rank(gens) if gens else 0

    @cached_property
    def witness(self) -> tuple[Fraction, ...]:
        """Barycentre of the ray generators: a point of the relative interior."""
        if not self.rays:
            return tuple(Fraction(0) for _ in range(self.ambient_dim))
        m = len(self.rays)
        return tuple(Fraction(sum(r[i] for r in self.rays), m) for i in range(self.ambient_dim))

    def span_basis(self) -> list[Point]:
        return saturated_basis([list(g) for g in self.rays + self.lineality], self.ambient_dim)


@dataclass(frozen=True)
class NormalFan:
    polytope: LatticePolytope
    cones: tuple[Cone, ...]

    @property
    def lineality(self) -> tuple[Point, ...]:
        return self.cones[0].lineality if self.cones else ()

    def maximal_cones(self) -> list[Cone]:
        return [c for c in self.cones if c.face.dim == 0]

    def rays(self) -> list[Point]:
        return sorted({r for c in self.cones for r in c.rays})


def normal_fan(P: LatticePolytope) -> NormalFan:
    """Inner normal fan: one cone per nonempty face F, all w with face_w(P) = F."""
    g = P._geom
    lin = tuple(tuple(n) for n, _ in g.equations)
    cones = []
    for F in P.faces:
        fv = set(F.vertices)
        rays = tuple(sorted({f.normal for f in P.facets if fv <= f.vertices}))
        cones.append(Cone(P.ambient_dim, rays, lin, F))
    cones.sort(key=lambda c: (-c.face.dim, c.rays))
    return NormalFan(P, tuple(cones))


def cone_inequalities(generators: Sequence[Sequence[int]], k: int) -> list[Point]:
    """Primitive inner facet normals of a full dimensional cone in Z^k."""
    gens = sorted({primitive(g) for g in generators if any(g)})
    if k == 1:
        pos = any(g[0] > 0 for g in gens)
        neg = any(g[0] < 0 for g in gens)
        return [] if pos and neg else [(1,)] if pos else [(-1,)]
    return [n for n, _ in _supporting_hyperplanes(gens, k, through_origin=True)]


def product_points(lo: Sequence[int], hi: Sequence[int]) -> Iterable[Point]:
    return product(*[range(a, b + 1) for a, b in zip(lo, hi)])
