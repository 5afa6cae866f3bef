"""Tropical variety of the relation ideal of generic Laurent polynomials.

Given supports A_1..A_n in Z^d with Newton polytopes P_i, the tropical
variety is the union of the cones

    Psi(C) + R_{>=0}^J

over cones C of the normal fan of P = P_1 + ... + P_n and index sets J such
that for every K in J the w-face of P_K has dimension at least |K| (w any
point of the relative interior of C).  Psi is the vector of support
functions of the P_i.  Each maximal piece carries the weight
index(C, J) * MixedVolume(face_w(P_j) : j in J).

The union is kept as a plain list of pieces; it is not a fan.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Optional, Sequence

from .intlinalg import (
    dot,
    echelon_coordinates,
    integer_kernel,
    integer_solve,
    primitive,
    rank,
    saturated_basis,
    sublattice_index,
)
from .polytope import (
    Cone,
    DimensionMismatch,
    LatticePolytope,
    NormalFan,
    Point,
    cone_inequalities,
    conv,
    face_in_direction,
    minkowski_sum_all,
    mixed_volume,
    normal_fan,
    support_value,
)


class NotOnCycle(ValueError):
    pass


class NonSmoothPoint(ValueError):
    """The point lies on the boundary of a piece or where pieces of different span meet."""


@dataclass(frozen=True)
class SupportSystem:
    dim: int
    supports: tuple[tuple[Point, ...], ...]

    def __post_init__(self):
        if not self.supports:
            raise ValueError("need at least one support")
        for i, A in enumerate(self.supports):
            if not A:
                raise ValueError(f"support {i + 1} is empty")
            for a in A:
                if len(a) != self.dim:
                    raise DimensionMismatch(f"support {i + 1}: exponent {a} is not in Z^{self.dim}")

    @classmethod
    def from_supports(cls, supports: Sequence[Sequence[Sequence[int]]]) -> "SupportSystem":
        sups = tuple(tuple(sorted({tuple(int(x) for x in a) for a in A})) for A in supports)
        if not sups or not sups[0]:
            raise ValueError("need nonempty supports")
        return cls(len(sups[0][0]), sups)

    @property
    def n(self) -> int:
        return len(self.supports)

    @cached_property
    def polytopes(self) -> tuple[LatticePolytope, ...]:
        return tuple(conv(A) for A in self.supports)

    @cached_property
    def sum_polytope(self) -> LatticePolytope:
        return minkowski_sum_all(self.polytopes)

    @cached_property
    def fan(self) -> NormalFan:
        return normal_fan(self.sum_polytope)

    def is_homogeneous(self) -> bool:
        """All exponents share one positive coordinate sum."""
        sums = {sum(a) for A in self.supports for a in A}
        return len(sums) == 1 and next(iter(sums)) > 0


def psi(system: SupportSystem, w: Sequence) -> tuple:
    """Tropicalisation of the map: the support functions of the P_i at w."""
    if len(w) != system.dim:
        raise DimensionMismatch(f"w has length {len(w)}, expected {system.dim}")
    return tuple(support_value(P, w) for P in system.polytopes)


def _faces_solvable(faces: Sequence[LatticePolytope], J: Sequence[int], d: int) -> bool:
    # every K in J with dim face(P_K) >= |K|; any failure is final
    for r in range(1, len(J) + 1):
        for K in combinations(J, r):
            if minkowski_sum_all([faces[k] for k in K]).dim < r:
                return False
    return True


def is_solvable(system: SupportSystem, w: Sequence, J: Sequence[int]) -> bool:
    """Whether the initial system in_w(f_j) = 0, j in J, has a torus solution.

    Decided combinatorially: for all K in J, face_w(P_K) has dimension >= |K|.
    ``J`` holds 0-based polynomial indices.
    """
    if len(w) != system.dim:
        raise DimensionMismatch(f"w has length {len(w)}, expected {system.dim}")
    J = tuple(J)
    if any(j < 0 or j >= system.n for j in J):
        raise ValueError(f"index set {J} out of range")
    faces = [face_in_direction(P, w) for P in system.polytopes]
    return _faces_solvable(faces, J, system.dim)


class PolyhedralCone:
    """A cone in Z^n by generators, with an exact H-representation in its span."""

    def __init__(self, generators: Sequence[Sequence[int]], ambient_dim: int):
        self.ambient_dim = ambient_dim
        self.generators = tuple(sorted({primitive(g) for g in generators if any(g)}))
        self.span_basis = saturated_basis([list(g) for g in self.generators], ambient_dim)
        self.dim = len(self.span_basis)
        self.equations = integer_kernel([list(b) for b in self.span_basis]) if self.dim else [
            tuple(int(i == j) for j in range(ambient_dim)) for i in range(ambient_dim)]
        if self.dim == ambient_dim:
            self.equations = []
        self.inequalities: list[Point] = []
        if self.dim:
            local = [echelon_coordinates(self.span_basis, g) for g in self.generators]
            for lam in cone_inequalities(local, self.dim):
                u = integer_solve([list(b) for b in self.span_basis], list(lam))
                self.inequalities.append(u)

    def in_span(self, x: Sequence) -> bool:
        return all(dot(e, x) == 0 for e in self.equations)

    def contains(self, x: Sequence) -> bool:
        return self.in_span(x) and all(dot(u, x) >= 0 for u in self.inequalities)

    def in_relative_interior(self, x: Sequence) -> bool:
        return self.in_span(x) and all(dot(u, x) > 0 for u in self.inequalities)

    def lineality_dim(self) -> int:
        neg = [tuple(-a for a in g) for g in self.generators]
        return sum(1 for g in neg if self.contains(g))

    def span_key(self) -> tuple:
        return tuple(self.span_basis)


@dataclass
class ConePair:
    """A maximal piece Psi(C) + R_{>=0}^J of the tropical variety."""
    cone: Cone
    J: tuple[int, ...]
    witness_w: tuple
    index: int
    mv: int
    psi_rays: tuple[Point, ...]
    psi_lineality: tuple[Point, ...]
    geometry: PolyhedralCone = field(repr=False)

    @property
    def weight(self) -> int:
        return self.index * self.mv

    @property
    def label(self) -> str:
        rays = ",".join("(" + ",".join(str(x) for x in r) + ")" for r in self.cone.rays)
        js = ",".join(f"e{j + 1}" for j in self.J)
        return "{" + ";".join(s for s in (rays, js) if s) + "}"


@dataclass
class TropicalCycle:
    system: SupportSystem
    pairs: list[ConePair]

    @property
    def ambient_dim(self) -> int:
        return self.system.n

    @property
    def dim(self) -> int:
        return self.system.dim

    def lineality(self) -> list[Point]:
        """Saturated basis of Psi(lineality of the normal fan), shared by every piece."""
        lin = self.system.fan.lineality
        if not lin:
            return []
        images = [_psi_linear(self.system, self.system.fan.cones[0], v) for v in lin]
        return saturated_basis([list(g) for g in images if any(g)], self.ambient_dim)

    def contains(self, gamma: Sequence) -> bool:
        return any(p.geometry.contains(gamma) for p in self.pairs)

    def covering_pairs(self, gamma: Sequence) -> list[ConePair]:
        return [p for p in self.pairs if p.geometry.contains(gamma)]

    def multiplicity_at(self, gamma: Sequence) -> int:
        return multiplicity_at(self, gamma)


def _psi_linear(system: SupportSystem, cone: Cone, u: Sequence[int]) -> Point:
    """Psi restricted to the closed cone C is linear; evaluate its extension at u."""
    w = cone.witness
    out = []
    for P in system.polytopes:
        x = face_in_direction(P, w).vertices[0]
        out.append(dot(u, x))
    return tuple(out)


def enumerate_cone_pairs(system: SupportSystem) -> TropicalCycle:
    """All maximal pieces (C, J) of the tropical variety, with index and mixed volume."""
    d, n = system.dim, system.n
    unit = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    pairs: list[ConePair] = []
    for cone in system.fan.cones:
        w = cone.witness
        faces = [face_in_direction(P, w) for P in system.polytopes]
        k = d - cone.dim
        xs = [F.vertices[0] for F in faces]

        def lin(u):
            return tuple(dot(u, x) for x in xs)

        psi_rays = tuple(lin(r) for r in cone.rays)
        psi_lin = tuple(lin(l) for l in cone.lineality)
        base_gens = [list(g) for g in psi_rays] + [list(g) for g in psi_lin] + [[-a for a in g] for g in psi_lin]
        span = cone.span_basis()
        lattice_base = [list(lin(b)) for b in span]
        for J in combinations(range(n), k):
            if not _faces_solvable(faces, J, d):
                continue
            gens = base_gens + [list(unit[j]) for j in J]
            if rank([g for g in gens if any(g)] or [[0] * n]) != d:
                continue
            index = sublattice_index(lattice_base + [list(unit[j]) for j in J])
            mv = mixed_volume([faces[j] for j in J]) if J else 1
            if mv <= 0:
                raise ArithmeticError(f"solvable pair {cone.rays}, {J} has mixed volume {mv}")
            pairs.append(ConePair(cone, tuple(J), w, index, mv, psi_rays, psi_lin,
                                  PolyhedralCone(gens, n)))
    return TropicalCycle(system, pairs)


def pair_index(cycle: TropicalCycle, pair: ConePair) -> int:
    """index(C, J): lattice index of Psi(C cap Z^d) + Z^J in its saturation."""
    system = cycle.system
    if pair.cone.dim + len(pair.J) != system.dim:
        raise ValueError("pair is not maximal")
    n = system.n
    gens = [list(_psi_linear(system, pair.cone, b)) for b in pair.cone.span_basis()]
    gens += [[int(i == j) for i in range(n)] for j in pair.J]
    return sublattice_index(gens)


def multiplicity_at(cycle: TropicalCycle, gamma: Sequence) -> int:
    """Sum of index * mixed volume over the pieces containing gamma.

    gamma must be a smooth point: inside the relative interior of every
    piece that contains it, and all those pieces must span one subspace.
    """
    if len(gamma) != cycle.ambient_dim:
        raise DimensionMismatch(f"gamma has length {len(gamma)}, expected {cycle.ambient_dim}")
    cover = cycle.covering_pairs(gamma)
    if not cover:
        raise NotOnCycle(f"{tuple(gamma)} is not on the tropical variety")
    spans = {p.geometry.span_key() for p in cover}
    if len(spans) > 1:
        raise NonSmoothPoint(f"pieces of different span meet at {tuple(gamma)}")
    if any(not p.geometry.in_relative_interior(gamma) for p in cover):
        raise NonSmoothPoint(f"{tuple(gamma)} lies on the boundary of a piece")
    return sum(p.weight for p in cover)


def is_hypersurface(system: SupportSystem) -> bool:
    """Whether one can pick a_i in A_i so that the d x (d+1) matrix has rank d.

    Rado's theorem for the partition of the supports: an independent partial
    transversal of size d exists iff every K of the n = d + 1 supports has
    rank(union of A_k, k in K) >= |K| - 1.
    """
    d, n = system.dim, system.n
    if n != d + 1:
        raise ValueError(f"hypersurface criterion needs n = d + 1, got n={n}, d={d}")
    for r in range(1, n + 1):
        for K in combinations(range(n), r):
            vecs = [list(a) for k in K for a in system.supports[k] if any(a)]
            rk = rank(vecs) if vecs else 0
            if rk < r - (n - d):
                return False
    return True


def image_codimension(system: SupportSystem) -> int:
    """n minus the rank of the image, read off as n - (dimension of the tropical variety)."""
    return system.n - system.dim
