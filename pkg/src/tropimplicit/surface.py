"""Embedded graph of a two-dimensional tropical variety.

A tropical surface in R^n (or a d-dimensional cycle whose pieces all contain
a common (d-2)-dimensional lineality space) is drawn as a graph on a sphere:
each 2-dimensional piece becomes a great-circle arc between rays.  Arcs are
cut at every pairwise intersection, weights of overlapping sub-arcs are
added, and two-valent nodes sitting inside a straight arc with equal weight
on both sides are erased again.

Everything is exact: rays are primitive integer vectors in the quotient
lattice Z^n / L, where L is the saturated lineality lattice.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

from .intlinalg import (
    dot,
    echelon_coordinates,
    integer_kernel,
    primitive,
    rank,
    saturated_basis,
    solve_rational,
)
from .polytope import Point, _lift_functional, cone_inequalities, face_in_direction, mixed_volume, normalized_volume
from .tropical import ConePair, SupportSystem, TropicalCycle, psi


@dataclass(frozen=True)
class Node:
    label: str
    ray: Point           # primitive ray in Z^n (canonical coset representative)
    quotient: Point      # the same ray in the quotient lattice


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    weight: int


@dataclass
class SurfaceGraph:
    nodes: list[Node]
    edges: list[Edge]
    lineality: list[Point]

    def degree(self, i: int) -> int:
        return sum(1 for e in self.edges if i in (e.u, e.v))

    def node_index(self, label: str) -> int:
        for i, nd in enumerate(self.nodes):
            if nd.label == label:
                return i
        raise KeyError(label)

    def edge_map(self) -> dict[frozenset, int]:
        """Edges keyed by the pair of node labels."""
        return {frozenset((self.nodes[e.u].label, self.nodes[e.v].label)): e.weight for e in self.edges}

    def to_dot(self) -> str:
        lines = ["graph tropical {"]
        for i, nd in enumerate(self.nodes):
            ray = ",".join(str(x) for x in nd.ray)
            lines.append(f'  n{i} [label="{nd.label}", ray="{ray}"];')
        for e in self.edges:
            lines.append(f'  n{e.u} -- n{e.v} [label="{e.weight}", weight={e.weight}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


class Quotient:
    """The projection Z^n -> Z^n / L for a saturated lattice L."""

    def __init__(self, lineality: Sequence[Sequence[int]], n: int):
        self.n = n
        self.lineality = [tuple(l) for l in lineality]
        if self.lineality:
            self.rows = integer_kernel([list(l) for l in self.lineality])
        else:
            self.rows = [tuple(int(i == j) for j in range(n)) for i in range(n)]

    def __call__(self, x: Sequence[int]) -> Point:
        return tuple(dot(r, x) for r in self.rows)

    def lift(self, y: Sequence[int]) -> Point:
        if not self.lineality:
            return tuple(y)
        return _lift_functional(self.rows, list(y), self.lineality)


def _neg(x):
    return tuple(-a for a in x)


def _arcs_of_cone(gens: list[Point]) -> list[tuple[Point, Point]]:
    """Split a 2-dimensional cone into pointed arcs (pairs of primitive rays)."""
    gens = sorted({primitive(g) for g in gens if any(g)})
    m = len(gens[0])
    basis = saturated_basis([list(g) for g in gens], m)
    if len(basis) != 2:
        raise ValueError(f"piece projects to a cone of dimension {len(basis)}, expected 2")
    local = [tuple(echelon_coordinates(basis, g)) for g in gens]

    def glob(c):
        return primitive(tuple(c[0] * a + c[1] * b for a, b in zip(*basis)))

    ineqs = cone_inequalities(local, 2)
    if not ineqs:
        b1, b2 = glob((1, 0)), glob((0, 1))
        return [(b1, b2), (b2, _neg(b1)), (_neg(b1), _neg(b2)), (_neg(b2), b1)]
    if len(ineqs) == 1:
        nrm = ineqs[0]
        a = glob((-nrm[1], nrm[0]))
        inner = next(g for g, c in zip(gens, local) if dot(nrm, c) > 0)
        return [(a, inner), (inner, _neg(a))]
    ends = []
    for nrm in ineqs:
        ends.append(next(g for g, c in zip(gens, local) if dot(nrm, c) == 0))
    return [tuple(sorted(ends))]


def _arc_coords(arc, r) -> Optional[tuple[Fraction, Fraction]]:
    """(alpha, beta) with r = alpha p + beta q, or None when r is off the plane."""
    p, q = arc
    sol = solve_rational([[a, b] for a, b in zip(p, q)], list(r))
    return None if sol is None else (sol[0], sol[1])


def _on_arc(arc, r) -> Optional[Fraction]:
    c = _arc_coords(arc, r)
    if c is None or c[0] < 0 or c[1] < 0:
        return None
    return c[1] / (c[0] + c[1])


def _crossing(a1, a2) -> list[Point]:
    p, q = a1
    r, s = a2
    cols = [p, q, _neg(r), _neg(s)]
    M = [[c[k] for c in cols] for k in range(len(p))]
    if rank(M) != 3:
        return []
    ker = integer_kernel(M)
    x = primitive(tuple(ker[0][0] * a + ker[0][1] * b for a, b in zip(p, q)))
    out = []
    for y in (x, _neg(x)):
        if _on_arc(a1, y) is not None and _on_arc(a2, y) is not None:
            out.append(y)
    return out


def _node_label(ray: Point, system: SupportSystem, psi_rays: dict) -> str:
    if all(x in (0, 1) for x in ray):
        return "e" + "".join(str(i + 1) for i, x in enumerate(ray) if x)
    if ray in psi_rays:
        return "psi(" + ",".join(str(x) for x in psi_rays[ray]) + ")"
    return "[" + ",".join(str(x) for x in ray) + "]"


def surface_graph(cycle: TropicalCycle) -> SurfaceGraph:
    """The weighted embedded graph of a cycle that is a surface modulo lineality."""
    system = cycle.system
    n = system.n
    L = cycle.lineality()
    if system.dim - len(L) != 2:
        raise ValueError(f"graph needs a 2-dimensional cycle modulo lineality, got d={system.dim}, lineality rank {len(L)}")
    quo = Quotient(L, n)

    arcs: list[tuple[tuple[Point, Point], int]] = []
    for pair in cycle.pairs:
        gens = [quo(g) for g in pair.psi_rays]
        gens += [quo(g) for g in pair.psi_lineality] + [_neg(quo(g)) for g in pair.psi_lineality]
        gens += [quo(tuple(int(i == j) for i in range(n))) for j in pair.J]
        for arc in _arcs_of_cone(gens):
            arcs.append((arc, pair.weight))

    nodes = set()
    for (p, q), _ in arcs:
        nodes.update((p, q))
    for (a1, _), (a2, _) in combinations(arcs, 2):
        nodes.update(_crossing(a1, a2))

    weights: dict[tuple[Point, Point], int] = defaultdict(int)
    for arc, w in arcs:
        on = sorted((t, r) for r in nodes if (t := _on_arc(arc, r)) is not None)
        for (_, a), (_, b) in zip(on, on[1:]):
            weights[tuple(sorted((a, b)))] += w

    weights = _coarsen(dict(weights))

    # labels from canonical lifts; Psi images of fan rays get their w
    psi_rays = {}
    for w in system.fan.rays():
        img = quo(psi(system, w))
        if any(img):
            psi_rays.setdefault(quo.lift(primitive(img)), w)
    used = sorted({x for e in weights for x in e}, key=lambda y: quo.lift(y))
    node_list = []
    idx = {}
    for y in used:
        ray = quo.lift(y)
        idx[y] = len(node_list)
        node_list.append(Node(_node_label(ray, system, psi_rays), ray, y))
    order = sorted(range(len(node_list)), key=lambda i: (node_list[i].label, node_list[i].ray))
    remap = {old: new for new, old in enumerate(order)}
    node_list = [node_list[i] for i in order]
    edges = []
    for (a, b), w in weights.items():
        u, v = sorted((remap[idx[a]], remap[idx[b]]))
        edges.append(Edge(u, v, w))
    edges.sort(key=lambda e: (e.u, e.v))
    return SurfaceGraph(node_list, edges, list(L))


def _coarsen(weights: dict) -> dict:
    # erase two-valent nodes strictly inside a straight arc with equal weights
    changed = True
    while changed:
        changed = False
        inc = defaultdict(list)
        for e in weights:
            inc[e[0]].append(e)
            inc[e[1]].append(e)
        for x, es in inc.items():
            if len(es) != 2 or weights[es[0]] != weights[es[1]]:
                continue
            u = es[0][0] if es[0][1] == x else es[0][1]
            v = es[1][0] if es[1][1] == x else es[1][1]
            if u == v or _on_arc((u, v), x) is None or rank([list(u), list(v)]) < 2:
                continue
            c = _arc_coords((u, v), x)
            if c[0] <= 0 or c[1] <= 0:
                continue
            w = weights.pop(es[0])
            weights.pop(es[1])
            key = tuple(sorted((u, v)))
            weights[key] = weights.get(key, 0) + w
            changed = True
            break
    return weights


def _primitive_step(x: Point, y: Point) -> Point:
    """Primitive lattice vector u with {x, u} a basis of span(x, y) cap Z^m, u on y's side."""
    basis = saturated_basis([list(x), list(y)], len(x))
    xl = echelon_coordinates(basis, x)
    yl = echelon_coordinates(basis, y)
    a, b = xl
    # extended gcd: a*s - b*r = 1 -> u = (r, s) has det(x, u) = 1
    g, s0, t0 = _egcd(a, -b)   # a*s0 - b*t0 = g = +-1
    r, s = t0 * g, s0 * g
    u = (r, s)
    if a * yl[1] - b * yl[0] < 0:
        u = (-r, -s)
    return tuple(u[0] * p + u[1] * q for p, q in zip(*basis))


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return a, 1, 0
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def is_balanced(graph: SurfaceGraph) -> bool:
    """Balancing at every node: weighted primitive edge directions sum into the node's own line."""
    for i, nd in enumerate(graph.nodes):
        total = [0] * len(nd.quotient)
        for e in graph.edges:
            if i not in (e.u, e.v):
                continue
            other = graph.nodes[e.v if e.u == i else e.u].quotient
            step = _primitive_step(nd.quotient, other)
            total = [t + e.weight * s for t, s in zip(total, step)]
        if rank([list(nd.quotient), total]) > 1:
            return False
    return True


def _det2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def rule_weights(system: SupportSystem) -> list[tuple[str, Point, Point, int]]:
    """Arc weights from the explicit d = 2 formulas, one entry per great-circle arc.

    Kinds: ("psi-psi", Psi(w), Psi(w'), gcd of 2x2 minors / det(w, w')),
    ("psi-e", Psi(w), e_i, edge length of face_w(P_i) * gcd of the other
    coordinates of Psi(w)), ("e-e", e_i, e_j, mixed area of P_i, P_j).
    Zero Psi(w) and zero weights are skipped.
    """
    if system.dim != 2:
        raise ValueError("rule weights are defined for d = 2")
    n = system.n
    unit = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    out = []
    fan = system.fan
    for cone in fan.cones:
        if len(cone.rays) == 2:
            w, w2 = cone.rays
            a, b = psi(system, w), psi(system, w2)
            if not any(a) or not any(b):
                continue
            g = 0
            for i, j in combinations(range(n), 2):
                g = gcd(g, a[i] * b[j] - a[j] * b[i])
            if g:
                out.append(("psi-psi", tuple(int(x) for x in a), tuple(int(x) for x in b), g // abs(_det2(w, w2))))
        elif len(cone.rays) == 1:
            (w,) = cone.rays
            a = tuple(int(x) for x in psi(system, w))
            for i, P in enumerate(system.polytopes):
                F = face_in_direction(P, w)
                if F.dim != 1:
                    continue
                g = 0
                for k in range(n):
                    if k != i:
                        g = gcd(g, a[k])
                if g:
                    out.append(("psi-e", a, unit[i], normalized_volume(F) * g))
    for i, j in combinations(range(n), 2):
        mv = mixed_volume([system.polytopes[i], system.polytopes[j]])
        if mv:
            out.append(("e-e", unit[i], unit[j], mv))
    return out
