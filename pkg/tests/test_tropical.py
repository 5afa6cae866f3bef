from fractions import Fraction
from itertools import combinations, product
from math import gcd

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from tropimplicit import fixtures as fx
from tropimplicit.polytope import conv, face_in_direction, minkowski_sum_all, mixed_volume
from tropimplicit.tropical import (
    NonSmoothPoint, NotOnCycle, SupportSystem, enumerate_cone_pairs, is_hypersurface, is_solvable,
    multiplicity_at, pair_index, psi,
)


def minors_gcd(M):
    r = sympy.Matrix(M).rank()
    g = 0
    for rows in combinations(range(len(M)), r):
        for cols in combinations(range(len(M[0])), r):
            g = gcd(g, int(sympy.Matrix([[M[i][j] for j in cols] for i in rows]).det()))
    return g


@pytest.fixture(scope="module")
def bicubic_cycle():
    return enumerate_cone_pairs(SupportSystem.from_supports([list(f) for f in fx.BICUBIC]))


def test_bicubic_psi_matrix(bicubic_cycle):
    system = bicubic_cycle.system
    assert sorted(system.fan.rays()) == sorted(fx.BICUBIC_NORMALS)
    for w, col in zip(fx.BICUBIC_NORMALS, fx.BICUBIC_PSI):
        assert psi(system, w) == col


def test_bicubic_pairs(bicubic_cycle):
    got = sorted((tuple(sorted(fx.BICUBIC_NORMALS.index(r) + 1 for r in p.cone.rays)),
                  tuple(j + 1 for j in p.J), p.index, p.mv) for p in bicubic_cycle.pairs)
    assert got == sorted(fx.BICUBIC_PAIRS)


def test_index_is_gcd_of_maximal_minors(bicubic_cycle):
    for cyc in (bicubic_cycle, enumerate_cone_pairs(SupportSystem.from_supports(fx.THREE_TRIANGLES))):
        n = cyc.ambient_dim
        for p in cyc.pairs:
            gens = [[sum(b[k] * face_in_direction(P, p.witness_w).vertices[0][k] for k in range(cyc.dim))
                     for P in cyc.system.polytopes] for b in p.cone.span_basis()]
            gens += [[int(i == j) for i in range(n)] for j in p.J]
            assert p.index == minors_gcd(gens) == pair_index(cyc, p)


def test_pair_cones_lie_in_the_image_of_psi(bicubic_cycle):
    # witness of each pair maps into its own piece
    for p in bicubic_cycle.pairs:
        assert p.geometry.contains(psi(bicubic_cycle.system, p.witness_w))


def test_multiplicity_errors(bicubic_cycle):
    with pytest.raises(NotOnCycle):
        multiplicity_at(bicubic_cycle, (1, 1, 1))
    # the origin is the common apex of all pieces
    with pytest.raises(NonSmoothPoint):
        multiplicity_at(bicubic_cycle, (0, 0, 0))
    # inside the cone e1, e2 with weight 9 (J = {1, 2}, C = 0)
    assert multiplicity_at(bicubic_cycle, (1, 2, 0)) == 9


def test_transversal_ray():
    cyc = enumerate_cone_pairs(SupportSystem.from_supports(fx.TRANSVERSAL))
    assert psi(cyc.system, (1, 1, 0)) == (1, 1, 0, 1, 0, 0)
    rays = {r for p in cyc.pairs for r in p.psi_rays}
    assert (1, 1, 0, 1, 0, 0) in rays
    assert cyc.lineality() == [(1, 1, 1, 1, 1, 1)]
    assert cyc.contains((1, 1, 0, 1, 0, 0))


def random_supports(rng, d, n, max_pts=3, lo=-2, hi=2):
    return [[tuple(int(x) for x in rng.integers(lo, hi + 1, size=d)) for _ in range(int(rng.integers(1, max_pts + 1)))]
            for _ in range(n)]


def test_is_hypersurface_against_brute_force():
    rng = np.random.default_rng(7)
    seen = {True: 0, False: 0}
    for trial in range(300):
        d = int(rng.integers(1, 4))
        sups = random_supports(rng, d, d + 1, max_pts=2, lo=-1, hi=1)
        if trial % 2 and d > 1:
            # squash half of the supports onto a line to make rank failures common
            u = rng.integers(-1, 2, size=d)
            for i in rng.choice(d + 1, size=d, replace=False):
                sups[i] = [tuple(int(k * x) for x in u) for k in rng.integers(-2, 3, size=2)]
        system = SupportSystem.from_supports(sups)
        brute = any(np.linalg.matrix_rank(np.array(choice, dtype=float)) == d
                    for choice in product(*system.supports))
        assert is_hypersurface(system) == brute, sups
        seen[brute] += 1
    assert seen[True] > 20 and seen[False] > 20


def test_is_solvable_matches_mixed_volume():
    # solvability of the initial system against positivity of the mixed volume
    rng = np.random.default_rng(3)
    for trial in range(100):
        d = int(rng.integers(1, 4))
        sups = random_supports(rng, d, d, max_pts=3)
        system = SupportSystem.from_supports(sups)
        w = tuple(int(x) for x in rng.integers(-2, 3, size=d))
        faces = [face_in_direction(P, w) for P in system.polytopes]
        J = tuple(range(d))
        assert is_solvable(system, w, J) == (mixed_volume(faces) > 0)


def test_monomial_system_only_empty_J():
    cyc = enumerate_cone_pairs(SupportSystem.from_supports([[(1, 2)], [(0, 1)], [(3, 0)]]))
    assert cyc.pairs and all(p.J == () for p in cyc.pairs)
    assert cyc.contains((1, 0, 3)) and cyc.contains((2, 1, 0)) and not cyc.contains((0, 0, 1))


def test_image_of_psi_is_covered():
    rng = np.random.default_rng(11)
    system = SupportSystem.from_supports(fx.THREE_TRIANGLES)
    cyc = enumerate_cone_pairs(system)
    for _ in range(50):
        w = tuple(int(x) for x in rng.integers(-9, 10, size=2))
        assert cyc.contains(psi(system, w))
        # and moving off along a coordinate that stays solvable remains on the cycle
        for i in range(3):
            g = list(psi(system, w))
            g[i] += 1
            if is_solvable(system, w, (i,)) and minkowski_sum_all([face_in_direction(system.polytopes[i], w)]).dim >= 1:
                assert cyc.contains(tuple(g))
