"""Exact integer and rational linear algebra on small dense matrices.

Matrices are lists of rows of Python ints (or Fractions where noted).  Nothing
here touches floating point; sizes are tiny (at most a handful of rows and
columns) so clarity wins over asymptotics.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

IntMatrix = list[list[int]]


def _copy(M) -> list[list]:
    return [list(r) for r in M]


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def clear_denominators(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector with the same direction."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return primitive([int(Fraction(x) * den) for x in v])


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def det(M: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    A = _copy(M)
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rref(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    A = [[Fraction(x) for x in r] for r in M]
    if not A:
        return A, []
    m, n = len(A), len(A[0])
    pivots: list[int] = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, m) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        p = A[row][col]
        A[row] = [x / p for x in A[row]]
        for i in range(m):
            if i != row and A[i][col] != 0:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    return A, pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M or not len(M[0]):
        return 0
    return len(rref(M)[1])


def solve_rational(A: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """One solution x of A x = b over Q, or None if inconsistent."""
    m = len(A)
    if m == 0:
        return []
    n = len(A[0])
    aug = [list(A[i]) + [b[i]] for i in range(m)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for r, c in enumerate(piv):
        x[c] = R[r][n]
    return x


def hnf_with_transform(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns (H, U) with U unimodular and U @ M == H.  H is in row echelon form
    with positive pivots and entries above each pivot reduced into [0, pivot).
    Zero rows sit at the bottom.
    """
    A = [[int(x) for x in r] for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    row = 0
    for col in range(n):
        if row == m:
            break
        while True:
            nz = [i for i in range(row, m) if A[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][col]))
            A[row], A[piv] = A[piv], A[row]
            U[row], U[piv] = U[piv], U[row]
            clean = True
            for i in range(row + 1, m):
                if A[i][col] == 0:
                    continue
                q = A[i][col] // A[row][col]
                A[i] = [a - q * b for a, b in zip(A[i], A[row])]
                U[i] = [a - q * b for a, b in zip(U[i], U[row])]
                if A[i][col] != 0:
                    clean = False
            if clean:
                break
        if A[row][col] == 0:
            continue
        if A[row][col] < 0:
            A[row] = [-a for a in A[row]]
            U[row] = [-a for a in U[row]]
        p = A[row][col]
        for i in range(row):
            q = A[i][col] // p
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[row])]
                U[i] = [a - q * b for a, b in zip(U[i], U[row])]
        row += 1
    return A, U


def hermite_basis(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """A basis (HNF rows) of the lattice generated by the given integer vectors."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    H, _ = hnf_with_transform(vectors)
    return [tuple(r) for r in H if any(r)]


def integer_kernel(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> list[tuple[int, ...]]:
    """Z-basis of {x in Z^n : M x = 0}, as HNF rows."""
    if not M:
        if ncols is None:
            raise ValueError("need ncols for an empty matrix")
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    n = len(M[0])
    T = [[M[i][j] for i in range(len(M))] for j in range(n)]
    H, U = hnf_with_transform(T)
    ker = [U[i] for i in range(n) if not any(H[i])]
    return hermite_basis(ker) if ker else []


def saturated_basis(vectors: Sequence[Sequence[int]], ambient_dim: int) -> list[tuple[int, ...]]:
    """Z-basis (HNF rows) of span_R(vectors) intersected with Z^d."""
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return []
    normals = integer_kernel(vectors)
    if not normals:
        return [tuple(int(i == j) for j in range(ambient_dim)) for i in range(ambient_dim)]
    return integer_kernel([list(r) for r in normals])


def echelon_coordinates(basis: Sequence[Sequence[int]], x: Sequence) -> list:
    """Coordinates c with c @ basis == x, for ``basis`` in row echelon form.

    ``x`` must lie in the rational row span; exact rationals are returned
    (integers when x is in the lattice the basis generates).
    """
    c = []
    rem = [Fraction(v) for v in x]
    for row in basis:
        p = next(j for j, a in enumerate(row) if a != 0)
        q = rem[p] / row[p]
        c.append(q)
        if q:
            rem = [a - q * b for a, b in zip(rem, row)]
    if any(rem):
        raise ValueError("vector is not in the span of the basis")
    return [int(q) if q.denominator == 1 else q for q in c]


def integer_solve(B: Sequence[Sequence[int]], rhs: Sequence[int]) -> Optional[tuple[int, ...]]:
    """An integer u with B @ u == rhs, or None if none exists."""
    k = len(B)
    if k == 0:
        raise ValueError("empty system")
    n = len(B[0])
    T = [[B[i][j] for i in range(k)] for j in range(n)]
    # U @ B^T = H, so B @ U^T = H^T, lower triangular in the first rows of H.
    H, U = hnf_with_transform(T)
    r = sum(1 for row in H if any(row))
    y = []
    for idx in range(r):
        row = H[idx]
        p = next(j for j, a in enumerate(row) if a != 0)
        acc = rhs[p] - sum(y[t] * H[t][p] for t in range(idx))
        if acc % row[p]:
            return None
        y.append(acc // row[p])
    u = [sum(y[t] * U[t][j] for t in range(r)) for j in range(n)]
    if any(dot(Bi, u) != ri for Bi, ri in zip(B, rhs)):
        return None
    return tuple(u)


def smith_diagonal(M: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero elementary divisors d_1 | d_2 | ... of an integer matrix."""
    A = [[int(x) for x in r] for r in M]
    divisors: list[int] = []
    while A and A[0] and any(any(r) for r in A):
        m, n = len(A), len(A[0])
        while True:
            # smallest nonzero entry to the corner
            _, i0, j0 = min((abs(A[i][j]), i, j) for i in range(m) for j in range(n) if A[i][j])
            A[0], A[i0] = A[i0], A[0]
            for r in A:
                r[0], r[j0] = r[j0], r[0]
            p = A[0][0]
            dirty = False
            for i in range(1, m):
                q = A[i][0] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[0])]
                dirty |= A[i][0] != 0
            for j in range(1, n):
                q = A[0][j] // p
                if q:
                    for r in A:
                        r[j] -= q * r[0]
                dirty |= A[0][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(1, m) for j in range(1, n) if A[i][j] % p), None)
            if bad is None:
                break
            A[0] = [a + b for a, b in zip(A[0], A[bad[0]])]
        divisors.append(abs(A[0][0]))
        A = [r[1:] for r in A[1:]]
    return divisors


def sublattice_index(generators: Sequence[Sequence[int]]) -> int:
    """Index of the lattice spanned by ``generators`` in its saturation."""
    gens = [list(g) for g in generators]
    divs = smith_diagonal(gens) if gens else []
    if not divs:
        raise ValueError("generators have rank 0")
    out = 1
    for d in divs:
        out *= d
    return out


def lattice_contains(basis: Sequence[Sequence[int]], x: Sequence[int]) -> bool:
    """Whether x lies in the Z-span of ``basis`` (rows)."""
    if not basis:
        return not any(x)
    return integer_solve([[basis[i][j] for i in range(len(basis))] for j in range(len(basis[0]))], list(x)) is not None
