"""Numerical recovery of the implicit equation once its Newton polytope is known.

Every lattice point alpha of Q is a candidate monomial x^alpha.  Substituting
x_i = f_i(tau) at unitary sample points tau gives one linear equation per
sample in the unknown coefficients; the relation spans the (numerical) kernel
of the sample matrix.  Rows and columns are equilibrated before the SVD,
otherwise monomials of high degree swamp everything else.

For d = 1 an exact Sylvester resultant serves as an independent check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
import sympy

from .polytope import LatticePolytope, Point, conv, lattice_points

NON_GENERIC = "NON_GENERIC"
ILL_CONDITIONED = "ILL_CONDITIONED"


class NumericalFailure(ArithmeticError):
    pass


@dataclass(frozen=True)
class LaurentPolynomial:
    dim: int
    terms: tuple[tuple[Point, complex], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a Laurent polynomial needs at least one term")
        exps = [a for a, _ in self.terms]
        if len(set(exps)) != len(exps):
            raise ValueError("repeated exponent")
        for a in exps:
            if len(a) != self.dim:
                raise ValueError(f"exponent {a} is not in Z^{self.dim}")

    @classmethod
    def from_terms(cls, terms) -> "LaurentPolynomial":
        """From a dict or a list of (exponent, coefficient) pairs."""
        items = terms.items() if isinstance(terms, dict) else terms
        t = tuple(sorted((tuple(int(x) for x in a), complex(c)) for a, c in items))
        return cls(len(t[0][0]), t)

    @property
    def support(self) -> list[Point]:
        return [a for a, _ in self.terms]

    @property
    def exponents(self) -> np.ndarray:
        return np.array(self.support, dtype=float).reshape(len(self.terms), self.dim)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([c for _, c in self.terms], dtype=complex)

    def newton_polytope(self) -> LatticePolytope:
        return conv(self.support)


def sample_unitary(d: int, m: int, seed: int) -> np.ndarray:
    """m points of the torus (S^1)^d, as an (m, d) complex array."""
    if m < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2 * np.pi, size=(m, d))
    return np.exp(1j * theta)


def evaluate_many(f: LaurentPolynomial, taus: np.ndarray) -> np.ndarray:
    taus = np.atleast_2d(np.asarray(taus, dtype=complex))
    if taus.shape[1] != f.dim:
        raise ValueError(f"sample points have dimension {taus.shape[1]}, expected {f.dim}")
    # tau^a through logs is exact in modulus for unitary tau
    mon = np.exp(np.log(taus) @ f.exponents.T)
    return mon @ f.coefficients


def evaluate(f: LaurentPolynomial, tau: Sequence[complex]) -> complex:
    return complex(evaluate_many(f, np.asarray(tau, dtype=complex)[None, :])[0])


@dataclass
class ImplicitEquation:
    support: list[Point]
    coefficients: np.ndarray
    nullity: int
    residual_max: float = float("nan")
    residual_mean: float = float("nan")
    singular_values: np.ndarray = field(default=None, repr=False)
    warnings: list[str] = field(default_factory=list)

    @property
    def gap(self) -> float:
        s = self.singular_values
        if s is None or len(s) < 2:
            return float("inf")
        return float(s[-2] / s[-1]) if s[-1] > 0 else float("inf")

    def coefficient(self, alpha: Sequence[int]) -> complex:
        return complex(self.coefficients[self.support.index(tuple(alpha))])

    def scaled(self, alpha: Sequence[int], value: complex) -> np.ndarray:
        """Coefficients rescaled so that the one at alpha equals value."""
        return self.coefficients * (value / self.coefficient(alpha))


def _monomial_matrix(values: np.ndarray, support: np.ndarray) -> np.ndarray:
    # values: (m, n) f_i(tau_k); support: (N, n) exponents
    return np.exp(np.log(values) @ support.T)


def _equilibrate(M: np.ndarray, rounds: int) -> tuple[np.ndarray, np.ndarray]:
    col = np.linalg.norm(M, axis=0)
    col[col == 0] = 1.0
    B = M / col
    for _ in range(rounds):
        r = np.linalg.norm(B, axis=1)
        r[r == 0] = 1.0
        B = B / r[:, None]
        c = np.linalg.norm(B, axis=0)
        c[c == 0] = 1.0
        B = B / c
        col = col * c
    return B, col


def _values(polys: Sequence[LaurentPolynomial], taus: np.ndarray) -> np.ndarray:
    return np.stack([evaluate_many(f, taus) for f in polys], axis=1)


def residual(g: ImplicitEquation, polys: Sequence[LaurentPolynomial], tau) -> float:
    """|g(f(tau))| relative to the sum of the absolute values of its terms."""
    vals = _values(polys, np.atleast_2d(np.asarray(tau, dtype=complex)))
    if vals.shape[1] != len(g.support[0]):
        raise ValueError("number of polynomials does not match the equation")
    A = np.array(g.support, dtype=float)
    mon = _monomial_matrix(vals, A)[0]
    num = abs(np.dot(mon, g.coefficients))
    den = float(np.sum(np.abs(mon) * np.abs(g.coefficients)))
    return float(num / den) if den > 0 else float(num)


def implicitize(polys: Sequence[LaurentPolynomial], Q: LatticePolytope, m: Optional[int] = None,
                seed: int = 0, tol: float = 1e-8, holdout: int = 20,
                gap_threshold: float = 1e6, rounds: int = 20) -> ImplicitEquation:
    """Coefficients of the relation supported on the lattice points of Q.

    ``rounds`` alternating row/column normalisations are applied before the
    SVD.  Row scaling leaves the kernel alone; column scaling is undone on
    the solution.
    """
    polys = list(polys)
    if not polys:
        raise ValueError("no polynomials")
    d = polys[0].dim
    if any(f.dim != d for f in polys):
        raise ValueError("polynomials live in different dimensions")
    if Q.ambient_dim != len(polys):
        raise ValueError(f"Q lives in Z^{Q.ambient_dim} but there are {len(polys)} polynomials")
    support = lattice_points(Q)
    N = len(support)
    if m is None:
        m = 2 * N
    if m < N:
        raise ValueError(f"need at least {N} samples, got {m}")
    taus = sample_unitary(d, m + holdout, seed)
    vals = _values(polys, taus)
    if np.any(vals == 0):
        raise NumericalFailure("a sample point hit a zero of some f_i")
    A = np.array(support, dtype=float).reshape(N, len(polys))
    M = _monomial_matrix(vals[:m], A)
    B, scale = _equilibrate(M, rounds)
    _, s, vh = np.linalg.svd(B, full_matrices=False)
    if not np.all(np.isfinite(s)):
        raise NumericalFailure("sample matrix is not finite")
    nullity = int(np.sum(s <= tol * s[0]))
    y = vh[-1].conj() / scale
    y = y / y[np.argmax(np.abs(y))]
    eq = ImplicitEquation(support, y, nullity, singular_values=s)
    if nullity > 1:
        eq.warnings.append(NON_GENERIC)
    if nullity < 1 or eq.gap < gap_threshold:
        eq.warnings.append(ILL_CONDITIONED)
    if holdout:
        res = [residual(eq, polys, t) for t in taus[m:]]
        eq.residual_max = float(np.max(res))
        eq.residual_mean = float(np.mean(res))
    return eq


# exact d = 1 oracle ---------------------------------------------------------

@dataclass
class ExactEquation:
    support: list[Point]
    coefficients: list          # sympy numbers aligned with support

    def newton_polytope(self) -> LatticePolytope:
        return conv(self.support)

    def as_dict(self) -> dict[Point, object]:
        return dict(zip(self.support, self.coefficients))


def _exact(c: complex):
    re, im = Fraction(c.real), Fraction(c.imag)
    return sympy.Rational(re.numerator, re.denominator) + sympy.I * sympy.Rational(im.numerator, im.denominator)


def resultant_oracle(f1: LaurentPolynomial, f2: LaurentPolynomial) -> ExactEquation:
    """Implicit equation of the plane curve (f1(t), f2(t)) by a Sylvester resultant.

    Float coefficients are read exactly (as binary fractions).  Any monomial
    factor in x1, x2 is divided out.
    """
    if f1.dim != 1 or f2.dim != 1:
        raise ValueError("the resultant oracle is for curves (d = 1)")
    if len(f1.terms) == 1 and len(f2.terms) == 1 and f1.terms[0][0] == (0,) and f2.terms[0][0] == (0,):
        raise ValueError("both polynomials are constant")
    t, x1, x2 = sympy.symbols("t x1 x2")

    def shifted(f, x):
        lo = min(0, min(a[0] for a in f.support))
        expr = x * t ** (-lo) - sum(_exact(c) * t ** (a[0] - lo) for a, c in f.terms)
        return sympy.Poly(sympy.expand(expr), t)

    p1, p2 = shifted(f1, x1), shifted(f2, x2)
    res = sympy.Poly(sympy.resultant(p1, p2), x1, x2)
    if res.is_zero:
        raise ArithmeticError("resultant vanishes identically")
    terms = res.terms()
    lo = tuple(min(a[k] for a, _ in terms) for k in range(2))
    support = [(a[0] - lo[0], a[1] - lo[1]) for a, _ in terms]
    coeffs = [c for _, c in terms]
    order = sorted(range(len(support)), key=lambda i: support[i])
    return ExactEquation([support[i] for i in order], [coeffs[i] for i in order])
