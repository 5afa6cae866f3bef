"""Problem files: a JSON document listing supports and optional coefficients.

    {
      "dim": 2,
      "polynomials": [
        {"support": [[0, 3], [1, 0]], "coefficients": [{"re": 3, "im": 0}, {"re": 1}]},
        {"support": [[0, 1], [2, 2]]}
      ]
    }

Coefficients may also be given as bare real numbers.  Supports are raw
exponent lists; they are never hulled on input.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Optional

from .polytope import Point
from .recovery import LaurentPolynomial
from .tropical import SupportSystem


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None,
                 field: Optional[str] = None):
        self.line, self.column, self.field = line, column, field
        where = []
        if line is not None:
            where.append(f"line {line}" + (f", column {column}" if column is not None else ""))
        if field:
            where.append(f"field {field}")
        super().__init__(f"{': '.join(where)}: {message}" if where else message)


@dataclass(frozen=True)
class PolySpec:
    support: tuple[Point, ...]
    coefficients: Optional[tuple[complex, ...]] = None


@dataclass(frozen=True)
class Problem:
    dim: int
    polynomials: tuple[PolySpec, ...]

    @property
    def n(self) -> int:
        return len(self.polynomials)

    @property
    def has_coefficients(self) -> bool:
        return all(p.coefficients is not None for p in self.polynomials)

    def system(self) -> SupportSystem:
        return SupportSystem(self.dim, tuple(tuple(sorted(set(p.support))) for p in self.polynomials))

    def laurent(self) -> list[LaurentPolynomial]:
        if not self.has_coefficients:
            raise ValueError("the problem has no coefficients")
        return [LaurentPolynomial.from_terms(list(zip(p.support, p.coefficients))) for p in self.polynomials]

    @classmethod
    def from_laurent(cls, polys) -> "Problem":
        polys = list(polys)
        return cls(polys[0].dim, tuple(PolySpec(tuple(f.support), tuple(c for _, c in f.terms)) for f in polys))

    @classmethod
    def from_supports(cls, supports) -> "Problem":
        sups = [tuple(tuple(int(x) for x in a) for a in A) for A in supports]
        return cls(len(sups[0][0]), tuple(PolySpec(A) for A in sups))

    def digest(self) -> str:
        return hashlib.sha256(serialize(self).encode()).hexdigest()


def _int(x, field) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"expected an integer, got {json.dumps(x)}", field=field)
    return x


def _number(x, field) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"expected a number, got {json.dumps(x)}", field=field)
    return float(x)


def _coefficient(x, field) -> complex:
    if isinstance(x, dict):
        unknown = set(x) - {"re", "im"}
        if unknown:
            raise ParseError(f"unknown keys {sorted(unknown)}", field=field)
        if "re" not in x:
            raise ParseError("missing 're'", field=field)
        return complex(_number(x["re"], field + ".re"), _number(x.get("im", 0), field + ".im"))
    return complex(_number(x, field), 0.0)


def from_dict(doc) -> Problem:
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    unknown = set(doc) - {"dim", "polynomials"}
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}", field="<root>")
    if "dim" not in doc:
        raise ParseError("missing", field="dim")
    dim = _int(doc["dim"], "dim")
    if dim < 1:
        raise ParseError("must be at least 1", field="dim")
    polys = doc.get("polynomials")
    if not isinstance(polys, list) or not polys:
        raise ParseError("expected a nonempty list", field="polynomials")
    specs = []
    for i, p in enumerate(polys):
        base = f"polynomials[{i}]"
        if not isinstance(p, dict):
            raise ParseError("expected an object", field=base)
        unknown = set(p) - {"support", "coefficients"}
        if unknown:
            raise ParseError(f"unknown keys {sorted(unknown)}", field=base)
        sup = p.get("support")
        if not isinstance(sup, list) or not sup:
            raise ParseError("expected a nonempty list of exponent vectors", field=base + ".support")
        pts = []
        for j, a in enumerate(sup):
            f = f"{base}.support[{j}]"
            if not isinstance(a, list) or len(a) != dim:
                raise ParseError(f"expected a list of {dim} integers", field=f)
            pts.append(tuple(_int(x, f"{f}[{k}]") for k, x in enumerate(a)))
        if len(set(pts)) != len(pts):
            dup = next(a for a in pts if pts.count(a) > 1)
            raise ParseError(f"repeated exponent {list(dup)}", field=base + ".support")
        coeffs = None
        if p.get("coefficients") is not None:
            cl = p["coefficients"]
            if not isinstance(cl, list) or len(cl) != len(pts):
                raise ParseError(f"expected a list of {len(pts)} coefficients", field=base + ".coefficients")
            coeffs = tuple(_coefficient(c, f"{base}.coefficients[{j}]") for j, c in enumerate(cl))
            if any(c == 0 for c in coeffs):
                raise ParseError("zero coefficient; drop the exponent from the support instead",
                                 field=base + ".coefficients")
        specs.append(PolySpec(tuple(pts), coeffs))
    return Problem(dim, tuple(specs))


def parse(text: str) -> Problem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return from_dict(doc)


def load(path) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _num(x: float):
    return int(x) if float(x).is_integer() and abs(x) < 2 ** 53 else x


def to_dict(problem: Problem) -> dict:
    polys = []
    for p in problem.polynomials:
        entry = {"support": [list(a) for a in p.support]}
        if p.coefficients is not None:
            entry["coefficients"] = [{"re": _num(c.real), "im": _num(c.imag)} for c in p.coefficients]
        polys.append(entry)
    return {"dim": problem.dim, "polynomials": polys}


def serialize(problem: Problem) -> str:
    return json.dumps(to_dict(problem), indent=2, sort_keys=True) + "\n"
