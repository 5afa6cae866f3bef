"""Command line front end.

    tropimplicit VERB --input problem.json [--seed N] [--samples M] [--tol T]
                      [--format json|dot] [--output PATH]

Verbs: tropicalize, newton, chow, implicitize, graph, oracle-curve.
Results are written as a JSON envelope (see README).  Exit codes: 0 ok,
2 parse error, 3 precondition violated, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from fractions import Fraction
from typing import Optional

import numpy as np

from . import __version__
from .polytope import lattice_points
from .problem import ParseError, Problem, load
from .reconstruct import (
    GenericityError,
    PreconditionError,
    _generic_query,
    chow_vertex,
    coordinate_bound,
    degree,
    reconstruct_chow,
    reconstruct_newton,
)
from .recovery import NumericalFailure, implicitize, resultant_oracle
from .surface import is_balanced, surface_graph
from .tropical import enumerate_cone_pairs, is_hypersurface, psi

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_NUMERIC = 0, 2, 3, 4
SCHEMA_VERSION = 1

log = logging.getLogger("tropimplicit")


class CommandError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code, self.kind = code, kind


def _q(x) -> str | int:
    """Exact rationals as ints when integral, else 'p/q' strings."""
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _vec(v) -> list:
    return [_q(x) for x in v]


def _polytope_payload(P) -> dict:
    return {
        "vertices": [list(v) for v in P.vertices],
        "dim": P.dim,
        "f_vector": list(P.f_vector()),
        "facets": [{"normal": list(f.normal), "offset": f.offset} for f in P.facets],
        "equations": [{"normal": list(nrm), "value": val} for nrm, val in P.equations],
    }


def _require_hypersurface(system):
    if system.n != system.dim + 1:
        raise CommandError(EXIT_PRECONDITION, "NOT_HYPERSURFACE",
                           f"need n = d + 1 polynomials, got n={system.n}, d={system.dim}")
    if not is_hypersurface(system):
        raise CommandError(EXIT_PRECONDITION, "NOT_HYPERSURFACE",
                           "no choice of support points spans a rank-d matrix")


def cmd_tropicalize(problem: Problem, args) -> tuple[dict, list]:
    system = problem.system()
    cycle = enumerate_cone_pairs(system)
    fan_rays = [{"w": list(w), "psi": _vec(psi(system, w))} for w in system.fan.rays()]
    pairs = []
    for p in cycle.pairs:
        pairs.append({
            "rays": [list(r) for r in p.cone.rays],
            "lineality": [list(l) for l in p.cone.lineality],
            "J": [j + 1 for j in p.J],
            "witness": _vec(p.witness_w),
            "psi_rays": [list(r) for r in p.psi_rays],
            "index": p.index,
            "mixed_volume": p.mv,
            "weight": p.weight,
            "span_basis": [list(b) for b in p.geometry.span_basis],
        })
    return {
        "dim": system.dim,
        "n": system.n,
        "normal_fan_rays": fan_rays,
        "lineality": [list(l) for l in cycle.lineality()],
        "pair_count": len(pairs),
        "pairs": pairs,
    }, []


def cmd_newton(problem: Problem, args) -> tuple[dict, list]:
    system = problem.system()
    _require_hypersurface(system)
    cycle = enumerate_cone_pairs(system)
    R = reconstruct_newton(cycle, seed=args.seed)
    payload = _polytope_payload(R.polytope)
    payload["lattice_points"] = len(lattice_points(R.polytope))
    payload["degree"] = degree(cycle, seed=args.seed)
    payload["oracle_queries"] = R.queries
    return payload, []


def cmd_chow(problem: Problem, args) -> tuple[dict, list]:
    system = problem.system()
    c = system.n - system.dim
    if c < 1:
        raise CommandError(EXIT_PRECONDITION, "NOT_PROPER", "need n > d")
    if c > 1 and not system.is_homogeneous():
        raise CommandError(EXIT_PRECONDITION, "NOT_HOMOGENEOUS",
                           "codimension > 1 needs homogeneous supports of one common degree")
    cycle = enumerate_cone_pairs(system)
    rng = np.random.default_rng(args.seed)
    bound = coordinate_bound(cycle)
    battery = []
    n = system.n
    for k in range(max(args.directions, 1)):
        u = tuple(int(x) for x in rng.integers(-5, 6, size=n))
        if not any(u):
            u = (1,) + (0,) * (n - 1)
        x, v = _generic_query(lambda v: chow_vertex(cycle, v), u, bound, rng, 20)
        battery.append({"v": list(v), "vertex": list(x), "coordinate_sum": sum(x)})
    R = reconstruct_chow(cycle, seed=args.seed)
    payload = {
        "codimension": c,
        "directions": battery,
        "polytope": _polytope_payload(R.polytope),
        "degree": degree(cycle, seed=args.seed),
    }
    return payload, []


def cmd_implicitize(problem: Problem, args) -> tuple[dict, list]:
    if not problem.has_coefficients:
        raise CommandError(EXIT_PRECONDITION, "MISSING_COEFFICIENTS", "every polynomial needs coefficients")
    system = problem.system()
    _require_hypersurface(system)
    cycle = enumerate_cone_pairs(system)
    R = reconstruct_newton(cycle, seed=args.seed)
    N = len(lattice_points(R.polytope))
    if args.samples is not None and args.samples < N:
        raise CommandError(EXIT_PRECONDITION, "TOO_FEW_SAMPLES", f"need at least {N} samples, got {args.samples}")
    if not args.tol > 0:
        raise CommandError(EXIT_PRECONDITION, "BAD_TOLERANCE", "--tol must be positive")
    g = implicitize(problem.laurent(), R.polytope, m=args.samples, seed=args.seed, tol=args.tol)
    payload = {
        "newton_polytope": [list(v) for v in R.polytope.vertices],
        "support": [list(a) for a in g.support],
        "coefficients": [{"re": float(c.real), "im": float(c.imag)} for c in g.coefficients],
        "nullity": g.nullity,
        "singular_value_gap": g.gap,
        "smallest_singular_values": [float(s) for s in g.singular_values[-3:]],
        "residual": {"max": g.residual_max, "mean": g.residual_mean},
        "samples": args.samples if args.samples else 2 * len(g.support),
        "tol": args.tol,
    }
    return payload, list(g.warnings)


def cmd_graph(problem: Problem, args) -> tuple[dict, list]:
    system = problem.system()
    cycle = enumerate_cone_pairs(system)
    try:
        G = surface_graph(cycle)
    except ValueError as exc:
        raise CommandError(EXIT_PRECONDITION, "WRONG_DIMENSION", str(exc)) from None
    payload = {
        "nodes": [{"label": nd.label, "ray": list(nd.ray)} for nd in G.nodes],
        "edges": [{"u": e.u, "v": e.v, "weight": e.weight} for e in G.edges],
        "lineality": [list(l) for l in G.lineality],
        "balanced": is_balanced(G),
    }
    payload["_dot"] = G.to_dot()
    return payload, []


def cmd_oracle_curve(problem: Problem, args) -> tuple[dict, list]:
    if problem.dim != 1 or problem.n != 2:
        raise CommandError(EXIT_PRECONDITION, "WRONG_DIMENSION", "oracle-curve needs d = 1 and two polynomials")
    if not problem.has_coefficients:
        raise CommandError(EXIT_PRECONDITION, "MISSING_COEFFICIENTS", "every polynomial needs coefficients")
    f1, f2 = problem.laurent()
    eq = resultant_oracle(f1, f2)
    P = eq.newton_polytope()
    return {
        "support": [list(a) for a in eq.support],
        "coefficients": [str(c) for c in eq.coefficients],
        "newton_polygon": [list(v) for v in P.vertices],
    }, []


COMMANDS = {
    "tropicalize": cmd_tropicalize,
    "newton": cmd_newton,
    "chow": cmd_chow,
    "implicitize": cmd_implicitize,
    "graph": cmd_graph,
    "oracle-curve": cmd_oracle_curve,
}


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def envelope(command: str, problem: Problem, seed: int, payload: dict, warnings: list, elapsed: float) -> dict:
    env = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "input_digest": problem.digest(),
        "seed": seed,
        "warnings": sorted(set(warnings)),
        "payload": payload,
    }
    env["envelope_digest"] = _digest(env)
    env["timings"] = {"total_seconds": round(elapsed, 6)}
    return env


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tropimplicit", description="Tropical implicitization of Laurent polynomial maps.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", required=True, help="problem file (JSON)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--samples", type=int, default=None, help="sample count for implicitize (default 2N)")
        sp.add_argument("--tol", type=float, default=1e-8, help="relative singular value threshold for the nullity")
        sp.add_argument("--format", choices=("json", "dot"), default="json")
        sp.add_argument("--output", default=None, help="write here instead of stdout")
        sp.add_argument("--directions", type=int, default=8, help="chow: number of random directions reported")
        sp.add_argument("-v", "--verbose", action="store_true")
    return ap


def run(argv: Optional[list] = None) -> tuple[int, str]:
    """Execute a command; returns (exit code, text written to the output)."""
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.format == "dot" and args.command != "graph":
        print("error: --format dot is only available for graph", file=sys.stderr)
        return EXIT_PRECONDITION, ""
    start = time.perf_counter()
    try:
        problem = load(args.input)
        payload, warnings = COMMANDS[args.command](problem, args)
    except ParseError as exc:
        print(f"error: PARSE_ERROR: {exc}", file=sys.stderr)
        return EXIT_PARSE, ""
    except OSError as exc:
        print(f"error: PARSE_ERROR: cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE, ""
    except CommandError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return exc.code, ""
    except PreconditionError as exc:
        print(f"error: PRECONDITION: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION, ""
    except (GenericityError, NumericalFailure, np.linalg.LinAlgError) as exc:
        print(f"error: NUMERICAL_FAILURE: {exc}", file=sys.stderr)
        return EXIT_NUMERIC, ""
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    dot = payload.pop("_dot", None)
    if args.format == "dot":
        text = dot
    else:
        env = envelope(args.command, problem, args.seed, payload, warnings, time.perf_counter() - start)
        text = json.dumps(env, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK, text


def main(argv: Optional[list] = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
