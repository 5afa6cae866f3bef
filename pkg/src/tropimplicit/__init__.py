"""Newton polytopes of implicit equations via tropical geometry."""
__version__ = "0.1.0"

from .polytope import LatticePolytope, conv, lattice_points, mixed_volume, minkowski_sum
from .tropical import SupportSystem, TropicalCycle, enumerate_cone_pairs, is_hypersurface, multiplicity_at
from .surface import SurfaceGraph, surface_graph, is_balanced
from .reconstruct import (GenericityError, PreconditionError, chow_vertex, degree, reconstruct_chow,
                          reconstruct_newton, shoot, vertex_oracle)
from .recovery import (ILL_CONDITIONED, NON_GENERIC, ImplicitEquation, LaurentPolynomial, NumericalFailure,
                       implicitize, resultant_oracle)
from .problem import ParseError, Problem
