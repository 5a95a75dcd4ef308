"""Exact tangent spaces to Quot schemes and nested Hilbert schemes of points."""

from .scalars import QQ, PrimeField, parse_field
from .poly import DEFAULT_ORDER, ModuleVector, Ring, TermOrder
from .grammar import (ParseError, format_document, format_vector, parse_document,
                      parse_polynomial, parse_vector)
from .groebner import (GroebnerBasis, InfiniteColength, buchberger, colon, intersect,
                       is_groebner, minimal_generators, module_kernel, normal_form,
                       quotient_structure, syzygies)
from .quotient import (IrrationalSupport, NestedChain, graded_tangent, multiplication_table,
                       nested_graded_tangent, nested_tangent_dimension, nested_tnt_check,
                       parity_check, support, support_decomposition, tangent_dimension,
                       tnt_check)
from .enumeration import Staircase, is_strongly_stable, monomial_ideals, monomial_submodules
from .deform import (DeformationCandidate, SupportCollision, add_disjoint_point,
                     admissible_pairs, build_family, first_order_check, flatness_probe,
                     ideal_quotient_module, increase_rank, lift_check, specialize)

__version__ = "0.1.0"
