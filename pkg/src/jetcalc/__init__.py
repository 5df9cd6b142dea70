"""jetcalc: exact symbolic calculus on jet spaces.

Total derivatives, linearizations, Jacobi/Mayer/multi-brackets of
differential operators, and compatibility of differential constraints by
reduction modulo prolonged-equation ideals.
"""
from .context import JetContext
from .expr import Expr, BaseVar, JetVar, FuncKernel, ExpKernel, \
    partial_derivative, substitute
from .jet import (AnsatzBinding, SymbolPoly, evaluate_on_ansatz, jet_expr,
                  base_expr, make_jet, prolong_system, symbol,
                  total_derivative, total_derivative_sigma, weighted_order)
from .linops import (CDiffOp, apply_op, commutator, compose,
                     evolutionary_derivative, hessian, jacobi_bracket,
                     lin_component, linearize, multi_bracket)
from .ideal import (GroebnerBasis, PolyRingSpec, build_ring, groebner,
                    poly_to_expr, symbol_gcd_resultant, to_polynomial)
from .compat import (CompatReport, EquationSystem, check_compatibility,
                     complete_intersection_check, frobenius_check,
                     integrability_conditions, is_compatible_pair,
                     mayer_reduce, ode_intermediate_pde, reduced_bracket,
                     separant, symmetry_check)
from .parser_io import (context_from_dict, format_expr, load_context, parse,
                        parse_rule)
from . import errors

__version__ = "0.1.0"
