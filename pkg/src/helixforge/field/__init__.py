"""Exact arithmetic over Q(sqrt(e)): scalars, polynomials, rational functions."""

from .parse import ExpressionError, parse_ratfun, parse_scalar
from .poly import T, Polynomial, poly_gcd, poly_sqrt, squarefree
from .ratfun import RatFun, ratfun_arith, ratfun_derivative, ratfun_eval, ratfun_sqrt
from .sturm import count_roots, has_root_in, isolate_roots, sturm_sequence
from .surd import ONE, ZERO, Rational, Surd, rational_str, squarefree_part, to_rational

__all__ = [
    "ONE",
    "ZERO",
    "ExpressionError",
    "Polynomial",
    "RatFun",
    "Rational",
    "Surd",
    "T",
    "count_roots",
    "has_root_in",
    "isolate_roots",
    "parse_ratfun",
    "parse_scalar",
    "poly_gcd",
    "poly_sqrt",
    "rational_str",
    "ratfun_arith",
    "ratfun_derivative",
    "ratfun_eval",
    "ratfun_sqrt",
    "squarefree",
    "squarefree_part",
    "sturm_sequence",
    "to_rational",
]
