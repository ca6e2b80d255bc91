"""Parse small arithmetic expressions in one variable into exact RatFuns.

Accepted syntax: integers, decimals, ``"p/q"`` fractions, the variable name,
``+ - * / **`` with integer exponents, parentheses and ``sqrt(k)`` of a
non-negative rational. Anything else is rejected, so config files can never
execute code.
"""

import ast
from fractions import Fraction

from .poly import Polynomial
from .ratfun import RatFun
from .surd import Surd, to_rational


class ExpressionError(ValueError):
    pass


def _const(node):
    v = node.value
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ExpressionError(f"unsupported literal {v!r}")
    if isinstance(v, float):
        # keep the decimal the user wrote rather than the binary float
        return RatFun.const(to_rational(Fraction(repr(v))))
    return RatFun.const(v)


def parse_ratfun(text, var="t"):
    """Exact RatFun from an expression string such as ``"t*(t**2+1)/(13*t**2+6)"``.

    ``^`` is accepted as a power so printed RatFuns parse back.
    """
    if isinstance(text, (int, Fraction)):
        return RatFun.const(text)
    try:
        tree = ast.parse(str(text).strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
    return _walk(tree.body, var)


def _walk(node, var):
    if isinstance(node, ast.Constant):
        return _const(node)
    if isinstance(node, ast.Name):
        if node.id != var:
            raise ExpressionError(f"unknown name {node.id!r}")
        return RatFun(Polynomial.from_rationals([0, 1]))
    if isinstance(node, ast.UnaryOp):
        x = _walk(node.operand, var)
        if isinstance(node.op, ast.USub):
            return -x
        if isinstance(node.op, ast.UAdd):
            return x
    if isinstance(node, ast.BinOp):
        left = _walk(node.left, var)
        if isinstance(node.op, ast.Pow):
            exp = _walk(node.right, var)
            if not exp.is_constant() or exp.constant_value().b or exp.constant_value().a.denominator != 1:
                raise ExpressionError("exponents must be integer constants")
            n = int(exp.constant_value().a)
            if abs(n) > 64:
                raise ExpressionError("exponent too large")
            return left**n
        right = _walk(node.right, var)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt":
        if len(node.args) != 1 or node.keywords:
            raise ExpressionError("sqrt takes exactly one argument")
        arg = _walk(node.args[0], var)
        if not arg.is_constant() or arg.constant_value().b:
            raise ExpressionError("sqrt is only supported for rational constants")
        return RatFun.const(Surd.sqrt_of(arg.constant_value().a))
    raise ExpressionError(f"unsupported syntax: {ast.dump(node)[:60]}")


def parse_scalar(text):
    """Exact Surd from a string like ``"-1/3"``, ``"0.25"`` or ``"2*sqrt(13)"``."""
    x = parse_ratfun(text, var="__none__")
    return x.constant_value()
