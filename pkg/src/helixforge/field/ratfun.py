"""Normalized rational functions num/den over Q(sqrt(e))."""

import mpmath
import numpy as np

from ..errors import DivisionByZero, PoleAtParameter
from .poly import Polynomial, poly_gcd, poly_sqrt
from .surd import Surd, _join


class RatFun:
    """Immutable ratio of polynomials, kept coprime with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, normalized=False):
        if not isinstance(num, Polynomial):
            num = Polynomial.constant(num)
        if den is None:
            den = Polynomial.constant(1, num.e)
        elif not isinstance(den, Polynomial):
            den = Polynomial.constant(den)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        e = _join(num.e, den.e)
        if not normalized:
            num, den = _normalize(num, den)
        if num.e != e:
            num = num.with_e(e)
        if den.e != e:
            den = den.with_e(e)
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def const(cls, c, e=0):
        p = Polynomial.constant(c, e)
        return cls._raw(p, Polynomial.constant(1, p.e))

    @classmethod
    def variable(cls):
        return cls._raw(Polynomial.from_rationals([0, 1]), Polynomial.constant(1))

    @property
    def e(self):
        return _join(self.num.e, self.den.e)

    @property
    def degree(self):
        """(deg num, deg den)."""
        return self.num.degree, self.den.degree

    def is_zero(self):
        return self.num.is_zero()

    def is_constant(self):
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.coeff(0)

    def is_polynomial(self):
        return self.den.degree == 0

    def __bool__(self):
        return not self.num.is_zero()

    # --- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(x):
        if isinstance(x, RatFun):
            return x
        if isinstance(x, Polynomial):
            return RatFun(x)
        return RatFun.const(x)

    def __add__(self, other):
        o = RatFun._coerce(other)
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        if d1 == d2:
            num = n1 + n2
            if d1.degree == 0:
                return RatFun._raw(num, d1)
            return RatFun(num, d1)
        if d1.degree == 0:
            return RatFun._raw(n1 * d2 + n2, d2)
        if d2.degree == 0:
            return RatFun._raw(n1 + n2 * d1, d1)
        g = poly_gcd(d1, d2)
        if g.degree == 0:
            return RatFun._raw(n1 * d2 + n2 * d1, d1 * d2)
        s = d1.exact_div(g)
        t = d2.exact_div(g)
        num = n1 * t + n2 * s
        g2 = poly_gcd(num, g) if not num.is_zero() else g
        if g2.degree > 0:
            num = num.exact_div(g2)
            den = s * d2.exact_div(g2)
        else:
            den = s * d2
        return RatFun._raw(num, den) if not num.is_zero() else RatFun.const(0, num.e)

    __radd__ = __add__

    def __neg__(self):
        return RatFun._raw(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatFun._coerce(other))

    def __rsub__(self, other):
        return RatFun._coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, (RatFun, Polynomial)):
            c = Surd.coerce(other)
            if not c:
                return RatFun.const(0, _join(self.e, c.e))
            return RatFun._raw(self.num.scale(c), self.den)
        o = RatFun._coerce(other)
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        if n1.is_zero() or n2.is_zero():
            return RatFun.const(0, _join(self.e, o.e))
        g1 = poly_gcd(n1, d2) if d2.degree > 0 and n1.degree > 0 else None
        g2 = poly_gcd(n2, d1) if d1.degree > 0 and n2.degree > 0 else None
        if g1 is not None and g1.degree > 0:
            n1, d2 = n1.exact_div(g1), d2.exact_div(g1)
        if g2 is not None and g2.degree > 0:
            n2, d1 = n2.exact_div(g2), d1.exact_div(g2)
        num, den = n1 * n2, d1 * d2
        lc = den.lc()
        if lc != 1:
            inv = lc.inverse()
            num, den = num.scale(inv), den.scale(inv)
        return RatFun._raw(num, den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise DivisionByZero("inverse of the zero rational function")
        lc = self.num.lc().inverse()
        return RatFun._raw(self.den.scale(lc), self.num.scale(lc))

    def __truediv__(self, other):
        if not isinstance(other, (RatFun, Polynomial)):
            c = Surd.coerce(other)
            if not c:
                raise DivisionByZero("division by zero scalar")
            return self * c.inverse()
        return self * RatFun._coerce(other).inverse()

    def __rtruediv__(self, other):
        return RatFun._coerce(other) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RatFun._raw(self.num ** n, self.den ** n)

    def derivative(self):
        n, d = self.num, self.den
        if d.degree == 0:
            return RatFun._raw(n.derivative(), d)
        # with g = gcd(d, d'), (n/d)' = (n' (d/g) - n (d'/g)) / (d * d/g)
        dp = d.derivative()
        g = poly_gcd(d, dp)
        dg = d.exact_div(g)
        num = n.derivative() * dg - n * dp.exact_div(g)
        if num.is_zero():
            return RatFun.const(0, self.e)
        return RatFun(num, d * dg)

    # --- evaluation ------------------------------------------------------
    def __call__(self, x):
        """Exact value at a rational or Surd parameter."""
        dv = self.den(x)
        if not dv:
            raise PoleAtParameter(f"pole at t = {x}")
        return self.num(x) / dv

    def eval_mp(self, x, dps=None):
        """High-precision value; sqrt(e) is expanded at the working precision."""
        if dps is not None:
            with mpmath.workdps(dps):
                return self.eval_mp(x)
        x = mpmath.mpf(x) if not isinstance(x, mpmath.mpf) else x
        dv = self.den.eval_mp(x)
        if abs(dv) < 1e-10 and abs(dv) <= 1e-14 * _abs_bound(self.den, x):
            raise PoleAtParameter(f"pole at t = {mpmath.nstr(x, 15)}")
        return self.num.eval_mp(x) / dv

    def eval_float(self, x):
        x = np.asarray(x, dtype=float)
        return self.num.eval_float(x) / self.den.eval_float(x)

    # --- comparison / display -------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, RatFun):
            try:
                other = RatFun._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFun({self})"

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"


def _abs_bound(p, x):
    ax = abs(x)
    acc = mpmath.mpf(0)
    for c in reversed(p.coefficients):
        acc = acc * ax + abs(c.to_mpf())
    return acc


def _normalize(num, den):
    e = _join(num.e, den.e)
    if num.is_zero():
        return Polynomial((), e), Polynomial.constant(1, e)
    if den.degree > 0 and num.degree > 0:
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
    lc = den.lc()
    if lc != 1:
        inv = lc.inverse()
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def ratfun_arith(x, y, op):
    """Dispatch helper: op in {'add', 'sub', 'mul', 'div'}."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


def ratfun_eval(x, t, dps=50):
    return x.eval_mp(t, dps=dps)


def ratfun_derivative(x):
    return x.derivative()


def ratfun_sqrt(x):
    """Exact square root of a RatFun, or None when num/den are not squares.

    The sign is left as produced by the leading coefficients; callers fix
    orientation themselves.
    """
    if x.is_zero():
        return x
    n = poly_sqrt(x.num)
    if n is None:
        return None
    d = poly_sqrt(x.den)
    if d is None:
        return None
    return RatFun(n, d)
