"""Rational vector fields and rational PH space curves.

A PH curve is built from a tangent field v and a free coefficient a3 as
r = a1 v + a2 v' + a3 (v x v'). The companion closed form in terms of
w = v x v' and f = a3 |w|^2 serves as an independent check.
"""

import warnings

import mpmath

from .errors import (
    DegenerateIndicatrix,
    DomainWarning,
    DenominatorRootInDomain,
    DependentTangentField,
    OracleDegenerate,
    NotPythagorean,
    ZeroSpeedCurve,
    ZeroSpeedWarning,
)
from .field import Polynomial, RatFun, Surd, isolate_roots, ratfun_sqrt, to_rational
from .field.surd import _join


def _rf(x):
    if isinstance(x, RatFun):
        return x
    if isinstance(x, Polynomial):
        return RatFun(x)
    return RatFun.const(x)


class RVF3:
    """A vector of three RatFuns sharing one discriminant."""

    __slots__ = ("x", "y", "z")

    def __init__(self, x, y, z):
        x, y, z = _rf(x), _rf(y), _rf(z)
        _join(_join(x.e, y.e), z.e)
        self.x, self.y, self.z = x, y, z

    @classmethod
    def from_polys(cls, coeffs):
        """Build from three ascending coefficient lists."""
        return cls(*(RatFun(Polynomial(c)) for c in coeffs))

    @property
    def components(self):
        return (self.x, self.y, self.z)

    @property
    def e(self):
        return _join(_join(self.x.e, self.y.e), self.z.e)

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __getitem__(self, i):
        return self.components[i]

    def is_zero(self):
        return all(c.is_zero() for c in self)

    def degree(self):
        """Largest numerator or denominator degree over the components."""
        return max(max(c.num.degree, c.den.degree) for c in self)

    def component_degrees(self):
        return [max(c.num.degree, c.den.degree) for c in self]

    # arithmetic
    def __add__(self, o):
        return RVF3(self.x + o.x, self.y + o.y, self.z + o.z)

    def __sub__(self, o):
        return RVF3(self.x - o.x, self.y - o.y, self.z - o.z)

    def __neg__(self):
        return RVF3(-self.x, -self.y, -self.z)

    def scale(self, f):
        """Multiply by a scalar or a RatFun."""
        return RVF3(self.x * f, self.y * f, self.z * f)

    __mul__ = scale
    __rmul__ = scale

    def __truediv__(self, f):
        return RVF3(self.x / f, self.y / f, self.z / f)

    def derivative(self):
        return RVF3(self.x.derivative(), self.y.derivative(), self.z.derivative())

    def dot(self, o):
        return self.x * o.x + self.y * o.y + self.z * o.z

    def cross(self, o):
        return RVF3(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )

    def triple_det(self, b, c):
        """det(self, b, c) = (self x b) . c."""
        return self.cross(b).dot(c)

    def norm2(self):
        return self.dot(self)

    # evaluation
    def __call__(self, t):
        return tuple(c(t) for c in self)

    def eval_mp(self, t, dps=None):
        if dps is not None:
            with mpmath.workdps(dps):
                return self.eval_mp(t)
        return mpmath.matrix([c.eval_mp(t) for c in self])

    def eval_float(self, t):
        import numpy as np

        return np.stack([c.eval_float(t) for c in self], axis=-1)

    def __eq__(self, o):
        if not isinstance(o, RVF3):
            return NotImplemented
        return self.x == o.x and self.y == o.y and self.z == o.z

    def __hash__(self):
        return hash((self.x, self.y, self.z))

    def __repr__(self):
        return f"RVF3({self.x}, {self.y}, {self.z})"


def rvf_calculus(v, op, *args):
    if op == "derivative":
        return v.derivative()
    if op == "dot":
        return v.dot(args[0])
    if op == "cross":
        return v.cross(args[0])
    if op == "triple_det":
        return v.triple_det(*args)
    raise ValueError(f"unknown op {op!r}")


def stereographic_tangent(b1, b2):
    """Unit field (2 b1, 2 b2, b1^2 + b2^2 - 1) / (b1^2 + b2^2 + 1)."""
    b1, b2 = _rf(b1), _rf(b2)
    if b1.is_constant() and b2.is_constant():
        raise DegenerateIndicatrix("b1 and b2 are both constant: the tangent is a fixed point")
    q = b1 * b1 + b2 * b2
    den = q + 1
    return RVF3(b1 * 2 / den, b2 * 2 / den, (q - 1) / den)


def _scalar(x):
    if isinstance(x, Surd):
        return x
    if isinstance(x, str):
        from .field import parse_scalar

        return parse_scalar(x)
    return to_rational(x)


def rational_bezier3(c0, c1, c2, c3, w1, w2, *, check_domain=True):
    """Cubic rational Bezier function with end weights 1.

    Control values and weights may be rationals or field elements.
    """
    c = [Surd.coerce(_scalar(x)) for x in (c0, c1, c2, c3)]
    w = [Surd.coerce(1), Surd.coerce(_scalar(w1)), Surd.coerce(_scalar(w2)), Surd.coerce(1)]
    # Bernstein basis in monomial form
    basis = [
        Polynomial.from_rationals([1, -3, 3, -1]),
        Polynomial.from_rationals([0, 3, -6, 3]),
        Polynomial.from_rationals([0, 0, 3, -3]),
        Polynomial.from_rationals([0, 0, 0, 1]),
    ]
    num = Polynomial(())
    den = Polynomial(())
    for ci, wi, bi in zip(c, w, basis):
        num = num + bi.scale(ci * wi)
        den = den + bi.scale(wi)
    if den.is_zero():
        raise DenominatorRootInDomain("the weights make the denominator vanish identically")
    if check_domain:
        roots = isolate_roots(den, 0, 1)
        if roots:
            raise DenominatorRootInDomain(f"denominator vanishes at t = {roots}")
    return RatFun(num, den)


class PHCurve:
    """r = a1 v + a2 v' + a3 (v x v') with r' = g v."""

    def __init__(self, r, v, a1, a2, a3, g):
        self.r, self.v = r, v
        self.a1, self.a2, self.a3 = a1, a2, a3
        self.g = g

    def check(self):
        """Exact identity r' - g v == 0."""
        return (self.r.derivative() - self.v.scale(self.g)).is_zero()

    def __repr__(self):
        return f"PHCurve(r={self.r!r})"


def _sign_at_half(f):
    for t in (to_rational("1/2"), to_rational("1/3"), to_rational("2/3"), to_rational("1/7")):
        try:
            s = f(t).sign()
        except Exception:
            continue
        if s:
            return s
    return 0


def ph_curve_from_tangent(a3, v, *, orient=True):
    """Rational PH curve with tangent direction v and free coefficient a3."""
    a3 = _rf(a3)
    v1 = v.derivative()
    v2 = v1.derivative()
    w = v.cross(v1)
    det = w.dot(v2)
    if det.is_zero():
        raise DependentTangentField("det(v, v', v'') vanishes identically")
    ww = w.dot(w)
    dep = isolate_roots(ww.num, 0, 1)
    if dep:
        warnings.warn(f"v and v' are parallel at t = {dep}", DomainWarning, stacklevel=2)
    vv = v.dot(v)
    vv1 = v.dot(v1)
    vv2 = v.dot(v2)
    v1v2 = v1.dot(v2)
    wvv2 = w.dot(v.cross(v2))
    a2 = -(a3.derivative() * ww + a3 * wvv2) / det
    a2d = a2.derivative()
    d1 = -ww  # (v.v')^2 - |v'|^2 |v|^2
    d2 = vv1 * vv2 - v1v2 * vv
    a1 = -a2d - (a2 * d2 + a3 * vv * det) / d1
    g = a1.derivative() + ((a1 + a2d) * vv1 + a2 * vv2) / vv
    r = v.scale(a1) + v1.scale(a2) + w.scale(a3)
    if orient and _sign_at_half(g) < 0:
        # reversing v keeps r and flips the signs of a1, a2 and g
        v, a1, a2, g = -v, -a1, -a2, -g
    if a3.is_zero():
        warnings.warn("a3 = 0 collapses the curve to a point", ZeroSpeedWarning, stacklevel=2)
    return PHCurve(r, v, a1, a2, a3, g)


def a3_recover(r, v):
    """(a3, f) with f = det(r, v, v') and a3 = f / |v x v'|^2."""
    v1 = v.derivative()
    w = v.cross(v1)
    ww = w.dot(w)
    if ww.is_zero():
        raise DependentTangentField("v and v' are parallel")
    f = r.dot(w)
    return f / ww, f


def farouki_sir_oracle(f, v):
    """Closed-form PH curve from f and w = v x v'."""
    f = _rf(f)
    w = v.cross(v.derivative())
    w1 = w.derivative()
    w2 = w1.derivative()
    den = w.dot(w1.cross(w2))
    if den.is_zero():
        raise OracleDegenerate("w . (w' x w'') vanishes identically")
    f1 = f.derivative()
    f2 = f1.derivative()
    num = w1.cross(w2).scale(f) + w2.cross(w).scale(f1) + w.cross(w1).scale(f2)
    return num / den


class SampledFunction:
    """A real function known exactly when ``exact`` is set, else by a closure."""

    def __init__(self, fn, exact=None, label=""):
        self._fn = fn
        self.exact = exact
        self.label = label

    def __call__(self, t, dps=50):
        if self.exact is not None:
            return self.exact.eval_mp(t, dps=dps)
        with mpmath.workdps(dps):
            return self._fn(mpmath.mpf(t))


def _positive_at_sample(x):
    s = _sign_at_half(x)
    return -x if s < 0 else x


def curvature_torsion_speed(r):
    """(kappa, tau, sigma) for a rational curve.

    tau is an exact RatFun. sigma is exact when r' . r' is a perfect square,
    otherwise a sampled function with a NotPythagorean warning. kappa is a
    SampledFunction carrying an exact RatFun when one exists.
    """
    r1 = r.derivative()
    if r1.is_zero():
        raise ZeroSpeedCurve("r' vanishes identically")
    r2 = r1.derivative()
    r3 = r2.derivative()
    c = r1.cross(r2)
    cc = c.dot(c)
    s2 = r1.dot(r1)
    if cc.is_zero():
        tau = RatFun.const(0)
    else:
        tau = c.dot(r3) / cc
    sig = ratfun_sqrt(s2)
    if sig is not None:
        sig = _positive_at_sample(sig)
        sigma = sig
    else:
        warnings.warn("r'.r' is not a perfect square; speed is sampled", NotPythagorean, stacklevel=2)
        sigma = SampledFunction(lambda t: mpmath.sqrt(s2.eval_mp(t)), label="sigma")
    if cc.is_zero():
        kappa = SampledFunction(lambda t: mpmath.mpf(0), exact=RatFun.const(0), label="kappa")
    else:
        cn = ratfun_sqrt(cc)
        if cn is not None and sig is not None:
            cn = _positive_at_sample(cn)
            kappa = SampledFunction(None, exact=cn / (sig * sig * sig), label="kappa")
        else:

            def _k(t):
                return mpmath.sqrt(cc.eval_mp(t)) / s2.eval_mp(t) ** mpmath.mpf(1.5)

            kappa = SampledFunction(_k, label="kappa")
    return kappa, tau, sigma


def curve_cusps(sigma):
    """Parameters in [0, 1] where an exact speed function vanishes."""
    if not isinstance(sigma, RatFun) or sigma.is_zero():
        return []
    return isolate_roots(sigma.num, 0, 1)


__all__ = [
    "RVF3",
    "PHCurve",
    "SampledFunction",
    "a3_recover",
    "curvature_torsion_speed",
    "curve_cusps",
    "farouki_sir_oracle",
    "ph_curve_from_tangent",
    "rational_bezier3",
    "rvf_calculus",
    "stereographic_tangent",
]
