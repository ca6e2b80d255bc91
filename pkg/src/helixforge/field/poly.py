"""Dense univariate polynomials over Q(sqrt(e)).

A polynomial P is stored as two rational coefficient tuples, P = A + sqrt(e)*B,
ascending degree. ``B`` is the empty tuple when P has rational coefficients,
which is by far the common case and keeps the arithmetic cheap.
"""

import mpmath
import numpy as np

from ..errors import BothZero, DiscriminantMismatch, DivisionByZero
from .surd import ZERO, Surd, _join, to_rational


def _strip(a, b):
    n = len(a)
    if b:
        while n and not a[n - 1] and not b[n - 1]:
            n -= 1
        b = tuple(b[:n])
        if not any(b):
            b = ()
    else:
        b = ()
        while n and not a[n - 1]:
            n -= 1
    return tuple(a[:n]), b


def _add(x, y):
    if len(x) < len(y):
        x, y = y, x
    out = list(x)
    for i, v in enumerate(y):
        out[i] = out[i] + v
    return out


def _sub(x, y):
    n = max(len(x), len(y))
    out = list(x) + [ZERO] * (n - len(x))
    for i, v in enumerate(y):
        out[i] = out[i] - v
    return out


def _conv(x, y):
    if not x or not y:
        return []
    out = [ZERO] * (len(x) + len(y) - 1)
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                if yj:
                    out[i + j] += xi * yj
    return out


def _scale(x, c):
    return [v * c for v in x]


def _pad(x, n):
    return list(x) + [ZERO] * (n - len(x))


class Polynomial:
    """Immutable polynomial with coefficients in Q(sqrt(e)), ascending order."""

    __slots__ = ("re", "ir", "e", "_hash", "_mp")

    def __init__(self, coeffs=(), e=0):
        re, ir = [], []
        for c in coeffs:
            c = Surd.coerce(c)
            e = _join(e, c.e)
            re.append(c.a)
            ir.append(c.b)
        if e in (0, 1):
            if e == 1:
                re = [x + y for x, y in zip(re, ir)]
            ir = []
        self._set(*_strip(re, ir if any(ir) else ()), e)

    def _set(self, re, ir, e):
        self.re = re
        self.ir = ir
        self.e = e
        self._hash = None
        self._mp = None

    @classmethod
    def _make(cls, re, ir, e):
        obj = object.__new__(cls)
        obj._set(*_strip(re, ir), e)
        return obj

    @classmethod
    def constant(cls, c, e=0):
        return cls([c], e)

    @classmethod
    def monomial(cls, k, c=1, e=0):
        return cls([0] * k + [c], e)

    @classmethod
    def from_rationals(cls, coeffs):
        return cls._make([to_rational(c) for c in coeffs], (), 0)

    # --- structure -------------------------------------------------------
    @property
    def degree(self):
        """Degree; -1 stands in for -infinity on the zero polynomial."""
        return len(self.re) - 1

    @property
    def coefficients(self):
        ir = self.ir or (ZERO,) * len(self.re)
        return [Surd._raw(a, b, self.e) for a, b in zip(self.re, ir)]

    def coeff(self, i):
        if i >= len(self.re):
            return Surd._raw(ZERO, ZERO, self.e)
        return Surd._raw(self.re[i], self.ir[i] if self.ir else ZERO, self.e)

    def lc(self):
        if not self.re:
            return Surd._raw(ZERO, ZERO, self.e)
        return self.coeff(len(self.re) - 1)

    def is_zero(self):
        return not self.re

    def is_constant(self):
        return len(self.re) <= 1

    def is_rational(self):
        return not self.ir

    def __bool__(self):
        return bool(self.re)

    def with_e(self, e):
        """Relabel a rational polynomial as living in Q(sqrt(e))."""
        if self.ir and e != self.e:
            raise DiscriminantMismatch("relabelling a surd polynomial")
        return Polynomial._make(self.re, self.ir, e)

    # --- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(other)

    def __add__(self, other):
        o = self._coerce(other)
        e = _join(self.e, o.e)
        if not self.ir and not o.ir:
            return Polynomial._make(_add(self.re, o.re), (), e)
        n = max(len(self.re), len(o.re))
        return Polynomial._make(_add(self.re, o.re), _add(_pad(self.ir, n), _pad(o.ir, n)), e)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._make([-x for x in self.re], [-x for x in self.ir], self.e)

    def __sub__(self, other):
        o = self._coerce(other)
        e = _join(self.e, o.e)
        if not self.ir and not o.ir:
            return Polynomial._make(_sub(self.re, o.re), (), e)
        n = max(len(self.re), len(o.re))
        return Polynomial._make(_sub(self.re, o.re), _sub(_pad(self.ir, n), _pad(o.ir, n)), e)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            e = _join(self.e, other.e)
            a1, b1, a2, b2 = self.re, self.ir, other.re, other.ir
            if not b1 and not b2:
                return Polynomial._make(_conv(a1, a2), (), e)
            re = _conv(a1, a2)
            if b1 and b2:
                re = _add(re, _scale(_conv(b1, b2), e))
            ir = _add(_conv(a1, b2), _conv(b1, a2))
            n = max(len(re), len(ir))
            return Polynomial._make(_pad(re, n), _pad(ir, n), e)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply every coefficient by the scalar c."""
        c = Surd.coerce(c)
        e = _join(self.e, c.e)
        if not c.b:
            return Polynomial._make(_scale(self.re, c.a), _scale(self.ir, c.a), e)
        re = _scale(self.re, c.a)
        ir = _scale(self.re, c.b)
        if self.ir:
            re = _add(re, _scale(self.ir, e * c.b))
            ir = _add(ir, _scale(self.ir, c.a))
        return Polynomial._make(re, ir, e)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out, base = Polynomial.constant(1, self.e), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k):
        """Multiply by t**k."""
        if not self.re:
            return self
        z = [ZERO] * k
        return Polynomial._make(z + list(self.re), (z + list(self.ir)) if self.ir else (), self.e)

    def divmod(self, other):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        e = _join(self.e, other.e)
        dq = other.degree
        if self.degree < dq:
            return Polynomial._make((), (), e), Polynomial._make(self.re, self.ir, e)
        inv = other.lc().inverse()
        n = self.degree - dq + 1
        if not self.ir and not other.ir:
            rem = list(self.re)
            q = [ZERO] * n
            oc = other.re
            il = inv.a
            for k in range(n - 1, -1, -1):
                c = rem[k + dq] * il
                q[k] = c
                if c:
                    for j in range(dq + 1):
                        rem[k + j] -= c * oc[j]
            return Polynomial._make(q, (), e), Polynomial._make(rem[:dq], (), e)
        rem_a = list(self.re)
        rem_b = _pad(self.ir, len(self.re))
        oa = other.re
        ob = _pad(other.ir, len(other.re))
        qa, qb = [ZERO] * n, [ZERO] * n
        for k in range(n - 1, -1, -1):
            ca, cb = rem_a[k + dq], rem_b[k + dq]
            if not ca and not cb:
                continue
            # c = lc(rem) / lc(other)
            xa = ca * inv.a + e * cb * inv.b
            xb = ca * inv.b + cb * inv.a
            qa[k], qb[k] = xa, xb
            for j in range(dq + 1):
                rem_a[k + j] -= xa * oa[j] + e * xb * ob[j]
                rem_b[k + j] -= xa * ob[j] + xb * oa[j]
        return Polynomial._make(qa, qb, e), Polynomial._make(rem_a[:dq], rem_b[:dq], e)

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if r:
            raise ValueError("division is not exact")
        return q

    def monic(self):
        if not self.re:
            return self
        lc = self.lc()
        if lc == 1:
            return self
        return self.scale(lc.inverse())

    def derivative(self):
        re = [c * i for i, c in enumerate(self.re)][1:]
        ir = [c * i for i, c in enumerate(self.ir)][1:] if self.ir else ()
        return Polynomial._make(re, ir, self.e)

    def compose_affine(self, alpha, beta):
        """Return P(alpha*t + beta) for scalars alpha, beta."""
        out = Polynomial((), self.e)
        lin = Polynomial([beta, alpha], self.e)
        for c in reversed(self.coefficients):
            out = out * lin + Polynomial.constant(c, self.e)
        return out

    # --- evaluation ------------------------------------------------------
    def __call__(self, x):
        """Exact Horner evaluation at a rational or Surd point."""
        x = Surd.coerce(x)
        acc = Surd._raw(ZERO, ZERO, _join(self.e, x.e))
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def eval_mp(self, x):
        """Horner evaluation in mpmath at the current working precision."""
        key = mpmath.mp.prec
        if self._mp is None or self._mp[0] != key:
            self._mp = (key, [c.to_mpf() for c in self.coefficients])
        acc = mpmath.mpf(0)
        for c in reversed(self._mp[1]):
            acc = acc * x + c
        return acc

    def float_coeffs(self):
        """Ascending float64 coefficients."""
        return np.array([float(c) for c in self.coefficients], dtype=float)

    def eval_float(self, x):
        cs = self.float_coeffs()
        if cs.size == 0:
            return np.zeros_like(np.asarray(x, dtype=float))
        return np.polynomial.polynomial.polyval(x, cs)

    # --- comparison / display -------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial.constant(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self.re != other.re or self.ir != other.ir:
            return False
        return not self.ir or self.e == other.e

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.re, self.ir, self.e if self.ir else 0))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.re:
            return "0"
        terms = []
        for i, c in enumerate(self.coefficients):
            if not c:
                continue
            cs = str(c)
            if c.b and c.a:
                cs = f"({cs})"
            if i == 0:
                terms.append(cs)
            else:
                mono = "t" if i == 1 else f"t^{i}"
                if c == 1:
                    terms.append(mono)
                elif c == -1:
                    terms.append(f"-{mono}")
                else:
                    terms.append(f"{cs}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


T = Polynomial.from_rationals([0, 1])


def poly_gcd(p, q):
    """Monic gcd by the Euclidean algorithm over Q(sqrt(e))."""
    if p.is_zero() and q.is_zero():
        raise BothZero("gcd(0, 0) is undefined")
    if p.degree < q.degree:
        p, q = q, p
    if q.is_zero():
        return p.monic()
    if q.degree == 0 or p.degree == 0:
        return Polynomial.constant(1, _join(p.e, q.e))
    a, b = p.monic(), q.monic()
    while not b.is_zero():
        if b.degree == 0:
            return Polynomial.constant(1, _join(p.e, q.e))
        a, b = b, a.divmod(b)[1].monic()
    return a


def squarefree(p):
    """p / gcd(p, p')."""
    if p.degree <= 0:
        return p
    return p.exact_div(poly_gcd(p, p.derivative()))


def poly_sqrt(p):
    """Exact square root of a polynomial over Q(sqrt(e)), or None.

    The leading coefficient must be a square in the field; the monic part is
    recovered top-down and verified by squaring.
    """
    if p.is_zero():
        return p
    if p.degree % 2:
        return None
    lc = p.lc()
    rlc = lc.sqrt()
    if rlc is None and not lc.b and lc.a > 0:
        # a rational polynomial may have a root in Q(sqrt(s)) with s from lc
        cand = Surd.sqrt_of(lc.a)
        if p.e == 0 or cand.e == p.e:
            rlc = cand
    if rlc is None:
        return None
    m = p.monic()
    n = m.degree // 2
    cs = m.coefficients
    # root r monic of degree n: match coefficients of t^(2n-1) .. t^n
    r = [None] * (n + 1)
    r[n] = Surd.coerce(1)
    for k in range(n - 1, -1, -1):
        s = cs[n + k]
        for i in range(k + 1, n):
            j = n + k - i
            if k < j <= n:
                s = s - r[i] * r[j]
        r[k] = s / 2
    root = Polynomial(r, p.e)
    if root * root != m:
        return None
    return root.scale(rlc)
