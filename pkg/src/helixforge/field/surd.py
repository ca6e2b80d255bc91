"""Exact scalars a + b*sqrt(e) with rational a, b and squarefree e."""

from fractions import Fraction
from functools import lru_cache

import gmpy2
import mpmath
from gmpy2 import mpq, mpz

from ..errors import DiscriminantMismatch, DivisionByZero

Rational = type(mpq(0))
ZERO = mpq(0)
ONE = mpq(1)


def to_rational(x):
    """Coerce int, Fraction, float, mpq or a string like ``"-3/4"`` to mpq."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, (int, type(mpz(0)))):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        return mpq(x)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            p, q = s.split("/")
            return mpq(int(p), int(q))
        return mpq(Fraction(s).numerator, Fraction(s).denominator)
    if isinstance(x, Surd):
        if x.b:
            raise ValueError(f"{x!r} is not rational")
        return x.a
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def rational_str(q):
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@lru_cache(maxsize=256)
def _squarefree_int(n):
    """Return (s, k) with n == k*k*s and s squarefree, for n >= 0."""
    if n == 0:
        return 0, 1
    s, k = 1, 1
    p = 2
    while p * p <= n and p < 100000:
        while n % (p * p) == 0:
            n //= p * p
            k *= p
        if n % p == 0:
            n //= p
            s *= p
        p += 1 if p == 2 else 2
    if n > 1:
        if gmpy2.is_square(n):
            k *= int(gmpy2.isqrt(n))
        elif p * p > n or gmpy2.is_prime(n):
            s *= n
        else:
            from sympy import factorint

            for prime, mult in factorint(n).items():
                k *= prime ** (mult // 2)
                if mult % 2:
                    s *= prime
    return s, k


def squarefree_part(q):
    """Split a non-negative rational as ``q == k**2 * s`` with squarefree integer s.

    Returns ``(s, k)`` where k is a positive rational.
    """
    q = to_rational(q)
    if q < 0:
        raise ValueError("squarefree_part needs a non-negative argument")
    if q == 0:
        return 0, ONE
    num, den = int(q.numerator), int(q.denominator)
    s, k = _squarefree_int(num * den)
    return s, mpq(k, den)


def _join(e1, e2):
    if e1 == e2 or e2 == 0:
        return e1
    if e1 == 0:
        return e2
    raise DiscriminantMismatch(f"cannot combine sqrt({e1}) and sqrt({e2}) quantities")


class Surd:
    """Immutable element a + b*sqrt(e) of the quadratic field Q(sqrt(e)).

    Plain rationals (e == 0) embed into every field, so they combine with
    anything. For e in (0, 1) the surd part is folded into ``a``.
    """

    __slots__ = ("a", "b", "e")

    def __init__(self, a=0, b=0, e=0):
        a = to_rational(a)
        b = to_rational(b)
        e = int(e)
        if e < 0:
            raise ValueError("discriminant must be non-negative")
        if e == 1:
            a, b = a + b, ZERO
        elif e == 0:
            b = ZERO
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "e", e)

    def __setattr__(self, name, value):
        raise AttributeError("Surd is immutable")

    @classmethod
    def _raw(cls, a, b, e):
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "e", e)
        return obj

    @classmethod
    def sqrt_of(cls, q):
        """Exact square root of a non-negative rational as a Surd."""
        s, k = squarefree_part(q)
        if s in (0, 1):
            return cls(k if s else 0)
        return cls._raw(ZERO, k, s)

    @staticmethod
    def coerce(x):
        if isinstance(x, Surd):
            return x
        return Surd._raw(to_rational(x), ZERO, 0)

    def is_rational(self):
        return self.b == 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __add__(self, other):
        o = other if isinstance(other, Surd) else Surd.coerce(other)
        return Surd._raw(self.a + o.a, self.b + o.b, _join(self.e, o.e))

    __radd__ = __add__

    def __neg__(self):
        return Surd._raw(-self.a, -self.b, self.e)

    def __sub__(self, other):
        o = other if isinstance(other, Surd) else Surd.coerce(other)
        return Surd._raw(self.a - o.a, self.b - o.b, _join(self.e, o.e))

    def __rsub__(self, other):
        return Surd.coerce(other) - self

    def __mul__(self, other):
        o = other if isinstance(other, Surd) else Surd.coerce(other)
        e = _join(self.e, o.e)
        return Surd._raw(self.a * o.a + e * self.b * o.b, self.a * o.b + self.b * o.a, e)

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise DivisionByZero("inverse of zero")
        if not self.b:
            return Surd._raw(1 / self.a, ZERO, self.e)
        n = self.a * self.a - self.e * self.b * self.b
        return Surd._raw(self.a / n, -self.b / n, self.e)

    def __truediv__(self, other):
        o = other if isinstance(other, Surd) else Surd.coerce(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return Surd.coerce(other) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out, base = Surd._raw(ONE, ZERO, self.e), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return Surd._raw(self.a, -self.b, self.e)

    def norm(self):
        """Field norm a^2 - e b^2 (rational)."""
        return self.a * self.a - self.e * self.b * self.b

    def sign(self):
        """Exact sign (-1, 0, 1) of the real number a + b*sqrt(e)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: compare a^2 against e b^2
        d = self.a * self.a - self.e * self.b * self.b
        return sa if d > 0 else (-sa if d < 0 else 0)

    def __eq__(self, other):
        if isinstance(other, Surd):
            if self.b or other.b:
                return self.a == other.a and self.b == other.b and self.e == other.e
            return self.a == other.a
        try:
            return not self.b and self.a == to_rational(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.e))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def sqrt(self):
        """Exact square root in the same field, or None when it does not exist."""
        if self.sign() < 0:
            return None
        if not self:
            return Surd._raw(ZERO, ZERO, self.e)
        if not self.b:
            num, den = self.a.numerator, self.a.denominator
            if gmpy2.is_square(num * den):
                return Surd._raw(mpq(gmpy2.isqrt(num * den), den), ZERO, self.e)
            if self.e > 1:
                y2 = self.a / self.e
                n2, d2 = y2.numerator, y2.denominator
                if gmpy2.is_square(n2 * d2):
                    return Surd._raw(ZERO, mpq(gmpy2.isqrt(n2 * d2), d2), self.e)
            return None
        n = self.norm()
        if n < 0 or not gmpy2.is_square(n.numerator * n.denominator):
            return None
        rn = mpq(gmpy2.isqrt(n.numerator * n.denominator), n.denominator)
        for x2 in ((self.a + rn) / 2, (self.a - rn) / 2):
            if x2 <= 0 or not gmpy2.is_square(x2.numerator * x2.denominator):
                continue
            x = mpq(gmpy2.isqrt(x2.numerator * x2.denominator), x2.denominator)
            y = self.b / (2 * x)
            cand = Surd._raw(x, y, self.e)
            if cand.sign() < 0:
                cand = -cand
            if cand * cand == self:
                return cand
        return None

    def to_mpf(self, dps=None):
        ctx = mpmath.mp
        if dps is not None:
            with mpmath.workdps(dps):
                return self.to_mpf()
        val = ctx.mpf(int(self.a.numerator)) / int(self.a.denominator)
        if self.b:
            val += ctx.mpf(int(self.b.numerator)) / int(self.b.denominator) * ctx.sqrt(self.e)
        return val

    def __float__(self):
        if not self.b:
            return float(self.a)
        with mpmath.workdps(30):
            return float(self.to_mpf())

    def __repr__(self):
        return f"Surd({self})"

    def __str__(self):
        if not self.b:
            return rational_str(self.a)
        bpart = f"{rational_str(self.b)}*sqrt({self.e})"
        if not self.a:
            return bpart
        return f"{rational_str(self.a)}+{bpart}".replace("+-", "-")
