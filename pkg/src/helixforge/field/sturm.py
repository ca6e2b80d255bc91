"""Real root counting and isolation for polynomials over Q(sqrt(e)).

All sign decisions are exact; only the final root locations are rounded.
"""

from gmpy2 import mpq

from .poly import Polynomial, squarefree
from .surd import to_rational


def sturm_sequence(p):
    p = squarefree(p)
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return [q for q in seq if not q.is_zero()]


def _variations(seq, x):
    last = 0
    count = 0
    for q in seq:
        s = q(x).sign()
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def count_roots(p, lo=0, hi=1, seq=None):
    """Number of distinct real roots of p in the half-open interval (lo, hi]."""
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    if p.degree == 0:
        return 0
    lo, hi = to_rational(lo), to_rational(hi)
    seq = seq or sturm_sequence(p)
    return _variations(seq, lo) - _variations(seq, hi)


def has_root_in(p, lo=0, hi=1):
    """True when p vanishes somewhere in the closed interval [lo, hi]."""
    if p.is_zero():
        return True
    if not p(to_rational(lo)):
        return True
    return count_roots(p, lo, hi) > 0


def isolate_roots(p, lo=0, hi=1, width=mpq(1, 2**60)):
    """Sorted list of roots of p in [lo, hi], each bracketed to ``width`` and
    returned as a float midpoint."""
    if p.is_zero() or p.degree <= 0:
        return []
    lo, hi = to_rational(lo), to_rational(hi)
    seq = sturm_sequence(p)
    sq = seq[0]
    out = []
    if not sq(lo):
        out.append(float(lo))
    stack = [(lo, hi, _variations(seq, lo) - _variations(seq, hi))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1 and b - a < width:
            out.append(float((a + b) / 2))
            continue
        mid = (a + b) / 2
        vm = _variations(seq, mid)
        stack.append((a, mid, _variations(seq, a) - vm))
        stack.append((mid, b, vm - _variations(seq, b)))
    return sorted(set(out))


def denominator_roots(den, lo=0, hi=1):
    """Roots of a RatFun denominator (a Polynomial) on [lo, hi]."""
    if not isinstance(den, Polynomial):
        raise TypeError("expected a Polynomial")
    return isolate_roots(den, lo, hi)
