"""Rotation-minimizing frames on rational helices.

The exact RMF rotates the helix basis (w2, w3) by an angle theta with
theta' = -omega, omega = w2' . w3. Writing tan(theta/2) = a/b with
polynomials a, b gives the rational frame

    f2 = -[(a^2 - b^2) w2 - 2ab w3] / (a^2 + b^2)
    f3 = -[2ab w2 + (a^2 - b^2) w3] / (a^2 + b^2)

which equals (cos theta w2 + sin theta w3, -sin theta w2 + cos theta w3).
Replacing tan(theta/2) by a minimax rational approximation yields an
exactly orthonormal frame that is only approximately rotation-minimizing.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from numpy.polynomial import chebyshev as C
from scipy import integrate

from .errors import CuspInInterval, DenominatorRootInDomain, RemezStagnation
from .field import Polynomial, RatFun, has_root_in, poly_gcd
from .remez import MinimaxResult, minimax_rational

log = logging.getLogger(__name__)

N_CHECK = 257


# --- exact angle ------------------------------------------------------------


class AngleFunction:
    """theta(t) = theta0 - int_{t0}^t omega, as piecewise Chebyshev interpolants.

    Node values come from adaptive quadrature; ``error`` is the accumulated
    quadrature estimate plus the interpolation tail.
    """

    def __init__(self, rate, interval, theta0, tol=1e-12, breaks=()):
        self.rate = rate  # callable, float arrays -> d theta / dt
        self.interval = (float(interval[0]), float(interval[1]))
        self.theta0 = float(theta0)
        self.tol = tol
        edges = [self.interval[0], *sorted(float(b) for b in breaks), self.interval[1]]
        self.pieces = []
        self.error = 0.0
        start = self.theta0
        for lo, hi in zip(edges[:-1], edges[1:]):
            series, err = self._fit_piece(lo, hi, start)
            self.pieces.append((lo, hi, series))
            self.error += err
            start = float(series(hi))

    def _fit_piece(self, lo, hi, start):
        f = lambda s: float(self.rate(np.array([s]))[0])  # noqa: E731
        n = 33
        while True:
            x = (lo + hi) / 2 - (hi - lo) / 2 * np.cos(np.pi * np.arange(n) / (n - 1))
            vals = np.empty(n)
            vals[0] = start
            err = 0.0
            for i in range(1, n):
                v, e = integrate.quad(f, x[i - 1], x[i], epsabs=self.tol / (10 * n), epsrel=0, limit=200)
                vals[i] = vals[i - 1] + v
                err += e
            series = C.Chebyshev.fit(x, vals, n - 1, domain=[lo, hi])
            tail = float(np.max(np.abs(series.coef[-3:])))
            if tail < self.tol or n >= 513:
                # drop coefficients at roundoff level
                c = series.coef
                keep = np.flatnonzero(np.abs(c) > 8 * np.finfo(float).eps * max(1.0, np.max(np.abs(c))))
                c = c[: keep[-1] + 1] if len(keep) else c[:1] * 0
                return C.Chebyshev(c, domain=[lo, hi]), err + tail
            n = 2 * n - 1

    def _locate(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        idx = np.searchsorted([p[1] for p in self.pieces[:-1]], t, side="left")
        return t, idx

    def __call__(self, t):
        scalar = np.ndim(t) == 0
        t, idx = self._locate(t)
        out = np.empty_like(t)
        for i, (_, _, s) in enumerate(self.pieces):
            m = idx == i
            out[m] = s(t[m])
        return out[0] if scalar else out

    def derivative(self, t):
        """theta' from the interpolant (not from the integrand)."""
        scalar = np.ndim(t) == 0
        t, idx = self._locate(t)
        out = np.empty_like(t)
        for i, (_, _, s) in enumerate(self.pieces):
            m = idx == i
            out[m] = s.deriv()(t[m])
        return out[0] if scalar else out

    def tan_half(self, t):
        return np.tan(np.asarray(self(t)) / 2)


def _omega_float(h):
    om = h.omega()
    return lambda t: om.eval_float(np.asarray(t, dtype=float))


def initial_angle(h, mode="zero", t0=0.0):
    """theta0 for a named mode: 'zero' gives theta(t0) = 0, 'compat' makes
    tan(theta(t0)/2) equal (1/2) omega(t0)."""
    if isinstance(mode, (int, float)) and not isinstance(mode, bool):
        return float(mode)
    if mode == "zero":
        return 0.0
    if mode == "compat":
        return 2.0 * math.atan(0.5 * float(_omega_float(h)(np.array([t0]))[0]))
    raise ValueError(f"unknown theta0 mode {mode!r}")


def theta(h, theta0=0.0, tol=1e-12, interval=(0.0, 1.0)):
    """Angle of the exact RMF relative to (w2, w3) along the helix h.

    theta0 may be a number or one of 'zero' / 'compat'. The integration
    interval is split at cusps of the speed, with a CuspInInterval warning.
    """
    th0 = initial_angle(h, theta0, interval[0])
    breaks = [c for c in (h.cusps or []) if interval[0] < c < interval[1]]
    if breaks:
        warnings.warn(f"speed vanishes at t = {breaks}; angle is piecewise", CuspInInterval, stacklevel=2)
    om = _omega_float(h)
    return AngleFunction(lambda t: -om(t), interval, th0, tol, breaks)


# --- rational frame ---------------------------------------------------------


def _exact_poly(p):
    if isinstance(p, Polynomial):
        return p
    if isinstance(p, RatFun):
        if not p.is_polynomial():
            raise TypeError("expected a polynomial")
        return p.num.scale(p.den.lc().inverse())
    if np.ndim(p) == 0:
        p = [p]
    return Polynomial([c if isinstance(c, Fraction) else Fraction(float(c)) for c in p])


def rational_frame(w2, w3, a, b):
    """(f2, f3) from the half-angle polynomials a, b."""
    a2, b2, ab = a * a, b * b, a * b
    den = RatFun(a2 + b2)
    c = RatFun(a2 - b2) / den
    s = RatFun(ab) * 2 / den
    f2 = -(w2.scale(c) - w3.scale(s))
    f3 = -(w2.scale(s) + w3.scale(c))
    return f2, f3


@dataclass
class ApproxRMF:
    a: Polynomial
    b: Polynomial
    frame: tuple
    interval: tuple = (0.0, 1.0)
    minimax_error: float = float("nan")
    rmf_condition_error: float = float("nan")
    samples: np.ndarray = None  # t values
    profile: np.ndarray = None  # f2' . f3 at the samples
    orthonormal: bool = None
    minimax: MinimaxResult = None
    form: str = "tan"

    @property
    def f1(self):
        return self.frame[0]

    @property
    def f2(self):
        return self.frame[1]

    @property
    def f3(self):
        return self.frame[2]

    def check_orthonormal(self):
        """fi . fj == delta_ij as exact RatFun identities."""
        f1, f2, f3 = self.frame
        one, zero = RatFun.const(1), RatFun.const(0)
        ok = (
            f2.dot(f2) == one
            and f3.dot(f3) == one
            and f2.dot(f3) == zero
            and f1.dot(f2) == zero
            and f1.dot(f3) == zero
        )
        self.orthonormal = ok
        return ok


def rmf_condition_profile(f2, f3, ts, dps=30):
    """f2'(t) . f3(t) sampled at ts, evaluated in mpmath."""
    d2 = f2.derivative()
    out = np.empty(len(ts))
    with mpmath.workdps(dps):
        for i, t in enumerate(ts):
            u = mpmath.mpf(float(t))
            out[i] = float(sum(x.eval_mp(u) * y.eval_mp(u) for x, y in zip(d2, f3)))
    return out


def assemble_frame(h, a, b, *, interval=(0.0, 1.0), samples=N_CHECK, check=True):
    """Rational approximate RMF from polynomials a, b with tan(theta/2) ~ a/b."""
    a, b = _exact_poly(a), _exact_poly(b)
    q = a * a + b * b
    if q.is_zero():
        raise DenominatorRootInDomain("a and b are both zero")
    if has_root_in(q, interval[0], interval[1]):
        raise DenominatorRootInDomain("a^2 + b^2 vanishes on the interval")
    if not a.is_zero() and not b.is_zero() and poly_gcd(a, b).degree > 0:
        log.warning("a and b share a factor; the frame is unchanged but not reduced")
    f2, f3 = rational_frame(h.basis.w2, h.basis.w3, a, b)
    ts = np.linspace(interval[0], interval[1], samples)
    prof = rmf_condition_profile(f2, f3, ts)
    res = ApproxRMF(a, b, (h.t, f2, f3), tuple(interval), samples=ts, profile=prof)
    res.rmf_condition_error = float(np.max(np.abs(prof)))
    if check:
        res.check_orthonormal()
    return res


# --- approximation driver ---------------------------------------------------


def _pieces_for(angle, interval, grid=2001):
    """Split where |tan(theta/2)| leaves [1/2, 2] the other way, so each piece
    approximates whichever of tan, cot is bounded."""
    ts = np.linspace(interval[0], interval[1], grid)
    ph = angle(ts) / 2
    tn = np.abs(np.tan(ph))
    form = "tan" if tn[0] <= 1 else "cot"
    out = []
    start = ts[0]
    for t, v in zip(ts, tn):
        if form == "tan" and v > 2:
            out.append((start, t, form))
            start, form = t, "cot"
        elif form == "cot" and v < 0.5:
            out.append((start, t, form))
            start, form = t, "tan"
    out.append((start, ts[-1], form))
    return out


def approximate_rmf(
    h, m=3, k=3, theta0="zero", *, norm="abs", tol=1e-13, interval=(0.0, 1.0), angle=None, strict=False
):
    """Minimax-rational approximate RMF along h.

    Returns a list of ApproxRMF, one per piece. A single piece covers the
    interval unless theta/2 nears a multiple of pi/2, where the target
    switches between tan(theta/2) and cot(theta/2). With strict=True a
    RemezStagnation propagates; otherwise the best iterate is used.
    """
    angle = angle or theta(h, theta0, interval=interval)
    out = []
    for lo, hi, form in _pieces_for(angle, interval):
        if form == "tan":
            target = lambda t: np.tan(angle(t) / 2)  # noqa: E731
        else:
            target = lambda t: 1.0 / np.tan(angle(t) / 2)  # noqa: E731
        try:
            mm = minimax_rational(target, (lo, hi), m, k, tol=tol, norm=norm)
        except RemezStagnation as exc:
            if strict:
                raise
            log.warning("%s; using best iterate", exc)
            mm = exc.result
        a, b = mm.polys()
        if form == "cot":
            a, b = b, a
        rmf = assemble_frame(h, a, b, interval=(lo, hi))
        rmf.minimax_error = mm.eps
        rmf.minimax = mm
        rmf.form = form
        out.append(rmf)
    return out


@dataclass
class SampledRMF:
    """The exact RMF built numerically from a quadrature angle."""

    h: object
    angle: AngleFunction
    samples: np.ndarray = None
    profile: np.ndarray = None
    rmf_condition_error: float = float("nan")
    _d: dict = field(default_factory=dict, repr=False)

    def _fields(self):
        if not self._d:
            w2, w3 = self.h.basis.w2, self.h.basis.w3
            self._d = {"w2": w2, "w3": w3, "dw2": w2.derivative(), "dw3": w3.derivative()}
        return self._d

    def frame_at(self, t):
        d = self._fields()
        th = self.angle(t)
        c, s = np.cos(th), np.sin(th)
        w2, w3 = d["w2"].eval_float(t), d["w3"].eval_float(t)
        return c * w2 + s * w3, -s * w2 + c * w3

    def condition(self, t):
        """f2' . f3 with f2' from the product rule and theta' from the interpolant."""
        d = self._fields()
        t = np.asarray(t, dtype=float)
        th, dth = self.angle(t), self.angle.derivative(t)
        c, s = np.cos(th)[..., None], np.sin(th)[..., None]
        w2, w3 = d["w2"].eval_float(t), d["w3"].eval_float(t)
        dw2, dw3 = d["dw2"].eval_float(t), d["dw3"].eval_float(t)
        f2d = dth[..., None] * (-s * w2 + c * w3) + c * dw2 + s * dw3
        f3 = -s * w2 + c * w3
        return np.sum(f2d * f3, axis=-1)


def exact_rmf(h, theta0="zero", tol=1e-12, interval=(0.0, 1.0), samples=N_CHECK):
    angle = theta(h, theta0, tol, interval)
    out = SampledRMF(h, angle)
    out.samples = np.linspace(interval[0], interval[1], samples)
    out.profile = out.condition(out.samples)
    out.rmf_condition_error = float(np.max(np.abs(out.profile)))
    return out


def rrmf_residual_bridge(h, a, b, samples=N_CHECK, interval=(0.0, 1.0)):
    """max |(a b' - a' b)/(a^2 + b^2) - omega/2| over equispaced samples."""
    a, b = _exact_poly(a), _exact_poly(b)
    lhs = RatFun(a * b.derivative() - a.derivative() * b, a * a + b * b)
    res = lhs - h.omega() * Fraction(1, 2)
    ts = np.linspace(interval[0], interval[1], samples)
    with mpmath.workdps(30):
        return max(abs(float(res.eval_mp(mpmath.mpf(float(t))))) for t in ts)


__all__ = [
    "AngleFunction",
    "ApproxRMF",
    "SampledRMF",
    "approximate_rmf",
    "assemble_frame",
    "exact_rmf",
    "initial_angle",
    "rational_frame",
    "rmf_condition_profile",
    "rrmf_residual_bridge",
    "theta",
]
