"""Rational helices: axis, orthonormal helix basis, construction from a3, and
the rational rotation-minimizing frame condition.

Conventions. The axis is carried as an integer direction vector ``dir``
pointing along t' x t'' (or flipped so that c0 = t . dir > 0 on request),
with d = |dir|^2, so u = dir / sqrt(d) and cos(psi) = c0 / sqrt(d).
With e_raw = d - c0^2 the helix basis is

    w1 = t,  w2 = dir x t / sqrt(e_raw),  w3 = (dir - c0 t) / sqrt(e_raw),

which lives in Q(sqrt(e)) for e the squarefree part of e_raw.
"""

import math
import warnings
from dataclasses import dataclass, field
from functools import reduce

import mpmath
from gmpy2 import mpq

from .curves import RVF3, SampledFunction, curvature_torsion_speed
from .errors import (
    CuspDetected,
    DegenerateAngle,
    NotCoprime,
    NotHelical,
    PlanarCurve,
    ZeroSpeedCurve,
    ZeroSpeedWarning,
)
from .curves import _sign_at_half as _sign_at
from .field import Polynomial, RatFun, Surd, isolate_roots, poly_gcd, ratfun_sqrt, squarefree_part, to_rational


@dataclass(frozen=True)
class Axis:
    direction: tuple  # integer vector
    d: int
    c0: object  # rational, t . direction
    e_raw: object  # d - c0^2
    e: int
    u: tuple  # unit axis, Surds over Q(sqrt(d))
    cos_psi: Surd
    sin2_psi: object

    def __iter__(self):
        return iter((self.u, self.cos_psi, self.e))

    @property
    def sqrt_e_raw(self):
        return Surd.sqrt_of(self.e_raw)

    @property
    def cot_psi(self):
        """c0 / sqrt(e_raw), an element of Q(sqrt(e))."""
        return Surd.coerce(self.c0) / self.sqrt_e_raw

    @property
    def tan2_psi(self):
        return self.e_raw / (self.c0 * self.c0)


@dataclass(frozen=True)
class HelixBasis:
    axis: Axis
    w1: RVF3
    w2: RVF3
    w3: RVF3

    @property
    def u(self):
        return self.axis.u

    @property
    def cos_psi(self):
        return self.axis.cos_psi

    @property
    def sin2_psi(self):
        return self.axis.sin2_psi

    def gram(self):
        ws = (self.w1, self.w2, self.w3)
        return [[a.dot(b) for b in ws] for a in ws]

    def is_orthonormal(self):
        g = self.gram()
        return all(g[i][j] == (1 if i == j else 0) for i in range(3) for j in range(3))


@dataclass
class RationalHelix:
    r: RVF3
    t: RVF3
    basis: HelixBasis
    a1: RatFun
    a2: RatFun
    a3: RatFun
    sigma: RatFun
    cusps: list = field(default_factory=list)

    @property
    def axis(self):
        return self.basis.axis

    def omega(self):
        """Rotation rate of (w2, w3) about t, i.e. w2' . w3 = tau * sigma."""
        ax = self.axis
        dt = _det_const(ax.direction, self.t, self.t.derivative())
        return dt * (ax.c0 / ax.e_raw)

    def check(self):
        """Exact invariants: r' = sigma t, t . dir = c0, r = a1 t + a2 w2 + a3 w3."""
        b = self.basis
        ok_speed = (self.r.derivative() - self.t.scale(self.sigma)).is_zero()
        ok_axis = _dot_const(self.axis.direction, self.t) == RatFun.const(self.axis.c0)
        recon = b.w1.scale(self.a1) + b.w2.scale(self.a2) + b.w3.scale(self.a3)
        return ok_speed and ok_axis and recon == self.r

    def __repr__(self):
        return f"RationalHelix(r={self.r!r})"


def _const_vec(v):
    return RVF3(*(RatFun.const(c) for c in v))


def _dot_const(vec, f):
    return f.x * vec[0] + f.y * vec[1] + f.z * vec[2]


def _det_const(vec, a, b):
    return _dot_const(vec, a.cross(b))


def _integer_direction(ratios):
    qs = [to_rational(r) for r in ratios]
    den = reduce(lambda x, y: x * y // math.gcd(x, y), (int(q.denominator) for q in qs), 1)
    ints = [int(q * den) for q in qs]
    g = reduce(math.gcd, (abs(i) for i in ints if i), 0) or 1
    return tuple(i // g for i in ints)


def axis_and_angle(t, orientation="curvature"):
    """Constant axis direction and angle of a helical unit tangent field.

    ``orientation="curvature"`` points u along t' x t'' (cos psi may then be
    negative); ``"acute"`` flips u so that cos psi > 0.
    """
    if orientation not in ("curvature", "acute"):
        raise ValueError(f"unknown orientation {orientation!r}")
    t1 = t.derivative()
    if t1.is_zero():
        raise DegenerateAngle("the tangent field is constant")
    cr = t1.cross(t1.derivative())
    comps = list(cr)
    if all(c.is_zero() for c in comps):
        raise DegenerateAngle("t' x t'' vanishes identically")
    piv = next(c for c in comps if not c.is_zero())
    ratios = []
    for c in comps:
        q = c / piv
        if not q.is_constant():
            raise NotHelical("t' x t'' does not have a constant direction")
        val = q.constant_value()
        if val.b:
            raise NotHelical("axis direction is not rational; unsupported field tower")
        ratios.append(val.a)
    direction = _integer_direction(ratios)
    c = _dot_const(direction, t)
    if not c.is_constant():
        raise NotHelical("t . u is not constant")
    c0 = c.constant_value().a
    if c0 == 0:
        raise PlanarCurve("cos psi = 0: the tangent traces a great circle")
    if orientation == "acute":
        flip = c0 < 0
    else:
        flip = _sign_at(_dot_const(direction, cr)) < 0
    if flip:
        direction = tuple(-x for x in direction)
        c0 = -c0
    d = sum(x * x for x in direction)
    e_raw = mpq(d) - c0 * c0
    if e_raw <= 0:
        raise DegenerateAngle("sin psi = 0")
    e, _ = squarefree_part(e_raw)
    rd = Surd.sqrt_of(d)
    u = tuple(Surd.coerce(x) / rd for x in direction)
    cos_psi = Surd.coerce(c0) / rd
    return Axis(direction, d, c0, e_raw, e, u, cos_psi, e_raw / d)


def helix_basis(t, axis):
    """Rational orthonormal frame (t, u x t / sin psi, (u - cos psi t) / sin psi)."""
    if axis.e_raw <= 0:
        raise DegenerateAngle("psi = 0: tangent is constant")
    s = axis.sqrt_e_raw
    dvec = _const_vec(axis.direction)
    w2 = dvec.cross(t) / s
    w3 = (dvec - t.scale(axis.c0)) / s
    return HelixBasis(axis, t, w2, w3)


def helix_from_a3(a3, t, *, axis=None, orientation="curvature"):
    """Rational helix with unit tangent t and coordinate a3 = r . w3."""
    if not isinstance(a3, RatFun):
        a3 = RatFun.const(a3) if not isinstance(a3, Polynomial) else RatFun(a3)
    axis = axis or axis_and_angle(t, orientation)
    basis = helix_basis(t, axis)
    s = axis.sqrt_e_raw
    dt = _det_const(axis.direction, t, t.derivative())
    if dt.is_zero():
        raise NotHelical("det(u, t, t') vanishes identically")
    a2 = -a3.derivative() * axis.e_raw / (dt * axis.c0)
    a1 = a3 * (Surd.coerce(axis.c0) / s) - a2.derivative() * s / dt
    sigma = a1.derivative() - a2 * dt / s
    r = t.scale(a1) + basis.w2.scale(a2) + basis.w3.scale(a3)
    cusps = []
    if sigma.is_zero():
        warnings.warn("sigma vanishes identically: the helix is a single point", ZeroSpeedWarning, stacklevel=2)
    else:
        cusps = isolate_roots(sigma.num, 0, 1)
        if cusps:
            warnings.warn(f"speed vanishes at t = {cusps}", CuspDetected, stacklevel=2)
    return RationalHelix(r, t, basis, a1, a2, a3, sigma, cusps)


def _mp_norm(v):
    return mpmath.sqrt(sum(x * x for x in v))


def helix_verify(r, samples=64, dps=50):
    """Report whether tau / kappa is constant along r.

    The exact test compares (tau / kappa)^2 = tau^2 |r'|^6 / |r' x r''|^2 with
    a constant. The signed value and the axis residual come from sampling.
    When r' . r' is a perfect square the signed speed is used, so kappa and
    the unit tangent stay continuous through cusps.
    """
    r1 = r.derivative()
    if r1.is_zero():
        raise ZeroSpeedCurve("r' vanishes identically")
    r2 = r1.derivative()
    r3 = r2.derivative()
    c = r1.cross(r2)
    cc = c.dot(c)
    report = {"is_helix": False, "planar": False, "tau_over_kappa": None, "axis_residual": None, "exact": True}
    if cc.is_zero():
        report.update(planar=True, line=True)
        return report
    tau = c.dot(r3) / cc
    if tau.is_zero():
        report.update(is_helix=True, planar=True, tau_over_kappa=0.0, axis_residual=0.0)
        return report
    s2 = r1.dot(r1)
    ratio2 = tau * tau * s2 * s2 * s2 / cc
    is_const = ratio2.is_constant()
    sig = ratfun_sqrt(s2)
    if sig is not None and _sign_at(sig) < 0:
        sig = -sig
    ts = [mpmath.mpf(i + 1) / (samples + 1) for i in range(samples)]
    with mpmath.workdps(dps):
        vals = []
        axes = []
        for x in ts:
            try:
                v1, v2 = r1.eval_mp(x), r2.eval_mp(x)
            except Exception:
                continue
            cv = [v1[1] * v2[2] - v1[2] * v2[1], v1[2] * v2[0] - v1[0] * v2[2], v1[0] * v2[1] - v1[1] * v2[0]]
            ncv = _mp_norm(cv)
            sp = _mp_norm(v1)
            if ncv == 0 or sp == 0:
                continue
            if sig is not None and sig.eval_mp(x) < 0:
                sp = -sp
            kap = ncv / sp**3
            tv = tau.eval_mp(x)
            vals.append(tv / kap)
            # Darboux direction tau T + kappa B, normalized
            dv = [tv * v1[i] / sp + kap * cv[i] / ncv for i in range(3)]
            nd = _mp_norm(dv)
            axes.append([x_ / nd for x_ in dv])
        spread = max(vals) - min(vals) if vals else mpmath.inf
        ref = axes[len(axes) // 2] if axes else None
        # the axis is a line: compare directions up to sign
        axis_res = (
            max(min(_mp_norm([a[i] - ref[i] for i in range(3)]), _mp_norm([a[i] + ref[i] for i in range(3)])) for a in axes)
            if axes
            else mpmath.inf
        )
    if is_const:
        report["is_helix"] = True
        report["tau_over_kappa"] = float(vals[len(vals) // 2]) if vals else None
        report["tau_over_kappa_sq"] = ratio2.constant_value()
    else:
        report["exact"] = False
        report["is_helix"] = bool(spread < mpmath.mpf("1e-20"))
        report["tau_over_kappa"] = float(vals[len(vals) // 2]) if vals else None
    report["spread"] = float(spread)
    report["axis_residual"] = float(axis_res)
    return report


def kappa_over_tau(h):
    """kappa/tau of a constructed helix from sampled curvature; equals tan psi."""
    kappa, tau, _ = curvature_torsion_speed(h.r)
    return SampledFunction(lambda x: kappa(x) / tau.eval_mp(x), label="kappa/tau")


# --- rational rotation-minimizing frames ------------------------------------


def _as_poly(p):
    if isinstance(p, Polynomial):
        return p
    if isinstance(p, RatFun):
        if not p.is_polynomial():
            raise TypeError("expected a polynomial")
        return p.num.scale(p.den.lc().inverse())
    return Polynomial.constant(p)


def rrmf_rhs(h):
    """Half the rotation rate of the helix basis, (1/2) cot(psi) (t' . w2)."""
    return h.omega() * mpq(1, 2)


def rrmf_check(h, a, b):
    """Residual (a b' - a' b)/(a^2 + b^2) - (1/2) cot(psi) |t'| as an exact RatFun.

    |t'| is taken with the sign of t' . w2 so that the right-hand side is the
    rational function (1/2) c0 det(dir, t, t') / e_raw.
    """
    a, b = _as_poly(a), _as_poly(b)
    if a.is_zero() and b.is_zero():
        raise NotCoprime("a and b are both zero")
    if not a.is_zero() and not b.is_zero() and poly_gcd(a, b).degree > 0:
        raise NotCoprime("a and b share a common factor")
    lhs = RatFun(a * b.derivative() - a.derivative() * b, a * a + b * b)
    return lhs - rrmf_rhs(h)


@dataclass
class SearchResult:
    feasible: bool
    planar: bool = False
    a: Polynomial = None
    b: Polynomial = None
    equations: list = field(default_factory=list)
    certificate: list = field(default_factory=list)
    rhs: RatFun = None
    certified: bool = True


def degree2_normal_tangent(m, n):
    """Degree-2 indicatrix in normal form, b1 = n, b2 = m t."""
    from .curves import stereographic_tangent

    return stereographic_tangent(RatFun.const(n), RatFun(Polynomial([0, m])))


def rrmf_degree2_search(m, n, max_deg=1):
    """Decide whether polynomials of degree <= max_deg give an RRMF on the
    degree-2 helix with b1 = n, b2 = m t.

    The identity (a b' - a' b) Q - P (a^2 + b^2) = 0 with P/Q the exact
    right-hand side is expanded by coefficients. The side condition
    z (a(0)^2 + b(0)^2) = 1 encodes coprimality (a and b cannot both vanish
    at 0). A reduced Groebner basis equal to [1] certifies infeasibility.
    """
    import sympy

    m, n = to_rational(m), to_rational(n)
    if m == 0:
        raise ValueError("m must be nonzero")
    if n == 0:
        return SearchResult(True, planar=True, a=Polynomial(()), b=Polynomial.constant(1), rhs=RatFun.const(0))
    t = degree2_normal_tangent(m, n)
    axis = axis_and_angle(t)
    dt = _det_const(axis.direction, t, t.derivative())
    rhs = dt * (axis.c0 / axis.e_raw) * mpq(1, 2)
    x = sympy.Symbol("t")
    ac = sympy.symbols(f"a0:{max_deg + 1}")
    bc = sympy.symbols(f"b0:{max_deg + 1}")
    z = sympy.Symbol("z")
    A = sum(c * x**i for i, c in enumerate(ac))
    B = sum(c * x**i for i, c in enumerate(bc))

    def _to_sym(p):
        return sum(sympy.Rational(int(c.a.numerator), int(c.a.denominator)) * x**i for i, c in enumerate(p.coefficients))

    P, Q = _to_sym(rhs.num), _to_sym(rhs.den)
    expr = sympy.expand((A * sympy.diff(B, x) - sympy.diff(A, x) * B) * Q - P * (A**2 + B**2))
    eqs = [c for c in sympy.Poly(expr, x).all_coeffs() if c != 0]
    eqs.append(z * (ac[0] ** 2 + bc[0] ** 2) - 1)
    gb = sympy.groebner(eqs, *ac, *bc, z, order="grevlex")
    basis = [str(g) for g in gb.exprs]
    if list(gb.exprs) == [1]:
        return SearchResult(False, equations=[str(e) for e in eqs], certificate=basis, rhs=rhs)
    sols = sympy.solve(list(gb.exprs), [*ac, *bc, z], dict=True)
    for sol in sols:
        vals = [sol.get(c, 0) for c in (*ac, *bc)]
        if all(v.is_rational for v in vals):
            a = Polynomial([to_rational(str(v)) for v in vals[: max_deg + 1]])
            b = Polynomial([to_rational(str(v)) for v in vals[max_deg + 1 :]])
            return SearchResult(True, a=a, b=b, equations=[str(e) for e in eqs], certificate=basis, rhs=rhs)
    # no rational solution found, but the basis does not rule out others
    return SearchResult(False, equations=[str(e) for e in eqs], certificate=basis, rhs=rhs, certified=False)


__all__ = [
    "Axis",
    "HelixBasis",
    "RationalHelix",
    "SearchResult",
    "axis_and_angle",
    "helix_basis",
    "helix_from_a3",
    "helix_verify",
    "kappa_over_tau",
    "rrmf_check",
    "rrmf_degree2_search",
    "rrmf_rhs",
    "degree2_normal_tangent",
]
