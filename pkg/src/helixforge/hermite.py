"""C1 Hermite interpolation with rational helices.

The tangent indicatrix is the inverse stereographic image of a line (or a
circle) through the projected end tangents. The helix coordinate a3 is a cubic
rational Bezier function whose six parameters are fixed by the end values of
a3, a3' and a3''.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .curves import RVF3, rational_bezier3, stereographic_tangent
from .errors import DegenerateAngle, NoPositiveWeights, PoleTangent, SystemSingular
from .field import Polynomial, RatFun, Surd, to_rational
from .helix import Axis, HelixBasis, RationalHelix, axis_and_angle, helix_basis, helix_from_a3

POLE_TOL = 1e-6

# proper rotations with integer entries, tried in order when a tangent sits
# near the projection pole (0, 0, 1)
_ROTATIONS = (
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((0, 0, 1), (1, 0, 0), (0, 1, 0)),
    ((0, 1, 0), (0, 0, 1), (1, 0, 0)),
    ((1, 0, 0), (0, -1, 0), (0, 0, -1)),
    ((-1, 0, 0), (0, 1, 0), (0, 0, -1)),
    ((0, 0, -1), (0, 1, 0), (1, 0, 0)),
    ((1, 0, 0), (0, 0, -1), (0, 1, 0)),
)


def _exact(x):
    """Exact field element from int, str, Fraction, Surd, or float (binary value)."""
    if isinstance(x, Surd):
        return x
    if isinstance(x, str):
        from .field import parse_scalar

        return parse_scalar(x)
    if isinstance(x, float):
        return Surd.coerce(Fraction(x))
    return Surd.coerce(to_rational(x))


def _vec(v):
    v = tuple(_exact(c) for c in v)
    if len(v) != 3:
        raise ValueError("expected a 3-vector")
    return v


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _apply(R, v):
    return tuple(R[i][0] * v[0] + R[i][1] * v[1] + R[i][2] * v[2] for i in range(3))


def _apply_t(R, v):
    return tuple(R[0][i] * v[0] + R[1][i] * v[1] + R[2][i] * v[2] for i in range(3))


def normalize_tangent(v):
    """Unit vector in the direction of v.

    Exact when |v|^2 has a square root in the field of v. Otherwise the
    stereographic coordinates of the float direction are rounded to nearby
    rationals (error ~1e-30), which lands exactly on the sphere.
    """
    v = _vec(v)
    n2 = _dot(v, v)
    if not n2:
        raise ValueError("zero tangent vector")
    n = n2.sqrt()
    if n is not None:
        return tuple(c / n for c in v)
    with mpmath.workdps(60):
        vm = [c.to_mpf() for c in v]
        nm = mpmath.sqrt(sum(x * x for x in vm))
        u = [x / nm for x in vm]
        # pick the projection pole away from v
        sgn = -1 if u[2] > 0 else 1
        den = 1 + sgn * u[2]
        b1 = Fraction(mpmath.nstr(u[0] / den, 40)).limit_denominator(10**15)
        b2 = Fraction(mpmath.nstr(u[1] / den, 40)).limit_denominator(10**15)
    b1, b2 = to_rational(b1), to_rational(b2)
    q = b1 * b1 + b2 * b2
    z = (1 - q) / (1 + q) * sgn
    return (Surd.coerce(2 * b1 / (1 + q)), Surd.coerce(2 * b2 / (1 + q)), Surd.coerce(z))


def inverse_stereographic(t):
    """(b1, b2) with t = (2 b1, 2 b2, |b|^2 - 1) / (|b|^2 + 1)."""
    x, y, z = t
    den = 1 - z
    if not den:
        raise PoleTangent("tangent equals the projection pole (0, 0, 1)")
    return x / den, y / den


@dataclass
class HermiteData:
    p0: tuple
    t0: tuple
    p1: tuple
    t1: tuple

    def __post_init__(self):
        self.p0 = _vec(self.p0)
        self.p1 = _vec(self.p1)
        self.t0 = normalize_tangent(self.t0)
        self.t1 = normalize_tangent(self.t1)

    def rotated(self, R):
        return HermiteData(_apply(R, self.p0), _apply(R, self.t0), _apply(R, self.p1), _apply(R, self.t1))


@dataclass
class HermiteSolution:
    helix: RationalHelix
    bezier: tuple  # (c0, c1, c2, c3, w1, w2)
    residuals: dict
    b1: RatFun = None
    b2: RatFun = None
    rotation: tuple = None
    boundary: tuple = ()
    warnings: list = field(default_factory=list)


def _near_pole(t):
    return float(abs(1 - t[2])) < POLE_TOL


def project_tangents(t0, t1, mode="line", shape=None):
    """Linear (or circular) b1, b2 whose stereographic image passes through
    t0 at parameter 0 and t1 at parameter 1."""
    t0, t1 = normalize_tangent(t0), normalize_tangent(t1)
    if _near_pole(t0) or _near_pole(t1):
        raise PoleTangent("a tangent lies at the projection pole (0, 0, 1)")
    P0 = inverse_stereographic(t0)
    P1 = inverse_stereographic(t1)
    if mode == "line":
        b1 = RatFun(Polynomial([P0[0], P1[0] - P0[0]]))
        b2 = RatFun(Polynomial([P0[1], P1[1] - P0[1]]))
        return b1, b2
    if mode != "circle":
        raise ValueError(f"unknown projection mode {mode!r}")
    if shape is None:
        raise ValueError("the circle option needs a shape point")
    # z(t) = (Q t + P0 k) / (t + k) maps 0 -> P0, 1 -> P1, infinity -> Q
    Q = (_exact(shape[0]), _exact(shape[1]))
    p0, p1, q = complex_tuple(P0), complex_tuple(P1), complex_tuple(Q)
    den_k = csub(p0, p1)
    if not den_k[0] and not den_k[1]:
        raise DegenerateAngle("equal end tangents")
    k = cdiv(csub(p1, q), den_k)
    # numerator (Q t + P0 k) * conj(t + k), denominator |t + k|^2
    a = (Polynomial([k[0], 1]), Polynomial([k[1]]))  # t + k
    ac = (a[0], -a[1])
    nq = (Polynomial([p0[0] * k[0] - p0[1] * k[1], q[0]]), Polynomial([p0[0] * k[1] + p0[1] * k[0], q[1]]))
    num = (nq[0] * ac[0] - nq[1] * ac[1], nq[0] * ac[1] + nq[1] * ac[0])
    den = a[0] * a[0] + a[1] * a[1]
    return RatFun(num[0], den), RatFun(num[1], den)


def complex_tuple(p):
    return (Surd.coerce(p[0]), Surd.coerce(p[1]))


def csub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def cdiv(a, b):
    n = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / n, (a[1] * b[0] - a[0] * b[1]) / n)


def _rvf_at(v, x):
    return tuple(c(x) for c in v)


def boundary_a3_data(data, t, basis):
    """(a3(0), a3'(0), a3''(0), a3(1), a3'(1), a3''(1)) for a helix through
    p0 at 0 and p1 at 1 with tangent field t.

    Uses a3 = p . w3, a2 = p . w2, a2' = p . w2' and a3' = -a2 c0 D / e_raw,
    with D = det(dir, t, t').
    """
    if not isinstance(basis, HelixBasis):
        raise TypeError("expected a HelixBasis")
    ax = basis.axis
    if ax.e_raw <= 0:
        raise DegenerateAngle("psi = 0")
    t1 = t.derivative()
    dvec = RVF3(*(RatFun.const(c) for c in ax.direction))
    dt = dvec.dot(t.cross(t1))
    dtd = dt.derivative()
    w2d = basis.w2.derivative()
    k = Surd.coerce(ax.c0) / ax.e_raw
    out = []
    for x, p in ((0, data.p0), (1, data.p1)):
        x = to_rational(x)
        w2, w3, w2p = _rvf_at(basis.w2, x), _rvf_at(basis.w3, x), _rvf_at(w2d, x)
        a3 = _dot(p, w3)
        a2 = _dot(p, w2)
        a2p = _dot(p, w2p)
        D, Dp = dt(x), dtd(x)
        a3p = -a2 * k * D
        a3pp = -(a2p * D + a2 * Dp) * k
        out.append((a3, a3p, a3pp))
    (A0, A1, A2), (B0, B1, B2) = out
    return (A0, A1, A2, B0, B1, B2)


def _bezier_derivs(c0, c1, c2, c3, w1, w2):
    """End values a(0), a'(0), a''(0), a(1), a'(1), a''(1) of the cubic."""
    X, Y = w1 * c1, w2 * c2
    A1 = (X - w1 * c0) * 3
    A2 = A1 * 2 + (Y - c0 * w2) * 6 - A1 * w1 * 6
    B1 = (c3 * w2 - Y) * 3
    # mirror image of the t = 0 relation
    B2 = B1 * -2 + (X - c3 * w1) * 6 + B1 * w2 * 6
    return (c0, A1, A2, c3, B1, B2)


def solve_bezier(boundary, *, allow_negative=False):
    """Cubic rational Bezier (c0, c1, c2, c3, w1, w2) matching six end values.

    With X = w1 c1 and Y = w2 c2 the end conditions are linear in
    (X, Y, w1, w2); the first derivatives give X and Y in terms of the
    weights and the second derivatives leave a 2x2 system for w1, w2.
    """
    A0, A1, A2, B0, B1, B2 = (_exact(x) for x in boundary)
    c0, c3 = A0, B0
    m11, m12 = (c0 - c3) * 6, B1 * 6
    m21, m22 = A1 * -6, (c3 - c0) * 6
    r1 = B2 + B1 * 2 - A1 * 2
    r2 = A2 - A1 * 2 + B1 * 2
    det = m11 * m22 - m12 * m21
    if det:
        w1 = (r1 * m22 - m12 * r2) / det
        w2 = (m11 * r2 - r1 * m21) / det
    else:
        w1, w2 = _singular_weights(m11, m12, m21, m22, r1, r2)
    if not w1 or not w2:
        raise SystemSingular("a zero weight leaves an inner control value undetermined")
    c1 = (A1 / 3 + w1 * c0) / w1
    c2 = (w2 * c3 - B1 / 3) / w2
    sol = (c0, c1, c2, c3, w1, w2)
    if (w1.sign() <= 0 or w2.sign() <= 0) and not allow_negative:
        raise NoPositiveWeights(f"weights w1 = {w1}, w2 = {w2} are not positive", solution=sol)
    return sol


def _singular_weights(m11, m12, m21, m22, r1, r2):
    """Least-change solution near the seed (1, 1) when the 2x2 system is
    singular but consistent."""
    rows = [(m11, m12, r1), (m21, m22, r2)]
    rows = [rw for rw in rows if rw[0] or rw[1]]
    if not rows:
        if r1 or r2:
            raise SystemSingular("inconsistent weight equations")
        return Surd.coerce(1), Surd.coerce(1)
    a, b, r = rows[0]
    for a2, b2, rr in rows[1:]:
        # second row must be a multiple of the first
        if a * b2 - a2 * b or a * rr - a2 * r or b * rr - b2 * r:
            raise SystemSingular("inconsistent weight equations")
    # project (1, 1) onto the line a w1 + b w2 = r
    lam = (r - a - b) / (a * a + b * b)
    return 1 + lam * a, 1 + lam * b


def _rotate_rvf(R, v):
    cs = list(v)
    return RVF3(*(sum((cs[j] * R[i][j] for j in range(3) if R[i][j]), RatFun.const(0)) for i in range(3)))


def _unrotate_helix(h, R):
    """Map a helix built in rotated coordinates back with R^T."""
    Rt = tuple(tuple(R[j][i] for j in range(3)) for i in range(3))
    ax = h.axis
    direction = tuple(int(x) for x in _apply_t(R, ax.direction))
    u = _apply_t(R, ax.u)
    axis = Axis(direction, ax.d, ax.c0, ax.e_raw, ax.e, u, ax.cos_psi, ax.sin2_psi)
    b = h.basis
    basis = HelixBasis(axis, _rotate_rvf(Rt, b.w1), _rotate_rvf(Rt, b.w2), _rotate_rvf(Rt, b.w3))
    return RationalHelix(_rotate_rvf(Rt, h.r), basis.w1, basis, h.a1, h.a2, h.a3, h.sigma, h.cusps)


def interpolate(data, mode="line", shape=None, allow_negative=False, orientation="curvature"):
    """Rational helix r with r(0) = p0, r(1) = p1, t(0) = t0, t(1) = t1."""
    if not isinstance(data, HermiteData):
        data = HermiteData(*data)
    R = None
    work = data
    if _near_pole(data.t0) or _near_pole(data.t1):
        for cand in _ROTATIONS[1:]:
            rd = data.rotated(cand)
            if not _near_pole(rd.t0) and not _near_pole(rd.t1):
                R, work = cand, rd
                break
    b1, b2 = project_tangents(work.t0, work.t1, mode=mode, shape=shape)
    t = stereographic_tangent(b1, b2)
    axis = axis_and_angle(t, orientation)
    basis = helix_basis(t, axis)
    boundary = boundary_a3_data(work, t, basis)
    bez = solve_bezier(boundary, allow_negative=allow_negative)
    a3 = rational_bezier3(*bez)
    h = helix_from_a3(a3, t, axis=axis)
    if R is not None:
        h = _unrotate_helix(h, R)
    zero, one = to_rational(0), to_rational(1)
    r0, r1 = _rvf_at(h.r, zero), _rvf_at(h.r, one)
    tt0, tt1 = _rvf_at(h.t, zero), _rvf_at(h.t, one)
    res = {
        "p0": tuple(a - b for a, b in zip(r0, data.p0)),
        "p1": tuple(a - b for a, b in zip(r1, data.p1)),
        "t0": tuple(a - b for a, b in zip(tt0, data.t0)),
        "t1": tuple(a - b for a, b in zip(tt1, data.t1)),
    }
    res["exact_zero"] = all(not c for v in res.values() for c in v)
    return HermiteSolution(h, bez, res, b1, b2, R, boundary)


__all__ = [
    "HermiteData",
    "HermiteSolution",
    "boundary_a3_data",
    "interpolate",
    "inverse_stereographic",
    "normalize_tangent",
    "project_tangents",
    "solve_bezier",
]
