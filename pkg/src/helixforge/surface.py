"""Sweep surfaces S(s, t) = r(t) + c1(s) f2(t) + c2(s) f3(t).

All partial derivatives are formed exactly on the rational pieces and only
then evaluated, in mpmath at 50 digits by default. With n = S_s x S_t left
unnormalized, the Gauss curvature is

    K = (L N - M^2) / (E G - F^2)^2,   L = S_ss . n,  M = S_st . n,  N = S_tt . n.
"""

import os
import tempfile
import warnings
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .curves import RVF3
from .errors import DegenerateMesh, DomainMismatch, SingularPoint
from .field import Polynomial, RatFun, Surd, to_rational
from .field.parse import parse_ratfun

DPS = 50


# --- profiles ---------------------------------------------------------------


def _rf_s(x):
    if isinstance(x, RatFun):
        return x
    if isinstance(x, Polynomial):
        return RatFun(x)
    if isinstance(x, str):
        return parse_ratfun(x, var="s")
    return RatFun.const(to_rational(x))


@dataclass
class ProfileCurve:
    """Plane cross section c(s) = (c1(s), c2(s)) on [s0, s1].

    For ``polyline`` the pieces list holds one (s_lo, s_hi, c1, c2) line per
    segment; otherwise c1, c2 are RatFuns in s.
    """

    kind: str
    c1: RatFun = None
    c2: RatFun = None
    domain: tuple = (0, 1)
    pieces: list = field(default_factory=list)

    @classmethod
    def line(cls, c1, c2, domain=(0, 1)):
        """c(s) = (c1[0] + c1[1] s, c2[0] + c2[1] s)."""
        if len(c1) != 2 or len(c2) != 2:
            raise ValueError("a line profile takes two coefficients per component")
        p1 = RatFun(Polynomial([to_rational(x) for x in c1]))
        p2 = RatFun(Polynomial([to_rational(x) for x in c2]))
        return cls("line", p1, p2, tuple(domain))

    @classmethod
    def rational(cls, c1, c2, domain=(0, 1)):
        return cls("rational-bezier", _rf_s(c1), _rf_s(c2), tuple(domain))

    @classmethod
    def polyline(cls, points):
        """Piecewise linear through points, parameterized on [0, n-1]."""
        if len(points) < 2:
            raise ValueError("a polyline needs two points")
        pts = [(to_rational(x), to_rational(y)) for x, y in points]
        pieces = []
        for i, (p, q) in enumerate(zip(pts[:-1], pts[1:])):
            # segment i covers s in [i, i+1]
            c1 = RatFun(Polynomial([p[0] - i * (q[0] - p[0]), q[0] - p[0]]))
            c2 = RatFun(Polynomial([p[1] - i * (q[1] - p[1]), q[1] - p[1]]))
            pieces.append((i, i + 1, c1, c2))
        return cls("polyline", domain=(0, len(pts) - 1), pieces=pieces)

    def piece(self, s):
        if self.kind != "polyline":
            return self.c1, self.c2
        for lo, hi, c1, c2 in self.pieces:
            if s <= hi:
                return c1, c2
        return self.pieces[-1][2], self.pieces[-1][3]

    def is_zero(self):
        if self.kind == "polyline":
            return all(c1.is_zero() and c2.is_zero() for _, _, c1, c2 in self.pieces)
        return self.c1.is_zero() and self.c2.is_zero()


# --- surfaces ---------------------------------------------------------------


def _const_rvf(v):
    return RVF3(*(RatFun.const(to_rational(x)) for x in v))


class SweepSurface:
    def __init__(self, spine, f2, f3, profile, t_domain=(0, 1), frame_kind=""):
        self.spine = spine
        self.r = spine.r if hasattr(spine, "r") else spine
        self.f2, self.f3 = f2, f3
        self.profile = profile
        self.t_domain = tuple(t_domain)
        self.frame_kind = frame_kind
        # exact t-derivatives, computed once
        r1 = self.r.derivative()
        a1, b1 = f2.derivative(), f3.derivative()
        self._t = [self.r, r1, r1.derivative(), f2, a1, a1.derivative(), f3, b1, b1.derivative()]
        self._cache = {}

    # exact evaluation at rational parameters
    def __call__(self, s, t):
        s, t = to_rational(s), to_rational(t)
        c1, c2 = self.profile.piece(s)
        a, b = c1(s), c2(s)
        r, f2, f3 = self.r(t), self.f2(t), self.f3(t)
        return tuple(x + a * y + b * z for x, y, z in zip(r, f2, f3))

    def _profile_jet(self, s):
        c1, c2 = self.profile.piece(s)
        key = ("s", c1, c2)
        if key not in self._cache:
            d1, d2 = c1.derivative(), c2.derivative()
            self._cache[key] = (c1, d1, d1.derivative(), c2, d2, d2.derivative())
        return [f.eval_mp(s) for f in self._cache[key]]

    def _spine_jet(self, t):
        return [v.eval_mp(t) for v in self._t]

    def eval_mp(self, s, t, dps=DPS):
        with mpmath.workdps(dps):
            s, t = mpmath.mpf(s), mpmath.mpf(t)
            c = self._profile_jet(s)
            j = self._spine_jet(t)
            return j[0] + c[0] * j[3] + c[3] * j[6]

    def partials(self, s, t, dps=DPS):
        """(S, S_s, S_t, S_ss, S_st, S_tt) as mpmath vectors."""
        with mpmath.workdps(dps):
            s, t = mpmath.mpf(s), mpmath.mpf(t)
            return _combine(self._profile_jet(s), self._spine_jet(t))

    def fundamental_forms(self, s, t, dps=DPS):
        with mpmath.workdps(dps):
            return _forms(self.partials(s, t, dps))


def _combine(c, j):
    c1, c1d, c1dd, c2, c2d, c2dd = c
    r, r1, r2, f2, f2d, f2dd, f3, f3d, f3dd = j
    S = r + c1 * f2 + c2 * f3
    Ss = c1d * f2 + c2d * f3
    St = r1 + c1 * f2d + c2 * f3d
    Sss = c1dd * f2 + c2dd * f3
    Sst = c1d * f2d + c2d * f3d
    Stt = r2 + c1 * f2dd + c2 * f3dd
    return S, Ss, St, Sss, Sst, Stt


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a, b):
    return mpmath.matrix([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


def _forms(p):
    _, Ss, St, Sss, Sst, Stt = p
    E, F, G = _dot(Ss, Ss), _dot(Ss, St), _dot(St, St)
    n = _cross(Ss, St)
    L, M, N = _dot(Sss, n), _dot(Sst, n), _dot(Stt, n)
    W = E * G - F * F
    return {"E": E, "F": F, "G": G, "L": L, "M": M, "N": N, "W": W}


def _curvature(fm, sing_tol):
    W = fm["W"]
    if W <= sing_tol * (fm["E"] * fm["G"] + 1):
        raise SingularPoint(f"E G - F^2 = {mpmath.nstr(W, 5)}")
    return (fm["L"] * fm["N"] - fm["M"] ** 2) / (W * W)


def sweep(spine, frame, profile, t_domain=(0, 1)):
    """Build S from a spine, a frame and a profile.

    frame may be an ApproxRMF (or a list with one), a HelixBasis or the string
    'fsf' (the helix basis of a RationalHelix spine), or a pair (f2, f3).
    """
    kind = ""
    if isinstance(frame, list):
        if len(frame) != 1:
            raise DomainMismatch("piecewise frames are not supported by sweep")
        frame = frame[0]
    if isinstance(frame, str):
        if frame != "fsf" or not hasattr(spine, "basis"):
            raise ValueError("frame 'fsf' needs a RationalHelix spine")
        f2, f3, kind = spine.basis.w2, spine.basis.w3, "fsf"
    elif hasattr(frame, "w2"):
        f2, f3, kind = frame.w2, frame.w3, "fsf"
    elif hasattr(frame, "frame"):
        lo, hi = frame.interval
        if lo > float(t_domain[0]) or hi < float(t_domain[1]):
            raise DomainMismatch(f"frame covers [{lo}, {hi}], spine domain is {tuple(t_domain)}")
        f2, f3, kind = frame.frame[1], frame.frame[2], "approx-rmf"
    else:
        f2, f3 = frame
        f2 = f2 if isinstance(f2, RVF3) else _const_rvf(f2)
        f3 = f3 if isinstance(f3, RVF3) else _const_rvf(f3)
        kind = "given"
    return SweepSurface(spine, f2, f3, profile, t_domain, kind)


def gauss_curvature(S, s, t, dps=DPS, sing_tol=None):
    """K at (s, t), from exact partials evaluated at dps digits."""
    with mpmath.workdps(dps):
        tol = sing_tol if sing_tol is not None else mpmath.mpf(10) ** (-(dps - 10))
        return _curvature(S.fundamental_forms(s, t, dps), tol)


def mean_curvature(S, s, t, dps=DPS):
    """H with the unit normal n / |n|."""
    with mpmath.workdps(dps):
        fm = S.fundamental_forms(s, t, dps)
        W = fm["W"]
        if W <= 0:
            raise SingularPoint("E G - F^2 vanishes")
        return (fm["E"] * fm["N"] - 2 * fm["F"] * fm["M"] + fm["G"] * fm["L"]) / (2 * W * mpmath.sqrt(W))


def _exact_vec(v):
    return tuple(Surd.coerce(x) for x in v)


def gauss_curvature_exact(S, s, t):
    """K at rational (s, t) in exact field arithmetic (a Surd)."""
    s, t = to_rational(s), to_rational(t)
    c1, c2 = S.profile.piece(s)
    d1, d2 = c1.derivative(), c2.derivative()
    c = [f(s) for f in (c1, d1, d1.derivative(), c2, d2, d2.derivative())]
    j = [_exact_vec(v(t)) for v in S._t]

    def lin(*terms):
        out = [Surd.coerce(0)] * 3
        for coef, vec in terms:
            out = [o + coef * x for o, x in zip(out, vec)]
        return out

    one = Surd.coerce(1)
    r, r1, r2, f2, f2d, f2dd, f3, f3d, f3dd = j
    Ss = lin((c[1], f2), (c[4], f3))
    St = lin((one, r1), (c[0], f2d), (c[3], f3d))
    Sss = lin((c[2], f2), (c[5], f3))
    Sst = lin((c[1], f2d), (c[4], f3d))
    Stt = lin((one, r2), (c[0], f2dd), (c[3], f3dd))

    def dot(a, b):
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]

    n = [Ss[1] * St[2] - Ss[2] * St[1], Ss[2] * St[0] - Ss[0] * St[2], Ss[0] * St[1] - Ss[1] * St[0]]
    F = dot(Ss, St)
    W = dot(Ss, Ss) * dot(St, St) - F * F
    if W.sign() == 0:
        raise SingularPoint("E G - F^2 vanishes")
    L, M, N = dot(Sss, n), dot(Sst, n), dot(Stt, n)
    return (L * N - M * M) / (W * W)


# --- meshes -----------------------------------------------------------------


@dataclass
class Mesh:
    s: np.ndarray
    t: np.ndarray
    vertices: np.ndarray  # (nt * ns, 3), vertex (i_t, i_s) at i_t * ns + i_s
    quads: np.ndarray  # (.., 4), zero-based
    K: np.ndarray = None
    singular: list = field(default_factory=list)
    degenerate_quads: list = field(default_factory=list)

    def k_report(self, threshold=None):
        if self.K is None:
            return {}
        ok = np.isfinite(self.K)
        ns = len(self.s)
        k = self.K[ok]
        idx = np.flatnonzero(ok)
        rep = {
            "regular_points": int(ok.sum()),
            "singular_points": int((~ok).sum()),
            "K_min": float(k.min()) if k.size else None,
            "K_max": float(k.max()) if k.size else None,
            "K_mean": float(k.mean()) if k.size else None,
            "abs_K_max": float(np.abs(k).max()) if k.size else None,
        }
        if k.size:
            for name, i in (("argmin", idx[np.argmin(k)]), ("argmax", idx[np.argmax(k)])):
                rep[name] = {"s": float(self.s[i % ns]), "t": float(self.t[i // ns])}
        if threshold is not None:
            rep["threshold"] = threshold
            if not k.size:
                rep["verdict"] = "N/A"
            else:
                rep["verdict"] = "PASS" if rep["abs_K_max"] < threshold else "FAIL"
        return rep


def sample_mesh(S, grid=(50, 50), curvature=True, dps=DPS):
    """Row-major vertex grid over the profile and spine domains."""
    ns, nt = grid
    if ns < 2 or nt < 2:
        raise ValueError("grid needs at least 2 x 2 points")
    s0, s1 = (float(x) for x in S.profile.domain)
    t0, t1 = (float(x) for x in S.t_domain)
    ss = np.linspace(s0, s1, ns)
    ts = np.linspace(t0, t1, nt)
    verts = np.empty((nt * ns, 3))
    K = np.full(nt * ns, np.nan) if curvature else None
    singular = []
    with mpmath.workdps(dps):
        tol = mpmath.mpf(10) ** (-(dps - 10))
        sj = [S._profile_jet(mpmath.mpf(float(s))) for s in ss]
        for it, t in enumerate(ts):
            tj = S._spine_jet(mpmath.mpf(float(t)))
            for i_s, s in enumerate(ss):
                p = _combine(sj[i_s], tj)
                v = it * ns + i_s
                verts[v] = [float(x) for x in p[0]]
                if curvature:
                    try:
                        K[v] = float(_curvature(_forms(p), tol))
                    except SingularPoint:
                        singular.append((float(s), float(t)))
    quads = []
    degenerate = []
    for it in range(nt - 1):
        for i_s in range(ns - 1):
            q = [it * ns + i_s, it * ns + i_s + 1, (it + 1) * ns + i_s + 1, (it + 1) * ns + i_s]
            quads.append(q)
            pts = verts[q]
            if len({tuple(np.round(x, 12)) for x in pts}) < 4:
                degenerate.append(len(quads) - 1)
    if degenerate:
        warnings.warn(f"{len(degenerate)} degenerate quads", DegenerateMesh, stacklevel=2)
    return Mesh(ss, ts, verts, np.array(quads, dtype=int), K, singular, degenerate)


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _g(x):
    return format(float(x), ".17g")


def obj_text(mesh):
    lines = [f"v {_g(x)} {_g(y)} {_g(z)}" for x, y, z in mesh.vertices]
    lines += ["f " + " ".join(str(i + 1) for i in q) for q in mesh.quads]
    return "\n".join(lines) + "\n"


def curvature_csv_text(mesh):
    ns = len(mesh.s)
    rows = ["s,t,K"]
    for v in range(len(mesh.vertices)):
        k = mesh.K[v] if mesh.K is not None else float("nan")
        rows.append(f"{_g(mesh.s[v % ns])},{_g(mesh.t[v // ns])},{'nan' if not np.isfinite(k) else _g(k)}")
    return "\n".join(rows) + "\n"


def write_obj(mesh, path, csv_path=None):
    _atomic_write(path, obj_text(mesh))
    if csv_path is not None:
        _atomic_write(csv_path, curvature_csv_text(mesh))


__all__ = [
    "Mesh",
    "ProfileCurve",
    "SweepSurface",
    "curvature_csv_text",
    "gauss_curvature",
    "gauss_curvature_exact",
    "mean_curvature",
    "obj_text",
    "sample_mesh",
    "sweep",
    "write_obj",
]
