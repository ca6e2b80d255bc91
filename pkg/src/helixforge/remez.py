"""Minimax rational approximation by the rational Remez exchange.

The inner solve is the usual linearization: with Q_prev the denominator from
the previous pass, the reference equations

    P(x_i) - h_i Q(x_i) + (-1)^i E w_i Q_prev(x_i) = 0

are linear in (P, Q, E). P and Q are expanded in Chebyshev polynomials on the
interval for conditioning and converted to monomials at the end.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import polynomial as Pm

from .errors import DenominatorRootInDomain, RemezStagnation

log = logging.getLogger(__name__)

MAX_ITER = 60
STAGNATION_RTOL = 1e-12
ALT_TOL = 0.05


@dataclass
class MinimaxResult:
    p: np.ndarray  # ascending monomial coefficients of the numerator
    q: np.ndarray  # ascending monomial coefficients, q[0] == 1 when possible
    eps: float
    interval: tuple
    m: int
    k: int
    norm: str = "abs"
    iterations: int = 0
    converged: bool = True
    exact: bool = False
    reference: np.ndarray = None
    alternation: list = field(default_factory=list)
    degrees: tuple = None  # degrees actually used when the best fit is degenerate

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return Pm.polyval(x, self.p) / Pm.polyval(x, self.q)

    @property
    def n_alternations(self):
        return len(self.alternation)

    def to_ratfun(self):
        """Exact RatFun whose coefficients are the binary values of p and q."""
        from fractions import Fraction

        from .field import Polynomial, RatFun

        a = Polynomial([Fraction(float(c)) for c in self.p])
        b = Polynomial([Fraction(float(c)) for c in self.q])
        return RatFun(a, b)

    def polys(self):
        """(a, b) as exact Polynomials (binary values of the float coefficients)."""
        from fractions import Fraction

        from .field import Polynomial

        return Polynomial([Fraction(float(c)) for c in self.p]), Polynomial([Fraction(float(c)) for c in self.q])


def _to_u(x, a, b):
    return (2 * np.asarray(x, dtype=float) - a - b) / (b - a)


def _cheb_to_monomial(c, a, b):
    """Ascending monomial coefficients in t of sum c_j T_j(u(t))."""
    series = C.Chebyshev(c, domain=[a, b])
    return series.convert(kind=np.polynomial.Polynomial, domain=[-1, 1], window=[-1, 1]).coef


def _weights(h, norm):
    if norm == "abs":
        return np.ones_like(h)
    if norm == "rel":
        w = np.abs(h)
        if np.any(w == 0):
            raise ValueError("relative error needs a target without zeros")
        return w
    raise ValueError(f"unknown norm {norm!r}")


def _exact_fit(f, m, k, a, b, tol):
    """Look for an exact representation of f with degrees <= (m, k).

    Returns (pc, qc, m', k') in Chebyshev form or None. Degrees are reduced
    in step while the linearized system stays rank deficient, so common
    factors are not introduced.
    """
    npts = 4 * (m + k + 2) + 16
    u = np.cos(np.pi * (np.arange(npts) + 0.5) / npts)
    x = (u * (b - a) + a + b) / 2
    hx = f(x)
    scale = max(1.0, float(np.max(np.abs(hx))))
    best = None
    mm, kk = m, k
    while mm >= 0 and kk >= 0:
        A = np.hstack([C.chebvander(u, mm), -hx[:, None] * C.chebvander(u, kk)])
        _, s, vt = np.linalg.svd(A)
        if s[-1] > tol * scale * s[0]:
            break
        v = vt[-1]
        best = (v[: mm + 1], v[mm + 1 :], mm, kk)
        mm, kk = mm - 1, kk - 1
    if best is None:
        return None
    pc, qc, mm, kk = best
    g = np.linspace(a, b, 4001)
    ug = _to_u(g, a, b)
    qv = C.chebval(ug, qc)
    if np.any(np.sign(qv) != np.sign(qv[0])) or np.any(qv == 0):
        return None
    err = np.max(np.abs(f(g) - C.chebval(ug, pc) / qv))
    if err > 1e3 * tol * scale:
        return None
    return pc, qc, mm, kk


def _alternating_extrema(g, e):
    """Indices of a maximal alternating sequence of local extrema of e."""
    n = len(e)
    ae = np.abs(e)
    idx = [0]
    for i in range(1, n - 1):
        if ae[i] >= ae[i - 1] and ae[i] >= ae[i + 1] and e[i] != 0:
            idx.append(i)
    idx.append(n - 1)
    pts = []
    for i in idx:
        if pts and np.sign(e[i]) == np.sign(e[pts[-1]]):
            if ae[i] > ae[pts[-1]]:
                pts[-1] = i
        else:
            pts.append(i)
    return pts


def _refine(errf, x, a, b, h):
    """Golden-section polish of a grid extremum of |err| within +-h."""
    lo, hi = max(a, x - h), min(b, x + h)
    gr = (np.sqrt(5) - 1) / 2
    c, d = hi - gr * (hi - lo), lo + gr * (hi - lo)
    fc, fd = abs(errf(c)), abs(errf(d))
    for _ in range(40):
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - gr * (hi - lo)
            fc = abs(errf(c))
        else:
            lo, c, fc = c, d, fd
            d = lo + gr * (hi - lo)
            fd = abs(errf(d))
    xm = (lo + hi) / 2
    return xm if abs(errf(xm)) >= abs(errf(x)) else x


def count_alternations(errf, a, b, eps, rtol=ALT_TOL, grid=20001):
    """Parameters of alternating extrema whose |error| lies within rtol of eps."""
    g = np.linspace(a, b, grid)
    e = errf(g)
    pts = _alternating_extrema(g, e)
    h = (b - a) / (grid - 1)
    xs = [_refine(errf, g[i], a, b, h) if 0 < i < grid - 1 else g[i] for i in pts]
    keep = [x for x in xs if abs(errf(x)) >= (1 - rtol) * eps]
    # re-check alternation among the kept points
    out = []
    for x in keep:
        s = np.sign(errf(x))
        if out and np.sign(errf(out[-1])) == s:
            if abs(errf(x)) > abs(errf(out[-1])):
                out[-1] = x
        else:
            out.append(x)
    return out


def minimax_rational(f, interval=(0.0, 1.0), m=3, k=3, tol=1e-13, norm="abs", grid=20001, max_iter=MAX_ITER):
    """Best (m, k) rational approximation of f on the interval.

    f must accept numpy arrays. Returns a MinimaxResult. Raises
    RemezStagnation (carrying the best iterate) when the exchange does not
    settle, and DenominatorRootInDomain if the denominator changes sign.

    When the exchange breaks down for lack of alternating extrema the best
    approximation is usually degenerate (its true degrees are lower), so the
    neighbouring subproblems (m-1, k), (m, k-1) are solved and the best
    converged one is returned with ``degrees`` set.
    """
    try:
        return _minimax(f, interval, m, k, tol, norm, grid, max_iter)
    except RemezStagnation as exc:
        if exc.result is None or "broke down" not in str(exc) or m + k == 0:
            raise
        first = exc
    cands = []
    for mm, kk in ((m - 1, k), (m, k - 1)):
        if mm < 0 or kk < 0:
            continue
        try:
            r = minimax_rational(f, interval, mm, kk, tol, norm, grid, max_iter)
        except (RemezStagnation, DenominatorRootInDomain):
            continue
        cands.append(r)
    if not cands:
        raise first
    best = min(cands, key=lambda r: r.eps)
    if first.result.eps < best.eps:
        raise first
    log.debug("degenerate (%d, %d) fit, using degrees %s", m, k, best.degrees)
    best.m, best.k = m, k
    return best


def _minimax(f, interval, m, k, tol, norm, grid, max_iter):
    a, b = float(interval[0]), float(interval[1])
    if not b > a:
        raise ValueError("empty interval")
    g = np.linspace(a, b, grid)
    ug = _to_u(g, a, b)
    fg = f(g)
    wg = _weights(fg, norm)

    exact = _exact_fit(f, m, k, a, b, tol)
    if exact is not None:
        pc, qc, mm, kk = exact
        p, q = _normalize(_cheb_to_monomial(pc, a, b), _cheb_to_monomial(qc, a, b))
        res = MinimaxResult(p, q, 0.0, (a, b), m, k, norm, 0, True, True, degrees=(mm, kk))
        res.eps = float(np.max(np.abs((fg - res(g)) / wg)))
        log.debug("exact representation with degrees (%d, %d), eps %.3e", mm, kk, res.eps)
        return res

    n = m + k + 2
    x = (a + b) / 2 - (b - a) / 2 * np.cos(np.pi * np.arange(n) / (n - 1))
    qc = np.zeros(k + 1)
    qc[0] = 1.0
    E = 0.0
    best = None
    sgn = (-1.0) ** np.arange(n)
    prev_eps = None
    for it in range(1, max_iter + 1):
        u = _to_u(x, a, b)
        hx = f(x)
        wx = _weights(hx, norm)
        Vp = C.chebvander(u, m)
        Vq = C.chebvander(u, k)
        for _ in range(50):
            qprev = Vq @ qc
            A = np.hstack([Vp, -hx[:, None] * Vq[:, 1:], (sgn * wx * qprev)[:, None]])
            try:
                sol = np.linalg.solve(A, hx)
            except np.linalg.LinAlgError:
                sol = np.linalg.lstsq(A, hx, rcond=None)[0]
            pc = sol[: m + 1]
            qn = np.r_[1.0, sol[m + 1 : m + 1 + k]]
            En = sol[-1]
            done = abs(En - E) <= 1e-15 * max(1.0, abs(En)) and np.allclose(qn, qc, rtol=0, atol=1e-15)
            qc, E = qn, En
            if done:
                break
        qv = C.chebval(ug, qc)
        if np.any(np.sign(qv) != np.sign(qv[0])):
            if best is not None:
                raise RemezStagnation("denominator acquired a root in the interval", result=best)
            raise DenominatorRootInDomain("denominator changes sign on the interval")
        e = (fg - C.chebval(ug, pc) / qv) / wg
        eps = float(np.max(np.abs(e)))
        p, q = _normalize(_cheb_to_monomial(pc, a, b), _cheb_to_monomial(qc, a, b))
        cur = MinimaxResult(p, q, eps, (a, b), m, k, norm, it, False, False, x.copy(), degrees=(m, k))
        if best is None or eps < best.eps:
            best = cur
        pts = _alternating_extrema(g, e)
        if len(pts) < n:
            break
        # keep the n consecutive extrema with the largest minimum, prefer the global max
        while len(pts) > n:
            if abs(e[pts[0]]) < abs(e[pts[-1]]):
                pts.pop(0)
            else:
                pts.pop()
        h = (b - a) / (grid - 1)

        def errf(t, pc=pc, qc=qc):
            t = np.asarray(t, dtype=float)
            ut = _to_u(t, a, b)
            ft = f(t)
            return (ft - C.chebval(ut, pc) / C.chebval(ut, qc)) / _weights(ft, norm)

        xn = np.array([_refine(errf, g[i], a, b, h) if 0 < i < grid - 1 else g[i] for i in pts])
        lev = np.abs(errf(xn))
        spread = (lev.max() - lev.min()) / lev.max() if lev.max() > 0 else 0.0
        if spread < 1e-6 or (prev_eps is not None and abs(eps - prev_eps) <= STAGNATION_RTOL * eps):
            cur.converged = True
            best = cur if cur.eps <= best.eps * (1 + 1e-9) else best
            best.converged = True
            break
        prev_eps = eps
        x = xn
    else:
        raise RemezStagnation(f"no convergence after {max_iter} exchanges", result=best)
    if not best.converged:
        raise RemezStagnation("exchange broke down (too few alternating extrema)", result=best)

    def besterr(t):
        t = np.asarray(t, dtype=float)
        ft = f(t)
        return (ft - best(t)) / _weights(ft, norm)

    best.alternation = count_alternations(besterr, a, b, best.eps)
    return best


def _normalize(p, q):
    """Scale so that q(0) = 1 (falls back to the leading coefficient)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    s = q[0] if q[0] != 0 else q[np.flatnonzero(q)[-1]]
    return p / s, q / s


__all__ = ["MinimaxResult", "count_alternations", "minimax_rational"]
