import numpy as np
import pytest
from numpy.polynomial import polynomial as P
from scipy import optimize

from helixforge.errors import RemezStagnation
from helixforge.remez import count_alternations, minimax_rational


def ex4_target(t):
    return 1.0 / (2 - 2 * t + 2 * t * t)


def ex4_printed_target(t):
    # closed form whose relative-error (3,3) minimax reproduces the printed
    # coefficients and error
    return 0.5 + np.tan(np.arctan((2 * t - 1) / np.sqrt(3)) / np.sqrt(3))


PRINTED_P = [0.188141, 0.445412, -0.0170917, 0.15731]
PRINTED_Q = [1, -0.549016, 0.513789, -0.011689]


def lp_minimax(f, m, k, n=10_000):
    """Brute-force oracle: bisection on the level with an LP feasibility test
    on a dense grid, then Nelder-Mead polishing of the max error."""
    x = np.linspace(0, 1, n)
    s = 2 * x - 1
    fx = f(x)
    Vp = np.vander(s, m + 1, increasing=True)
    Vq = np.vander(s, k + 1, increasing=True)

    def feasible(d):
        # p - f q <= d q, f q - p <= d q, q >= 1
        A = np.vstack([
            np.hstack([Vp, -(fx + d)[:, None] * Vq]),
            np.hstack([-Vp, (fx - d)[:, None] * Vq]),
            np.hstack([np.zeros_like(Vp), -Vq]),
        ])
        ub = np.r_[np.zeros(2 * n), -np.ones(n)]
        r = optimize.linprog(np.zeros(m + k + 2), A_ub=A, b_ub=ub, bounds=(None, None), method="highs")
        return r.x if r.status == 0 else None

    lo, hi = 0.0, float(np.max(np.abs(fx - fx.mean())))
    sol = feasible(hi)
    for _ in range(50):
        mid = (lo + hi) / 2
        cand = feasible(mid)
        if cand is None:
            lo = mid
        else:
            hi, sol = mid, cand
        if hi - lo < 2e-2 * hi:
            break
    fine = np.linspace(0, 1, 100_001)
    sf, ff = 2 * fine - 1, f(fine)

    def maxerr(c):
        return float(np.max(np.abs(ff - P.polyval(sf, c[: m + 1]) / P.polyval(sf, c[m + 1 :]))))

    res = optimize.minimize(maxerr, sol / sol[m + 1], method="Nelder-Mead", options={"maxiter": 4000, "xatol": 1e-14, "fatol": 1e-16})
    return min(res.fun, maxerr(sol))


def test_exactly_representable():
    r = minimax_rational(ex4_target, (0, 1), 3, 3)
    assert r.exact
    assert r.eps < 1e-13
    g = np.linspace(0, 1, 1001)
    assert np.max(np.abs(r(g) - ex4_target(g))) < 1e-13


def test_exp_against_lp_oracle():
    r = minimax_rational(np.exp, (0, 1), 2, 2)
    oracle = lp_minimax(np.exp, 2, 2)
    assert abs(r.eps - oracle) <= 0.1 * oracle
    assert r.n_alternations >= 6


def test_printed_example_reproduced():
    r = minimax_rational(ex4_printed_target, (0, 1), 3, 3, norm="rel")
    assert r.eps <= 5e-6
    assert abs(r.eps - 3.63871e-6) < 1e-3 * 3.63871e-6
    assert np.allclose(r.p, PRINTED_P, rtol=1e-2, atol=0)
    assert np.allclose(r.q, PRINTED_Q, rtol=1e-2, atol=0)
    assert r.n_alternations >= 8


@pytest.mark.parametrize("target,norm", [(ex4_target, "abs"), (ex4_printed_target, "rel")])
def test_monotone_in_degree(target, norm):
    eps = [minimax_rational(target, (0, 1), n, n, norm=norm).eps for n in (1, 2, 3)]
    assert eps[0] >= eps[1] >= eps[2]


def test_degenerate_fit_falls_back():
    # the best (1,1) fit of the symmetric bump is the constant 7/12
    r = minimax_rational(ex4_target, (0, 1), 1, 1)
    assert abs(r.eps - 1 / 12) < 1e-12
    assert r.degrees != (1, 1)


@pytest.mark.parametrize("m,k", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_equioscillation(m, k):
    r = minimax_rational(np.exp, (0, 1), m, k)
    assert r.n_alternations >= m + k + 2
    err = lambda t: np.exp(t) - r(t)  # noqa: E731
    xs = count_alternations(err, 0, 1, r.eps)
    vals = np.abs(err(np.array(xs)))
    assert np.all(vals >= 0.95 * r.eps)
    signs = np.sign(err(np.array(xs)))
    assert np.all(signs[1:] != signs[:-1])


def test_stagnation_carries_best():
    with pytest.raises(RemezStagnation) as ei:
        minimax_rational(np.abs, (-1, 1), 4, 4, max_iter=1)
    assert ei.value.result is not None
