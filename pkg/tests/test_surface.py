import warnings
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from helixforge.curves import RVF3
from helixforge.errors import DegenerateMesh, DomainMismatch
from helixforge.field import RatFun, parse_ratfun
from helixforge.rmf import approximate_rmf
from helixforge.surface import (
    ProfileCurve,
    curvature_csv_text,
    gauss_curvature,
    gauss_curvature_exact,
    mean_curvature,
    obj_text,
    sample_mesh,
    sweep,
)

EX5_PROFILE = ProfileCurve.line(("5", "-1/5"), ("-1/2", "10"))
E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def quiet(fn, *a, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fn(*a, **kw)


def rvf(*comps):
    return RVF3(*(parse_ratfun(c) if isinstance(c, str) else RatFun.const(c) for c in comps))


@pytest.fixture(scope="module")
def s1(ex4_helix, ex4_rmf33):
    return sweep(ex4_helix, ex4_rmf33, EX5_PROFILE)


@pytest.fixture(scope="module")
def s2(ex4_helix):
    return sweep(ex4_helix, "fsf", EX5_PROFILE)


def test_plane_exact_zero():
    S = sweep(rvf("t", 0, 0), (E2, E3), ProfileCurve.line(("1", "2"), ("0", "0")))
    for s, t in [("1/3", "1/2"), ("0", "1"), ("2/7", "1/5")]:
        assert gauss_curvature_exact(S, s, t) == 0
        assert abs(gauss_curvature(S, s, t)) < mpmath.mpf("1e-30")


def test_cylinder_curvatures():
    circle = ProfileCurve.rational("(1-s**2)/(1+s**2)", "2*s/(1+s**2)")
    S = sweep(rvf(0, 0, "t"), (E1, E2), circle)
    for s, t in [("1/3", "1/2"), ("3/4", "1/8")]:
        assert gauss_curvature_exact(S, s, t) == 0
        with mpmath.workdps(50):
            assert abs(gauss_curvature(S, s, t)) < mpmath.mpf("1e-30")
            # unit cylinder: |H| = 1/2
            assert abs(abs(mean_curvature(S, s, t)) - mpmath.mpf(1) / 2) < mpmath.mpf("1e-30")


def test_planar_spine_exact_rmf_developable():
    # for a planar spine the Frenet normal/binormal pair is rotation minimizing
    r = rvf("(1-t**2)/(1+t**2)", "2*t/(1+t**2)", 0)
    n = rvf("-(1-t**2)/(1+t**2)", "-2*t/(1+t**2)", 0)
    S = sweep(r, (n, RVF3(0, 0, 1)), EX5_PROFILE)
    for s, t in [("1/3", "1/2"), ("1/10", "9/10")]:
        assert gauss_curvature_exact(S, s, t) == 0


def test_zero_profile_is_spine(ex4_helix, ex4_rmf33):
    S = sweep(ex4_helix, ex4_rmf33, ProfileCurve.line(("0", "0"), ("0", "0")))
    for s in ("0", "1/2", "1"):
        assert S(s, "1/3") == ex4_helix.r(Fraction(1, 3))
    with pytest.warns(DegenerateMesh):
        m = sample_mesh(S, (2, 2), curvature=False)
    assert len(m.vertices) == 4
    assert np.array_equal(m.vertices[0], m.vertices[1])
    assert np.array_equal(m.vertices[2], m.vertices[3])


def test_span_residual(s1, ex4_rmf33):
    f2, f3 = ex4_rmf33.f2, ex4_rmf33.f3
    with mpmath.workdps(50):
        for s, t in [(0.2, 0.3), (0.7, 0.9), (1.0, 0.05)]:
            d = s1.eval_mp(s, t) - s1.r.eval_mp(t)
            a, b = f2.eval_mp(t), f3.eval_mp(t)
            proj = d - (d.T * a)[0] * a - (d.T * b)[0] * b
            assert mpmath.norm(proj) < mpmath.mpf("1e-24")


def test_isometry_invariance(ex4_helix, ex4_rmf33):
    # rational rotation by the 3-4-5 angle about z, plus a translation
    R = [[Fraction(3, 5), Fraction(-4, 5), 0], [Fraction(4, 5), Fraction(3, 5), 0], [0, 0, 1]]

    def rot(v, shift=(0, 0, 0)):
        return RVF3(*(sum((v[j] * R[i][j] for j in range(3) if R[i][j]), RatFun.const(shift[i])) for i in range(3)))

    S = sweep(ex4_helix.r, (ex4_rmf33.f2, ex4_rmf33.f3), EX5_PROFILE)
    T = sweep(rot(ex4_helix.r, (1, -2, 3)), (rot(ex4_rmf33.f2), rot(ex4_rmf33.f3)), EX5_PROFILE)
    with mpmath.workdps(50):
        for s, t in [(0.3, 0.4), (0.8, 0.7)]:
            a, b = S.fundamental_forms(s, t), T.fundamental_forms(s, t)
            for key in "EFGLMN":
                assert abs(a[key] - b[key]) <= mpmath.mpf("1e-20") * (1 + abs(a[key]))
            assert abs(gauss_curvature(S, s, t) - gauss_curvature(T, s, t)) < mpmath.mpf("1e-20")


def test_mesh_counts_and_order(s1):
    m = sample_mesh(s1, (50, 50), curvature=False)
    assert m.vertices.shape == (2500, 3)
    assert len(m.quads) == 2401
    # vertex (i_t, i_s) sits at i_t * ns + i_s
    with mpmath.workdps(30):
        v = s1.eval_mp(m.s[7], m.t[3])
    assert np.allclose(m.vertices[3 * 50 + 7], [float(x) for x in v], rtol=0, atol=1e-14)
    txt = obj_text(m)
    assert txt.count("\nf ") + txt.startswith("f ") == 2401
    assert txt.splitlines()[2500] == "f 1 2 52 51"


def test_s1_s2_differ_share_spine(s1, s2, ex4_helix):
    m1 = sample_mesh(s1, (5, 5), curvature=False)
    m2 = sample_mesh(s2, (5, 5), curvature=False)
    assert not np.allclose(m1.vertices, m2.vertices)
    z1 = sweep(ex4_helix, (s1.f2, s1.f3), ProfileCurve.line(("0", "0"), ("0", "0")))
    z2 = sweep(ex4_helix, "fsf", ProfileCurve.line(("0", "0"), ("0", "0")))
    assert z1("1/2", "1/3") == z2("1/2", "1/3")


def test_fsf_frame_is_helix_basis(s2, ex4_helix):
    assert s2.f2 == ex4_helix.basis.w2 and s2.frame_kind == "fsf"


def test_domain_mismatch(ex4_helix, ex4_rmf33):
    with pytest.raises(DomainMismatch):
        sweep(ex4_helix, ex4_rmf33, EX5_PROFILE, t_domain=(0, 2))


def test_curvature_csv(s1):
    m = sample_mesh(s1, (3, 2))
    lines = curvature_csv_text(m).splitlines()
    assert lines[0] == "s,t,K" and len(lines) == 7
    rep = m.k_report(1e-9)
    assert rep["regular_points"] + rep["singular_points"] == 6
    assert set(rep["argmax"]) == {"s", "t"}


def test_k_shrinks_with_frame_quality(ex4_helix):
    # K of a line-profile sweep scales with the square of the RMF defect
    ts = [0.3, 0.6, 0.9]
    kmax = []
    for n in (2, 3, 4):
        rmf = quiet(approximate_rmf, ex4_helix, n, n, "compat")[0]
        S = sweep(ex4_helix, rmf, EX5_PROFILE)
        kmax.append(max(abs(float(gauss_curvature(S, 0.5, t))) for t in ts))
    assert kmax[0] > kmax[1] > kmax[2]
