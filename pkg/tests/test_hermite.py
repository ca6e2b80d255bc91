import warnings

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from helixforge.curves import RVF3, rational_bezier3, stereographic_tangent
from helixforge.errors import DegenerateIndicatrix, NoPositiveWeights, PoleTangent
from helixforge.field import Surd, parse_ratfun, to_rational
from helixforge.hermite import (
    HermiteData,
    boundary_a3_data,
    interpolate,
    normalize_tangent,
    project_tangents,
    solve_bezier,
)

EX3 = ((0, 0, 0), (1, 0, 0), (0, 1, -1), ("1/3", "-2/3", "2/3"))


def quiet(fn, *a, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fn(*a, **kw)


def end_values(a3):
    d1 = a3.derivative()
    d2 = d1.derivative()
    z, o = to_rational(0), to_rational(1)
    return (a3(z), d1(z), d2(z), a3(o), d1(o), d2(o))


def test_example3_projection():
    b1, b2 = project_tangents((1, 0, 0), ("1/3", "-2/3", "2/3"))
    assert b1 == 1 and b2 == parse_ratfun("-2*t")


def test_example3_printed_tangent_normalized():
    # (1, -2, 1)/3 is not unit; normalizing it gives a different direction
    # from the tangent the printed b's produce at t = 1
    n = normalize_tangent(("1/3", "-2/3", "1/3"))
    assert sum(c * c for c in n) == 1
    assert n != normalize_tangent(("1/3", "-2/3", "2/3"))


def test_equal_tangents_degenerate():
    with pytest.raises(DegenerateIndicatrix):
        b1, b2 = project_tangents((1, 0, 0), (1, 0, 0))
        stereographic_tangent(b1, b2)


def test_pole_tangent_rejected():
    with pytest.raises(PoleTangent):
        project_tangents((0, 0, 1), (1, 0, 0))


unit = st.tuples(*(st.integers(-9, 9) for _ in range(3))).filter(lambda v: any(v))


@settings(max_examples=30, deadline=None)
@given(unit, unit)
def test_projection_hits_endpoints(v0, v1):
    t0, t1 = normalize_tangent(v0), normalize_tangent(v1)
    assume(t0 != t1)
    assume(abs(float(t0[2]) - 1) > 1e-3 and abs(float(t1[2]) - 1) > 1e-3)
    b1, b2 = project_tangents(t0, t1)
    t = stereographic_tangent(b1, b2)
    with mpmath.workdps(40):
        for x, ref in ((0, t0), (1, t1)):
            got = t.eval_mp(x)
            assert max(abs(got[i] - ref[i].to_mpf()) for i in range(3)) < mpmath.mpf("1e-28")


def test_example3_solution():
    sol = quiet(interpolate, HermiteData(*EX3))
    c0, c1, c2, c3, w1, w2 = sol.bezier
    assert (c0, c1, c2, c3) == (0, 0, 0, Surd(-1) / 3)
    assert w1 == Surd(4) / 9
    # endpoint conditions force w2 = 2/9 (see test_example3_printed_weights)
    assert w2 == Surd(2) / 9
    assert sol.residuals["exact_zero"]
    b = sol.boundary
    assert b[0] == 0 and b[3] == Surd(-1) / 3


def test_example3_printed_weights_miss_endpoint_data():
    sol = quiet(interpolate, HermiteData(*EX3))
    printed = rational_bezier3(0, 0, 0, "-1/3", "4/9", "4/9")
    assert end_values(printed) != tuple(sol.boundary)
    assert end_values(rational_bezier3(*sol.bezier)) == tuple(sol.boundary)


def test_zero_points_zero_boundary():
    b1, b2 = project_tangents((1, 0, 0), ("1/3", "-2/3", "2/3"))
    from helixforge.helix import axis_and_angle, helix_basis

    t = stereographic_tangent(b1, b2)
    basis = helix_basis(t, axis_and_angle(t))
    data = HermiteData((0, 0, 0), (1, 0, 0), (0, 0, 0), ("1/3", "-2/3", "2/3"))
    assert all(x == 0 for x in boundary_a3_data(data, t, basis))


def test_example1_roundtrip(ex1_helix):
    h = ex1_helix
    z, o = to_rational(0), to_rational(1)
    data = HermiteData(h.r(z), h.t(z), h.r(o), h.t(o))
    bd = boundary_a3_data(data, h.t, h.basis)
    assert bd == end_values(h.a3)
    assert solve_bezier(bd) == tuple(Surd.coerce(to_rational(x)) for x in (1, 2, -3, "1/2", 3, 1))
    sol = quiet(interpolate, data)
    assert sol.residuals["exact_zero"]
    assert sol.helix.r == h.r


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(-5, 5, max_denominator=9), min_size=4, max_size=4), st.fractions(1, 5, max_denominator=5), st.fractions(1, 5, max_denominator=5))
def test_solve_bezier_roundtrip(cs, w1, w2):
    a3 = rational_bezier3(*cs, w1, w2, check_domain=False)
    bd = end_values(a3)
    sol = solve_bezier(bd, allow_negative=True)
    assert end_values(rational_bezier3(*sol, check_domain=False)) == bd


def test_negative_weights_reported():
    data = HermiteData((0, 0, 0), (1, 0, 0), (3, -1, 2), ("1/3", "-2/3", "2/3"))
    try:
        sol = quiet(interpolate, data)
    except NoPositiveWeights as exc:
        assert exc.solution is not None
    else:
        assert all(w.sign() > 0 for w in sol.bezier[4:])


def test_reversed_example3():
    data = HermiteData((0, 1, -1), ("-1/3", "2/3", "-2/3"), (0, 0, 0), (-1, 0, 0))
    sol = quiet(interpolate, data)
    assert sol.residuals["exact_zero"]
    s5 = Surd(0, 1, 5)
    assert sol.bezier == (-s5 / 15, 0, 0, 0, Surd(2) / 3, Surd(20) / 9)


def test_pole_rotation():
    data = HermiteData((0, 0, 0), (0, 0, 1), (-1, -1, 2), (1, 0, 0))
    sol = quiet(interpolate, data)
    assert sol.rotation is not None
    assert sol.residuals["exact_zero"]
    assert sol.bezier[3] == Surd(0, 1, 2) / 2
    assert sol.bezier[4:] == (3, 1)


def test_circle_mode():
    sol = quiet(interpolate, HermiteData(*EX3), mode="circle", shape=(2, 1))
    assert sol.residuals["exact_zero"]
    assert sol.b1.degree[1] == 2


def test_rotation_about_pole_axis_equivariant():
    def rot(v):
        return (-v[1], v[0], v[2])

    sol = quiet(interpolate, HermiteData(*EX3))
    d = HermiteData(*EX3)
    rsol = quiet(interpolate, HermiteData(rot(d.p0), rot(d.t0), rot(d.p1), rot(d.t1)))
    r = sol.helix.r
    assert rsol.helix.r == RVF3(-r.y, r.x, r.z)
