import warnings

import pytest

from helixforge.curves import rational_bezier3, stereographic_tangent
from helixforge.field import parse_ratfun
from helixforge.helix import helix_from_a3


def make_helix(b1, b2, a3):
    t = stereographic_tangent(parse_ratfun(b1), parse_ratfun(b2))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return helix_from_a3(a3, t)


@pytest.fixture(scope="session")
def ex2_helix():
    return make_helix("-3*t + 1", "2*t + 3", parse_ratfun("t*(t**2+t+1)/(13*t**2+6*t+11)"))


@pytest.fixture(scope="session")
def ex1_helix():
    return make_helix("-t/2 + 1", "2*t - 1", rational_bezier3(1, 2, -3, "1/2", 3, 1))


@pytest.fixture(scope="session")
def ex4_helix():
    return make_helix("t", "t - 1", rational_bezier3(1, 2, 0, 0, "1/2", 1))


@pytest.fixture(scope="session")
def ex4_rmf33(ex4_helix):
    from helixforge.rmf import approximate_rmf

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return approximate_rmf(ex4_helix, 3, 3, "compat")[0]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
