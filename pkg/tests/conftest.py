import math

import pytest

from poincare_web import Polynomial, koenigs_series

Z0_OUTSIDE = (1 + math.sqrt(21)) / 2


@pytest.fixture(scope="session")
def square():
    """z^2 at 1: the linearizer is exp."""
    p = Polynomial([0, 0, 1])
    return p, koenigs_series(p, 1.0)


@pytest.fixture(scope="session")
def chebyshev():
    """z^2 - 2 at 2: the linearizer is 2 cosh(sqrt z)."""
    p = Polynomial([-2, 0, 1])
    return p, koenigs_series(p, 2.0)


@pytest.fixture(scope="session")
def outside():
    """z^2 - 5, critical point escapes."""
    p = Polynomial([-5, 0, 1])
    return p, koenigs_series(p, Z0_OUTSIDE)


@pytest.fixture(scope="session")
def outside_params(outside):
    from poincare_web import choose_R

    p, s = outside
    return choose_R(s, p, depth=4)


@pytest.fixture(scope="session")
def outside_web(outside, outside_params):
    from poincare_web import build_web

    p, s = outside
    return build_web(s, p, outside_params, 3, case_label="z^2-5")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
