import math

import numpy as np
import pytest

from poincare_web import _logmod
from poincare_web import max_modulus, min_modulus, modulus_profile, order_estimate, theoretical_order


def test_exponential_profile(square):
    p, s = square
    radii = np.array([1.0, 5.0, 10.0, 50.0, 300.0])
    prof = modulus_profile(s, p, radii, k=256)
    # |e^z| on |z| = r ranges over [e^-r, e^r]
    assert np.allclose(prof.logM, radii, rtol=1e-9)
    assert np.allclose(prof.logm, -radii, rtol=1e-9)
    assert np.allclose(np.cos(prof.argmax), 1, atol=1e-6)


def test_cosh_profile(chebyshev):
    p, s = chebyshev
    r = 100.0
    # max of |2 cosh sqrt z| is on the positive axis
    assert max_modulus(s, p, math.log(r)).est == pytest.approx(math.log(2 * math.cosh(10)), rel=1e-9)
    assert min_modulus(s, p, math.log(r)).est <= math.log(2) + 1e-9


def test_huge_radius_tower(square):
    p, s = square
    # log M(e^z, r) = r even when r itself is far past double range
    est = max_modulus(s, p, 2000.0, k=64).est
    assert abs(_logmod.big(est) / _logmod.exp(2000.0) - 1) < 1e-9


@pytest.mark.parametrize("case,order", [("square", 1.0), ("chebyshev", 0.5),
                                        ("outside", math.log(2) / math.log(1 + math.sqrt(21)))])
def test_order_within_five_percent(case, order, request):
    p, s = request.getfixturevalue(case)
    assert theoretical_order(p, s.lam) == pytest.approx(order, rel=1e-12)
    prof = modulus_profile(s, p, np.geomspace(10, 1e4, 8), k=256)
    assert order_estimate(prof) == pytest.approx(order, rel=0.05)


def test_log_max_modulus_is_convex_in_log_r(outside):
    p, s = outside
    logr = np.linspace(0, 6, 25)
    logM = np.array([max_modulus(s, p, x, k=512).est for x in logr])
    second = logM[2:] - 2 * logM[1:-1] + logM[:-2]
    assert np.all(second >= -1e-8 * np.abs(logM[1:-1]))
    assert np.all(np.diff(logM) > 0)


def test_profile_rejects_bad_radii(square):
    p, s = square
    with pytest.raises(ValueError):
        modulus_profile(s, p, [1.0, 1.0])
    with pytest.raises(ValueError):
        modulus_profile(s, p, [-1.0, 2.0])
    prof = modulus_profile(s, p, [1.0, 2.0], k=64)
    with pytest.raises(ValueError):
        order_estimate(prof)
