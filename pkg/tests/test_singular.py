import math

import numpy as np
import pytest

from poincare_web import Polynomial, singular_sets, verify_Cv_characterization
from poincare_web.singular import critical_values, exceptional_points


def test_exceptional_points():
    assert exceptional_points(Polynomial([0, 0, 1])) == [0]
    assert exceptional_points(Polynomial([0, 0, 0, 2])) == [0]
    assert exceptional_points(Polynomial([-2, 0, 1])) == []
    # conjugate of z^2 by z -> z + 1 has its exceptional point at -1
    assert exceptional_points(Polynomial([0, 2, 1])) == [pytest.approx(-1)]


def test_exponential_case_sets(square):
    p, s = square
    ss = singular_sets(p, s.z0)
    assert ss.Ov_L == [0] and ss.Cv_L == []
    rep = verify_Cv_characterization(s, p, 4, (0.5, 30.0))
    assert rep.count == 0 and rep.passed


def test_cosh_critical_points(chebyshev):
    p, s = chebyshev
    assert critical_values(p) == [pytest.approx(-2)]
    assert sorted(singular_sets(p, s.z0).Cv_L, key=lambda w: w.real) == [pytest.approx(-2), pytest.approx(2)]
    rep = verify_Cv_characterization(s, p, 4, (1.0, 100.0))
    assert rep.passed and rep.count == 3
    ref = [-(k * math.pi) ** 2 for k in (1, 2, 3)]
    assert np.allclose(sorted(z.real for z in rep.zeros), sorted(ref), rtol=1e-9)
    assert rep.max_deviation <= 1e-6


def test_outside_case(outside):
    p, s = outside
    rep = verify_Cv_characterization(s, p, 4, (0.5, 40.0))
    assert rep.passed and rep.count >= 1
    assert any(abs(w + 5) < 1e-6 for w in rep.images)


def test_rejects_bad_annulus(square):
    p, s = square
    with pytest.raises(ValueError):
        verify_Cv_characterization(s, p, 2, (3.0, 1.0))
    with pytest.raises(ValueError):
        singular_sets(p, s.z0, -1)
