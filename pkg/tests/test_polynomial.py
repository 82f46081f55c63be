import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poincare_web import AffineMap, GrowthBounds, OutOfRangeError, Polynomial, filled_julia_bound, iterate_log_bounds, q_n
from poincare_web.polynomial import escape_radius, eval_with_derivative, tail_ratio


def test_rejects_bad_coefficients():
    with pytest.raises(ValueError):
        Polynomial([1, 2])
    with pytest.raises(ValueError):
        Polynomial([1, 2, 0])
    with pytest.raises(ValueError):
        Polynomial([1, np.nan, 1])


@pytest.mark.parametrize("coeffs,z,expect", [
    ([0, 0, 1], 3, (9, 6)),
    ([-2, 0, 1], 2, (2, 4)),
    ([-5, 0, 1], 0, (-5, 0)),
])
def test_eval_with_derivative(coeffs, z, expect):
    v, dv = eval_with_derivative(Polynomial(coeffs), z)
    assert v == pytest.approx(expect[0]) and dv == pytest.approx(expect[1])


def test_taylor_at_matches_shifted_expansion():
    p = Polynomial([1, -2, 3, 0.5])
    b = p.taylor_at(2.0)
    w = np.linspace(-1, 1, 7)
    assert np.allclose(np.polyval(b[::-1], w), p(2.0 + w))
    assert b[1] == pytest.approx(eval_with_derivative(p, 2.0)[1])


def test_conjugate_by_translation():
    p = Polynomial([0, 0, 1])
    q = p.conjugate(AffineMap(1, 1))  # phi^-1 o p o phi with phi(z) = z + 1
    assert np.allclose(q.coeffs, [0, 2, 1])


def test_affine_group_laws():
    f, g = AffineMap(2j, 1), AffineMap(-0.5, 3 - 1j)
    z = 0.3 + 0.7j
    assert f.compose(g)(z) == pytest.approx(f(g(z)))
    assert f.compose(f.inverse()).is_close(AffineMap(1, 0))
    with pytest.raises(ValueError):
        AffineMap(0, 1)


def test_iterate_log_bounds_example():
    p = Polynomial([0, 0, 1])
    gb = GrowthBounds(0.1, 2 * (1 - 1e-12), math.log(0.9), math.log(1.1), 2)
    lo, hi = iterate_log_bounds(p, 2.0, 3, gb)
    assert lo == pytest.approx(7 * math.log(0.9) + 8 * math.log(2))
    assert hi == pytest.approx(7 * math.log(1.1) + 8 * math.log(2))
    assert lo <= 8 * math.log(2) <= hi


def test_iterate_log_bounds_width_n1_and_outside_case():
    p = Polynomial([-5, 0, 1])
    gb = GrowthBounds.for_polynomial(p, 0.3)
    lo, hi = iterate_log_bounds(p, 10.0, 1, gb)
    assert hi - lo == pytest.approx(gb.K_eps - gb.k_eps)
    lo, hi = iterate_log_bounds(p, 10.0, 2, gb)
    assert lo <= math.log(9020) <= hi


def test_iterate_log_bounds_rejects_small_z():
    p = Polynomial([-5, 0, 1])
    gb = GrowthBounds.for_polynomial(p)
    with pytest.raises(OutOfRangeError):
        iterate_log_bounds(p, gb.R_eps / 2, 2, gb)


coeff = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(coeff, min_size=2, max_size=4), st.floats(0.02, 0.45), st.integers(1, 6),
       st.floats(1.05, 4.0), st.floats(0, 2 * math.pi))
def test_iterate_log_bounds_contains_direct_iterate(low, eps, n, scale, theta):
    p = Polynomial(low + [1.0])
    gb = GrowthBounds.for_polynomial(p, eps)
    z = gb.R_eps * scale * complex(math.cos(theta), math.sin(theta))
    w = z
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n):
            w = complex(p(w))
    if not math.isfinite(abs(w)):
        return
    lo, hi = iterate_log_bounds(p, z, n, gb)
    assert lo - 1e-9 * abs(lo) <= math.log(abs(w)) <= hi + 1e-9 * abs(hi)


@given(st.integers(2, 9), st.integers(1, 40))
def test_q_n_bounds(d, n):
    q = q_n(d, n)
    assert d ** (n - 1) <= q <= d**n
    assert q == sum(d**i for i in range(n))


@settings(max_examples=40, deadline=None)
@given(st.lists(coeff, min_size=2, max_size=4), st.floats(0.01, 0.2), st.floats(0.2, 0.45))
def test_growth_bounds_invariants(low, e1, e2):
    p = Polynomial(low + [1.5])
    g1, g2 = GrowthBounds.for_polynomial(p, e1), GrowthBounds.for_polynomial(p, e2)
    for g in (g1, g2):
        assert g.R_eps >= 1
        assert (1 - g.eps) * abs(p.leading) * g.R_eps ** (p.degree - 1) > 1
        assert tail_ratio(p, g.R_eps) <= g.eps + 1e-12
        assert g.k_eps == pytest.approx(math.log((1 - g.eps) * 1.5))
    assert g1.R_eps >= g2.R_eps  # smaller eps never lowers the radius


def test_tail_ratio_edge_radii():
    p = Polynomial([-5, 0, 1])
    assert tail_ratio(p, 0.0) == math.inf
    assert tail_ratio(p, math.inf) == 0.0
    assert tail_ratio(Polynomial([0, 0, 1]), 0.0) == 0.0


@pytest.mark.parametrize("coeffs", [[0, 0, 1], [-2, 0, 1], [-5, 0, 1], [1j, 0.3, 0, 2]])
def test_filled_julia_bound(coeffs):
    p = Polynomial(coeffs)
    K = filled_julia_bound(p)
    assert K >= 1
    rng = np.random.default_rng(0)
    z = (K + 1) * np.exp(2j * np.pi * rng.random(100))
    assert np.all(np.abs(p(z)) > np.abs(z))


def test_filled_julia_bound_examples():
    assert filled_julia_bound(Polynomial([0, 0, 1])) == 1
    assert filled_julia_bound(Polynomial([-2, 0, 1])) >= 2


def test_escape_radius():
    assert escape_radius(Polynomial([-5, 0, 1])) == 7
    assert escape_radius(Polynomial([0, 0, 1])) == 3
