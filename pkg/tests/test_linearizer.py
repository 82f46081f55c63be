import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poincare_web import _logmod
from poincare_web import (AffineMap, BigComplex, ConvergenceError, NotRepellingError, Polynomial, conjugate_linearizer,
                          eval_L, eval_L_array, find_fixed_points, invert_series, koenigs_series, load_series,
                          rescale_series, residual, save_series)
from poincare_web.linearizer import dumps_series, eval_L_derivative, loads_series


def test_square_coefficients_are_exp(square):
    p, s = square
    n = np.arange(21)
    ref = np.array([1.0 / math.factorial(k) for k in n])
    assert np.max(np.abs(s.coeffs[:21] - ref) / ref) <= 1e-10
    assert s.lam == pytest.approx(2) and s.coeffs[0] == 1


def test_chebyshev_coefficients_are_cosh_sqrt(chebyshev):
    p, s = chebyshev
    ref = np.array([2.0 / math.factorial(2 * k) for k in range(21)])
    assert np.max(np.abs(s.coeffs[:21] - ref) / ref) <= 1e-10
    assert s.coeffs[2] == pytest.approx(1 / 12, abs=1e-12)


@pytest.mark.parametrize("case", ["square", "chebyshev", "outside"])
def test_residual_on_validated_disk(case, request):
    p, s = request.getfixturevalue(case)
    rng = np.random.default_rng(3)
    z = s.r0 * np.sqrt(rng.random(200)) * np.exp(2j * np.pi * rng.random(200))
    assert np.all(residual(s, p, z) <= 1e-8)


def test_validated_radius_examples():
    p = Polynomial([0, 0, 1])
    s = koenigs_series(p, 1.0, N=40, tol=1e-8)
    assert s.r0 >= 5
    q = Polynomial([-2, 0, 1])
    assert koenigs_series(q, 2.0, N=40, tol=1e-8).r0 >= 10


def test_degenerate_series_fails_validation():
    p = Polynomial([0, 0, 1])
    try:
        s = koenigs_series(p, 1.0, N=2, tol=1e-8)
    except ConvergenceError:
        return
    assert s.r0 < 1e-2


def test_rejects_non_repelling():
    p = Polynomial([0, 0, 1])
    with pytest.raises(NotRepellingError):
        koenigs_series(p, 0.0)
    with pytest.raises(ValueError):
        koenigs_series(p, 1.0, normalization=0)


def test_accepts_fixed_point_info():
    p = Polynomial([-2, 0, 1])
    fp = max(find_fixed_points(p), key=lambda f: f.z0.real)
    assert koenigs_series(p, fp).lam == pytest.approx(4)


def test_rescale(square, chebyshev):
    p, s = square
    s2 = rescale_series(s, 2)
    k = np.arange(15)
    assert np.allclose(s2.coeffs[:15], [2.0**j / math.factorial(j) for j in k], rtol=1e-12)
    assert rescale_series(s, 1).coeffs.tolist() == s.coeffs.tolist()
    with pytest.raises(ValueError):
        rescale_series(s, 0)
    # L(4z) = p(L(z)) for the cosh case, compared as values
    q, c = chebyshev
    c4 = rescale_series(c, 4)
    w = np.linspace(-1, 1, 9) + 0.3j
    assert np.allclose(c4.series(w), q(c.series(w)), rtol=1e-12)


def test_conjugation_closed_form(square):
    p, s = square
    phi = AffineMap(1, 1)
    s2 = conjugate_linearizer(s, phi)
    p2 = p.conjugate(phi)
    assert np.allclose(p2.coeffs, [0, 2, 1])
    assert s2.z0 == pytest.approx(0) and s2.lam == pytest.approx(2)
    w = np.linspace(-2, 2, 11) + 0.5j
    assert np.allclose(s2.series(w), np.exp(w) - 1, rtol=1e-12, atol=1e-14)
    assert conjugate_linearizer(s, AffineMap(1, 0)).coeffs.tolist() == s.coeffs.tolist()


def test_conjugation_identity_random(outside):
    p, s = outside
    rng = np.random.default_rng(11)
    for _ in range(5):
        a = complex(*rng.normal(size=2))
        b = complex(*rng.normal(size=2))
        phi = AffineMap(a, b)
        s2 = conjugate_linearizer(s, phi)
        p2 = p.conjugate(phi)
        w = 0.5 * (rng.normal(size=20) + 1j * rng.normal(size=20))
        lhs = s2.series(w)
        rhs = phi.inverse()(s.series(a * w))
        assert np.allclose(lhs, rhs, rtol=1e-10, atol=1e-10)
        assert np.all(residual(s2, p2, w) <= 1e-9)


def test_eval_examples(square, chebyshev):
    p, s = square
    out = eval_L(s, p, 10)
    assert out.mode == "exact" and out.value.logmod == pytest.approx(10, rel=1e-8) and abs(out.value.arg) < 1e-8
    out = eval_L(s, p, 1e6)
    assert out.mode == "log_interval"
    assert out.lo <= 1e6 * (1 + 1e-9) and out.hi >= 1e6 * (1 - 1e-9)
    assert (out.hi - out.lo) / 1e6 < 1e-3
    q, c = chebyshev
    out = eval_L(c, q, -math.pi**2)
    assert out.value.to_complex() == pytest.approx(-2, abs=1e-8)


def test_eval_big_argument(square):
    p, s = square
    out = eval_L(s, p, BigComplex.from_polar(800.0, 0.0))
    # log L(e^800) = e^800, past double range
    assert out.mode == "log_interval"
    target = _logmod.exp(800.0)
    assert abs(_logmod.big(out.lo) / target - 1) < 1e-9


def test_eval_rejects_nonfinite(square):
    p, s = square
    with pytest.raises(ValueError):
        eval_L(s, p, complex(np.inf, 0))


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(1, 200))
def test_pullback_consistency(theta, r):
    p = Polynomial([-5, 0, 1])
    s = _outside_series()
    z = r * complex(math.cos(theta), math.sin(theta))
    n = eval_L(s, p, z).pullback
    a = eval_L(s, p, z, pullback=n)
    b = eval_L(s, p, z, pullback=n + 1)
    if a.mode == b.mode == "exact":
        assert abs(a.value.logmod - b.value.logmod) <= 1e-6 * max(1.0, abs(a.value.logmod))


_CACHE = {}


def _outside_series():
    if "s" not in _CACHE:
        _CACHE["s"] = koenigs_series(Polynomial([-5, 0, 1]), (1 + math.sqrt(21)) / 2)
    return _CACHE["s"]


def test_eval_array_matches_scalar(outside):
    p, s = outside
    z = np.array([3 + 4j, -50, 120j, 0.1])
    vals, lo, hi, exact = eval_L_array(s, p, z)
    for zi, v in zip(z, vals):
        assert v == pytest.approx(eval_L(s, p, zi).value.to_complex(), rel=1e-12)


def test_derivative_by_finite_differences(chebyshev):
    p, s = chebyshev
    z = np.array([-9.0 + 1j, 30 - 20j, 150 + 0j])
    v, dv = eval_L_derivative(s, p, z)
    h = 1e-6 * (1 + np.abs(z))
    fd = (eval_L_array(s, p, z + h)[0] - eval_L_array(s, p, z - h)[0]) / (2 * h)
    assert np.allclose(dv, fd, rtol=1e-6)
    # closed form: d/dz 2 cosh(sqrt z) = sinh(sqrt z)/sqrt z
    r = np.sqrt(z)
    assert np.allclose(dv, np.sinh(r) / r, rtol=1e-9)


def test_invert_series(outside):
    p, s = outside
    w = 0.2 * np.exp(2j * np.pi * np.arange(50) / 50)
    z = s.series(w)
    back = invert_series(s, z)
    assert np.allclose(back, w, atol=1e-12)


def test_series_cache_round_trip(tmp_path, outside):
    p, s = outside
    path = tmp_path / "s.txt"
    save_series(s, path)
    t = load_series(path)
    assert path.read_text().splitlines()[0] == "LINEARIZER-SERIES v1"
    assert t.coeffs.tolist() == s.coeffs.tolist()
    assert (t.z0, t.lam, t.normalization, t.r0) == (s.z0, s.lam, s.normalization, s.r0)
    assert dumps_series(loads_series(dumps_series(s))) == dumps_series(s)


def test_series_cache_rejects_garbage():
    with pytest.raises(ValueError):
        loads_series("not a series\n")
