import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poincare_web import (AffineMap, FixedPointClass, Polynomial, affine_symmetries, classify, critical_escape,
                          find_fixed_points, polynomial_roots)
from poincare_web.dynamics import nearest_fixed_point


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=3, max_size=8))
def test_roots_match_numpy(coeffs):
    if abs(coeffs[-1]) < 0.1:
        return
    ours = polynomial_roots(coeffs)
    ref = np.roots(coeffs[::-1])
    # every reference root has a close partner
    scale = 1 + np.max(np.abs(ref))
    for r in ref:
        assert np.min(np.abs(ours - r)) < 1e-5 * scale


def _by_value(fps):
    return sorted(fps, key=lambda f: (f.z0.real, f.z0.imag))


def test_fixed_points_square():
    a, b = _by_value(find_fixed_points(Polynomial([0, 0, 1])))
    assert a.z0 == pytest.approx(0) and a.cls is FixedPointClass.SUPERATTRACTING
    assert b.z0 == pytest.approx(1) and b.multiplier == pytest.approx(2) and b.repelling


def test_fixed_points_chebyshev():
    a, b = _by_value(find_fixed_points(Polynomial([-2, 0, 1])))
    assert a.z0 == pytest.approx(-1) and a.multiplier == pytest.approx(-2)
    assert b.z0 == pytest.approx(2) and b.multiplier == pytest.approx(4)


def test_fixed_points_outside_quadratic_formula():
    p = Polynomial([-5, 0, 1])
    a, b = _by_value(find_fixed_points(p))
    r = math.sqrt(21)
    assert a.z0 == pytest.approx((1 - r) / 2, abs=1e-12) and a.multiplier == pytest.approx(1 - r)
    assert b.z0 == pytest.approx((1 + r) / 2, abs=1e-12) and b.multiplier == pytest.approx(1 + r)
    for f in (a, b):
        assert abs(p(f.z0) - f.z0) <= 1e-10 * (1 + abs(f.z0))
    assert nearest_fixed_point(p, 3).z0 == pytest.approx(b.z0)


def test_classify():
    assert classify(0) is FixedPointClass.SUPERATTRACTING
    assert classify(0.5j) is FixedPointClass.ATTRACTING
    assert classify(np.exp(1j)) is FixedPointClass.INDIFFERENT
    assert classify(1 + 1e-9) is FixedPointClass.INDIFFERENT
    assert classify(-1.5) is FixedPointClass.REPELLING


def test_repeated_fixed_point_flagged():
    # z + (z-1)^2 has a double fixed point at 1
    fps = find_fixed_points(Polynomial([1, -1, 1]))
    assert any(f.multiplicity == 2 for f in fps)


def test_critical_escape_examples():
    # 0 -> -5 -> 20: |20| exceeds R_esc = 7 at index 2
    (c,) = critical_escape(Polynomial([-5, 0, 1]), 50)
    assert c.escapes and c.first_exit == 2
    (c,) = critical_escape(Polynomial([0, 0, 1]), 50)
    assert not c.escapes and c.first_exit is None
    (c,) = critical_escape(Polynomial([-2, 0, 1]), 50)
    assert not c.escapes


def _brute_symmetries(Z, tol=1e-9):
    Z = list(Z)
    out = []
    for (u, v), (x, y) in itertools.product(itertools.permutations(Z, 2), repeat=2):
        if (u, v) != tuple(Z[:2]):
            continue
        a = (y - x) / (v - u)
        h = AffineMap(a, x - a * u)
        img = [h(z) for z in Z]
        if all(min(abs(w - z) for z in Z) < tol * (1 + abs(w)) for w in img):
            if not any(h.is_close(g) for g in out):
                out.append(h)
    return out


def test_symmetries_of_square():
    Z = [1, 1j, -1, -1j]
    G = affine_symmetries(Z)
    assert len(G) == 4
    assert {complex(round(g.a.real), round(g.a.imag)) for g in G} == {1, 1j, -1, -1j}
    assert all(abs(g.b) < 1e-12 for g in G)


def test_symmetries_of_pair():
    G = affine_symmetries([0, 1])
    assert len(G) == 2
    assert any(g.is_close(AffineMap(-1, 1)) for g in G)


def test_symmetries_random_triples_are_trivial():
    rng = np.random.default_rng(1)
    for _ in range(20):
        Z = rng.normal(size=3) + 1j * rng.normal(size=3)
        G = affine_symmetries(Z)
        assert len(G) == 1 == len(_brute_symmetries(Z))
        assert G[0].is_close(AffineMap(1, 0))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 7), st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.complex_numbers(min_magnitude=0.5, max_magnitude=2, allow_nan=False, allow_infinity=False))
def test_symmetry_group_properties(n, shift, scale):
    Z = shift + scale * np.exp(2j * np.pi * np.arange(n) / n)
    G = affine_symmetries(Z)
    assert len(G) == n  # rotations of a regular n-gon
    c = Z.mean()
    for g in G:
        assert abs(g(c) - c) < 1e-8
        assert any(g.inverse().is_close(h, 1e-8) for h in G)
        for h in G:
            assert any(g.compose(h).is_close(k, 1e-8) for k in G)
        img = g(Z)
        assert all(np.min(np.abs(Z - w)) < 1e-8 for w in img)
