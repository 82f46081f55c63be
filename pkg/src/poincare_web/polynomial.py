"""Polynomials, affine maps and the iterate growth bounds near infinity."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import _logmod
from .errors import OutOfRangeError


class Polynomial:
    """Complex polynomial ``a_0 + a_1 z + ... + a_d z^d`` with ``d >= 2``.

    Coefficients are stored in increasing degree order and are read-only.
    """

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).ravel()
        # trailing exact zeros are allowed in input but not kept
        while c.size > 1 and c[-1] == 0:
            c = c[:-1]
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial coefficients must be finite")
        if c.size < 3:
            raise ValueError(f"degree must be at least 2 with a_d != 0, got coefficients {coeffs!r}")
        c.setflags(write=False)
        self.coeffs = c

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.full(z.shape, self.coeffs[-1], dtype=complex)
        for a in self.coeffs[-2::-1]:
            acc = acc * z + a
        return acc if acc.ndim else complex(acc)

    def __repr__(self):
        return f"Polynomial({[complex(a) for a in self.coeffs]!r})"

    def __eq__(self, other):
        return isinstance(other, Polynomial) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(tuple(self.coeffs.tolist()))

    def derivative(self) -> np.ndarray:
        """Coefficients of p' (increasing order); may have degree < 2."""
        return self.coeffs[1:] * np.arange(1, self.coeffs.size)

    def taylor_at(self, z0) -> np.ndarray:
        """Coefficients b_k of ``p(z0 + u) = sum b_k u^k``."""
        b = self.coeffs.astype(complex).copy()
        d = self.degree
        # repeated synthetic division by (z - z0)
        out = np.empty(d + 1, dtype=complex)
        for k in range(d + 1):
            acc = 0j
            rem = np.empty(b.size - 1, dtype=complex)
            for i in range(b.size - 1, -1, -1):
                acc = acc * z0 + b[i]
                if i > 0:
                    rem[i - 1] = acc
            out[k] = acc
            b = rem
            if b.size == 0:
                out[k + 1:] = 0
                break
        return out

    def critical_points(self) -> np.ndarray:
        dp = self.derivative()
        if dp.size == 2:
            return np.array([-dp[0] / dp[1]])
        from .dynamics import polynomial_roots

        return polynomial_roots(dp)

    def conjugate(self, phi: "AffineMap") -> "Polynomial":
        """``phi^{-1} o p o phi`` as a polynomial."""
        # p(a z + b) via Taylor expansion at b, then scale
        t = self.taylor_at(phi.b)
        powers = phi.a ** np.arange(t.size)
        c = t * powers
        c[0] -= phi.b
        return Polynomial(c / phi.a)


def eval_with_derivative(p: Polynomial, z):
    """Horner evaluation of ``(p(z), p'(z))``; works on scalars and arrays."""
    z = np.asarray(z, dtype=complex)
    val = np.full(z.shape, p.coeffs[-1], dtype=complex)
    der = np.zeros(z.shape, dtype=complex)
    for a in p.coeffs[-2::-1]:
        der = der * z + val
        val = val * z + a
    if val.ndim == 0:
        return complex(val), complex(der)
    return val, der


@dataclass(frozen=True)
class AffineMap:
    """The map ``z -> a z + b``."""

    a: complex = 1.0
    b: complex = 0.0

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("affine map needs a != 0")
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))

    def __call__(self, z):
        return self.a * np.asarray(z) + self.b if np.ndim(z) else self.a * z + self.b

    def compose(self, other: "AffineMap") -> "AffineMap":
        """``self o other``."""
        return AffineMap(self.a * other.a, self.a * other.b + self.b)

    def inverse(self) -> "AffineMap":
        return AffineMap(1 / self.a, -self.b / self.a)

    def is_close(self, other: "AffineMap", tol=1e-9) -> bool:
        return abs(self.a - other.a) <= tol and abs(self.b - other.b) <= tol * (1 + abs(self.b))


def tail_ratio(p: Polynomial, r: float) -> float:
    """``sum_{i<d} |a_i| / (|a_d| r^(d-i))``: relative size of the lower terms at |z| = r."""
    d = p.degree
    ad = abs(p.leading)
    low = np.abs(p.coeffs[:-1])
    if r == 0:
        return math.inf if low.any() else 0.0
    if math.isinf(r):
        return 0.0
    return float(sum(low[i] / ad * r ** (i - d) for i in range(d)))


@dataclass(frozen=True)
class GrowthBounds:
    """Constants for ``(1-eps)|a_d||z|^d <= |p(z)| <= (1+eps)|a_d||z|^d`` beyond ``R_eps``."""

    eps: float
    R_eps: float
    k_eps: float
    K_eps: float
    degree: int = field(default=2)

    @classmethod
    def for_polynomial(cls, p: Polynomial, eps: float = 0.01, floor: float = 1.0) -> "GrowthBounds":
        if not 0.0 < eps < 0.5:
            raise ValueError("eps must lie in (0, 1/2)")
        d = p.degree
        ad = abs(p.leading)
        # the tail ratio is decreasing in r, so the threshold is a root (or floor)
        R = max(floor, 1.0)
        if tail_ratio(p, R) > eps:
            lo, hi = R, 2.0 * R
            while tail_ratio(p, hi) > eps:
                lo, hi = hi, 2.0 * hi
            R = brentq(lambda r: tail_ratio(p, r) - eps, lo, hi, xtol=1e-14, rtol=1e-14)
            R = R * (1 + 1e-12)
        # also need (1-eps)|a_d| R^(d-1) > 1; using eps = 1/2 keeps R monotone in eps
        need = (0.5 * ad) ** (-1.0 / (d - 1))
        if R <= need:
            R = need * (1 + 1e-9)
        return cls(eps, R, math.log((1 - eps) * ad), math.log((1 + eps) * ad), d)

    @classmethod
    def beyond(cls, p: Polynomial, radius: float) -> "GrowthBounds":
        """Tightest bounds valid for all ``|z| > radius`` (used once values are huge)."""
        d = p.degree
        ad = abs(p.leading)
        eps = tail_ratio(p, radius)
        return cls(eps, radius, math.log(ad) + math.log1p(-eps), math.log(ad) + math.log1p(eps), d)


def escape_radius(p: Polynomial) -> float:
    """``max(2, (1 + sum_{i<d}|a_i|)/|a_d|) + 1``; orbits beyond it escape."""
    ad = abs(p.leading)
    s = float(np.sum(np.abs(p.coeffs[:-1])))
    return max(2.0, (1.0 + s) / ad) + 1.0


def filled_julia_bound(p: Polynomial) -> float:
    """A radius K >= 1 with ``|p(z)| > |z|`` whenever ``|z| > K``."""
    ad = abs(p.leading)
    s = float(np.sum(np.abs(p.coeffs[:-1])))
    return max(1.0, (1.0 + s) / ad)


def q_n(d: int, n: int) -> int:
    """``(d^n - 1)/(d - 1)``, exactly."""
    return _logmod.q_int(d, n)


def iterate_log_bounds(p: Polynomial, z, n: int, gb: GrowthBounds):
    """Interval containing ``log|p^n(z)|`` for ``|z| > R_eps``.

    ``z`` may be a complex number or, for values past double range, its
    log-modulus passed as ``logmod=`` through :func:`log_bounds_from_logmod`.
    """
    if abs(z) <= gb.R_eps:
        raise OutOfRangeError(f"|z| = {abs(z):.6g} must exceed R_eps = {gb.R_eps:.6g}")
    return log_bounds_from_logmod(p, math.log(abs(z)), n, gb)


def log_bounds_from_logmod(p: Polynomial, logz, n: int, gb: GrowthBounds):
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return logz, logz
    d = p.degree
    return _logmod.tower_step(d, n, gb.k_eps, logz), _logmod.tower_step(d, n, gb.K_eps, logz)
