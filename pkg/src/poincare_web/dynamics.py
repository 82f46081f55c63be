"""Fixed points, critical orbits and affine symmetry groups of finite sets."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .polynomial import AffineMap, Polynomial, escape_radius

TOL_CLASS = 1e-8


def _horner_pair(c, z):
    # c in increasing order; returns (f(z), f'(z)) for arrays
    val = np.full(z.shape, c[-1], dtype=complex)
    der = np.zeros(z.shape, dtype=complex)
    for a in c[-2::-1]:
        der = der * z + val
        val = val * z + a
    return val, der


def polynomial_roots(coeffs, *, tol=1e-14, max_iter=500, seed=0):
    """All roots of a polynomial (increasing-order coefficients) by Aberth–Ehrlich iteration.

    Initial guesses sit on a circle of Cauchy-bound radius with a random
    phase offset drawn from ``seed``, so results are reproducible.
    """
    c = np.asarray(coeffs, dtype=complex)
    while c.size > 1 and c[-1] == 0:
        c = c[:-1]
    n = c.size - 1
    if n < 1:
        return np.empty(0, dtype=complex)
    if n == 1:
        return np.array([-c[0] / c[1]])
    mon = c / c[-1]
    radius = 1.0 + float(np.max(np.abs(mon[:-1])))
    # better start radius: geometric mean of the root moduli
    start = abs(mon[0]) ** (1.0 / n) if mon[0] != 0 else radius / 2
    start = min(max(start, 1e-3), radius)
    rng = np.random.default_rng(seed)
    phase = rng.uniform(0, 2 * np.pi)
    z = start * np.exp(1j * (phase + 2 * np.pi * np.arange(n) / n + 0.4 / n))
    for it in range(max_iter):
        f, df = _horner_pair(c, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(f == 0, 0, f / df)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            s = np.sum(1.0 / diff, axis=1) - 1.0
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 0)
        z = z - w
        if np.all(np.abs(w) <= tol * (1.0 + np.abs(z))):
            break
    else:
        f, _ = _horner_pair(c, z)
        raise ConvergenceError(
            "Aberth iteration did not converge",
            {"roots": z.tolist(), "residuals": np.abs(f).tolist()},
        )
    return z


class FixedPointClass(str, enum.Enum):
    SUPERATTRACTING = "superattracting"
    ATTRACTING = "attracting"
    INDIFFERENT = "indifferent"
    REPELLING = "repelling"


def classify(multiplier: complex, tol: float = TOL_CLASS) -> FixedPointClass:
    m = abs(multiplier)
    if m <= tol:
        return FixedPointClass.SUPERATTRACTING
    if abs(m - 1.0) <= tol:
        return FixedPointClass.INDIFFERENT
    return FixedPointClass.ATTRACTING if m < 1 else FixedPointClass.REPELLING


@dataclass(frozen=True)
class FixedPointInfo:
    z0: complex
    multiplier: complex
    cls: FixedPointClass
    multiplicity: int = 1

    @property
    def repelling(self) -> bool:
        return self.cls is FixedPointClass.REPELLING


def _newton_polish(p: Polynomial, z: complex, steps=4) -> complex:
    c = p.coeffs.copy()
    c[1] -= 1
    for _ in range(steps):
        f, df = _horner_pair(c, np.array([z]))
        if df[0] == 0:
            break
        nz = z - f[0] / df[0]
        if abs(nz - z) <= 1e-17 * (1 + abs(z)):
            z = nz
            break
        z = nz
    return complex(z)


def find_fixed_points(p: Polynomial, *, residual_tol=1e-10, cluster_tol=1e-6) -> list[FixedPointInfo]:
    """Roots of ``p(z) - z`` with multipliers, classes and multiplicities.

    Every returned point satisfies ``|p(z0) - z0| <= residual_tol (1 + |z0|)``.
    Repeated roots are reported once per root (not merged) with their
    cluster multiplicity.
    """
    c = p.coeffs.copy()
    c[1] -= 1
    roots = polynomial_roots(c)
    roots = np.array([_newton_polish(p, z) for z in roots])
    res = np.abs(p(roots) - roots)
    # residual relative to the size of the terms involved
    scale = np.maximum(1.0 + np.abs(roots), 1.0)
    if np.any(res > residual_tol * scale):
        bad = res / scale
        raise ConvergenceError(
            "fixed-point residual above tolerance",
            {"roots": roots.tolist(), "relative_residuals": bad.tolist()},
        )
    out = []
    for z in roots:
        mult = int(np.sum(np.abs(roots - z) <= cluster_tol * (1 + abs(z))))
        _, dp = _horner_pair(p.coeffs, np.array([z]))
        lam = complex(dp[0])
        if mult > 1:
            # derivative at a repeated root of p(z) - z is 1
            lam = 1.0 + 0j
        out.append(FixedPointInfo(complex(z), lam, classify(lam), mult))
    out.sort(key=lambda f: (round(f.z0.real, 12), round(f.z0.imag, 12)))
    return out


def nearest_fixed_point(p: Polynomial, hint: complex) -> FixedPointInfo:
    return min(find_fixed_points(p), key=lambda f: abs(f.z0 - hint))


@dataclass(frozen=True)
class CriticalOrbit:
    point: complex
    escapes: bool
    first_exit: int | None
    orbit: tuple


def critical_escape(p: Polynomial, max_iter: int = 200) -> list[CriticalOrbit]:
    """Follow each critical point until it leaves the escape disk or ``max_iter`` runs out.

    ``first_exit`` is the first iterate index whose modulus exceeds
    :func:`escape_radius`; a non-escaping orbit is evidence, not proof.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    R = escape_radius(p)
    out = []
    for c in p.critical_points():
        z = complex(c)
        orbit = [z]
        exit_at = None
        for n in range(1, max_iter + 1):
            z = p(z)
            orbit.append(z)
            if abs(z) > R:
                exit_at = n
                break
        out.append(CriticalOrbit(complex(c), exit_at is not None, exit_at, tuple(orbit)))
    return out


def _maps_set(h: AffineMap, Z: np.ndarray, tol: float) -> bool:
    img = h(Z)
    dist = np.abs(img[:, None] - Z[None, :])
    # bijection check: every image hits a point and every point is hit
    return bool(np.all(dist.min(axis=1) <= tol) and np.all(dist.min(axis=0) <= tol))


def affine_symmetries(Z, tol: float = 1e-9) -> list[AffineMap]:
    """The group ``{h(z) = a z + b : h(Z) = Z}`` for a finite set ``Z``.

    An affine map is fixed by the images of two points, so candidates come
    from sending one well-separated reference pair to every ordered pair.
    """
    Z = np.asarray(list(Z), dtype=complex)
    if Z.size < 2:
        raise ValueError("need at least two points")
    dist = np.abs(Z[:, None] - Z[None, :])
    np.fill_diagonal(dist, np.inf)
    if dist.min() <= tol:
        raise ValueError("points must be pairwise distinct beyond tol")
    np.fill_diagonal(dist, -np.inf)
    i, j = np.unravel_index(np.argmax(dist), dist.shape)
    span = Z[j] - Z[i]
    scale = tol * (1.0 + float(np.max(np.abs(Z))))
    group: list[AffineMap] = []
    for k in range(Z.size):
        for l in range(Z.size):
            if k == l:
                continue
            # |h(Z_j) - h(Z_i)| = |a| |span| must equal the reference distance
            if abs(abs(Z[l] - Z[k]) - abs(span)) > 10 * scale:
                continue
            a = (Z[l] - Z[k]) / span
            h = AffineMap(a, Z[k] - a * Z[i])
            if _maps_set(h, Z, 10 * scale) and not any(h.is_close(g, 1e3 * tol) for g in group):
                group.append(h)
    group.sort(key=lambda g: (math.atan2(g.a.imag, g.a.real) % (2 * math.pi), g.b.real))
    return group
