"""Closed curves in the escaping set around a fixed point, and the connectivity verdict.

A curve in ``I(p)`` surrounding ``z0`` inside a small disk is found as a
level line of the escape-rate potential

    G(z) = d^-n (log|p^n(z)| + log|a_d| / (d - 1)),

evaluated at the first ``n`` with ``|p^n(z)|`` past a large bailout.  The
level is chosen below the smallest potential on a circle around ``z0`` so
that the sublevel component holding ``z0`` stays inside the disk.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import critical_escape, find_fixed_points
from .polynomial import Polynomial, escape_radius

BAILOUT = 1e10
DEFAULT_BUDGET = 400
DEFAULT_RESOLUTION = 201


@dataclass(frozen=True, eq=False)
class ClosedCurve:
    """Closed polyline; the last vertex connects back to the first."""

    points: np.ndarray
    level: float = math.nan
    label: str = ""

    def __len__(self):
        return self.points.size

    def winding_number(self, about: complex = 0j) -> int:
        w = self.points - about
        if np.any(w == 0):
            return 0
        dphi = np.angle(np.roll(w, -1) / w)
        return int(round(float(np.sum(dphi)) / (2 * np.pi)))

    def min_abs(self, about: complex = 0j) -> float:
        return float(np.min(np.abs(self.points - about)))

    def max_abs(self, about: complex = 0j) -> float:
        return float(np.max(np.abs(self.points - about)))

    def scaled(self, c: complex) -> "ClosedCurve":
        return ClosedCurve(c * self.points, self.level, self.label)

    def is_simple(self) -> bool:
        """True when no two non-adjacent edges intersect."""
        a = self.points
        b = np.roll(a, -1)
        n = a.size
        if n < 3:
            return False

        def orient(p, q, r):
            return np.sign((q.real - p.real) * (r.imag - p.imag) - (q.imag - p.imag) * (r.real - p.real))

        for i in range(n):
            j = np.arange(i + 2, n)
            if i == 0:
                j = j[j != n - 1]
            if j.size == 0:
                continue
            o1 = orient(a[i], b[i], a[j])
            o2 = orient(a[i], b[i], b[j])
            o3 = orient(a[j], b[j], a[i])
            o4 = orient(a[j], b[j], b[i])
            if np.any((o1 * o2 < 0) & (o3 * o4 < 0)):
                return False
        return True


def potential(p: Polynomial, z, budget: int = DEFAULT_BUDGET, bailout: float = BAILOUT):
    """Escape-rate potential on an array; 0 where the orbit stays below ``bailout``."""
    z = np.array(z, dtype=complex)
    d = p.degree
    corr = math.log(abs(p.leading)) / (d - 1)
    out = np.zeros(z.shape)
    w = z.copy()
    alive = np.ones(z.shape, dtype=bool)
    idx = np.flatnonzero(alive.ravel())
    wf = w.ravel()
    of = out.ravel()
    for n in range(1, budget + 1):
        wf[idx] = p(wf[idx])
        a = np.abs(wf[idx])
        esc = a > bailout
        if esc.any():
            of[idx[esc]] = (np.log(a[esc]) + corr) / float(d) ** n
            idx = idx[~esc]
        if idx.size == 0:
            break
    return of.reshape(z.shape)


def escapes(p: Polynomial, z, budget: int = DEFAULT_BUDGET):
    """Boolean array: orbit leaves the escape disk within ``budget`` steps."""
    R = escape_radius(p)
    w = np.array(z, dtype=complex, ndmin=1)
    out = np.abs(w) > R
    for _ in range(budget):
        act = ~out
        if not act.any():
            break
        w[act] = p(w[act])
        out |= np.abs(w) > R
    return out


def _contours(grid, level):
    from skimage.measure import find_contours

    return find_contours(grid, level)


def _refine_on_edges(p, verts, x0, y0, h, level, budget):
    """Move contour vertices along their grid edge onto the true level line by bisection."""
    rows, cols = verts[:, 0], verts[:, 1]
    on_row = np.abs(rows - np.round(rows)) < 1e-9
    a = np.where(on_row, np.floor(cols), cols) + 1j * np.where(on_row, rows, np.floor(rows))
    b = np.where(on_row, np.floor(cols) + 1, cols) + 1j * np.where(on_row, rows, np.floor(rows) + 1)
    to_plane = lambda q: (x0 + q.real * h) + 1j * (y0 + q.imag * h)
    A, B = to_plane(a), to_plane(b)
    ga = potential(p, A, budget) - level
    lo, hi = np.zeros(A.shape), np.ones(A.shape)
    t0 = np.where(on_row, cols - np.floor(cols), rows - np.floor(rows))
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        gm = potential(p, A + mid * (B - A), budget) - level
        same = np.sign(gm) == np.sign(ga)
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    t = 0.5 * (lo + hi)
    # keep the interpolated vertex where the edge has no sign change in G
    gb = potential(p, B, budget) - level
    t = np.where(np.sign(ga) != np.sign(gb), t, t0)
    return A + t * (B - A)


def escape_curve(p: Polynomial, z0: complex, delta: float, resolution: int = DEFAULT_RESOLUTION,
                 budget: int = DEFAULT_BUDGET):
    """A simple closed curve in ``I(p) ∩ D_delta(z0)`` winding once around ``z0``.

    Returns ``None`` when no such level line is resolved on the grid, which
    is the expected outcome when the Julia component of ``z0`` is not a point.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    z0 = complex(z0)
    res = int(resolution) | 1
    h = 2 * delta / (res - 1)
    x0, y0 = z0.real - delta, z0.imag - delta
    xs = x0 + h * np.arange(res)
    ys = y0 + h * np.arange(res)
    Z = xs[None, :] + 1j * ys[:, None]
    G = potential(p, Z, budget)
    # circle with the largest minimum potential bounds the sublevel component
    m = 8 * res
    ring = np.exp(2j * np.pi * np.arange(m) / m)
    best = 0.0
    for frac in np.linspace(0.3, 0.95, 14):
        best = max(best, potential(p, z0 + frac * delta * ring, budget).min())
    if best <= 0:
        return None
    level = 0.5 * best
    candidates = []
    for c in _contours(G, level):
        if c.shape[0] < 8 or np.max(np.abs(c[0] - c[-1])) > 1e-9:
            continue
        pts = (x0 + h * c[:-1, 1]) + 1j * (y0 + h * c[:-1, 0])
        curve = ClosedCurve(pts, level)
        if abs(curve.winding_number(z0)) != 1 or curve.max_abs(z0) >= delta:
            continue
        candidates.append((curve.max_abs(z0), c[:-1]))
    if not candidates:
        return None
    _, verts = min(candidates, key=lambda t: t[0])
    pts = _refine_on_edges(p, verts, x0, y0, h, level, budget)
    keep = np.concatenate([[True], np.abs(np.diff(pts)) > 1e-15 * (1 + abs(z0))])
    pts = pts[keep]
    if pts.size > 1 and abs(pts[-1] - pts[0]) <= 1e-15 * (1 + abs(z0)):
        pts = pts[:-1]
    curve = ClosedCurve(pts, level, f"gamma_delta={delta:g}")
    if curve.winding_number(z0) == -1:
        curve = ClosedCurve(pts[::-1].copy(), level, curve.label)
    if curve.winding_number(z0) != 1 or curve.max_abs(z0) >= delta:
        return None
    if not np.all(escapes(p, curve.points, budget)):
        return None
    if not curve.is_simple():
        return None
    return curve


class Connectivity(str, enum.Enum):
    SINGLETON_CERTIFIED = "singleton_certified"
    SINGLETON_EVIDENCE = "singleton_evidence"
    NONTRIVIAL_EVIDENCE = "nontrivial_evidence"
    UNKNOWN = "unknown"


@dataclass
class ConnectivityVerdict:
    status: Connectivity
    depth: int
    evidence: dict = field(default_factory=dict)

    @property
    def is_singleton(self) -> bool:
        return self.status in (Connectivity.SINGLETON_CERTIFIED, Connectivity.SINGLETON_EVIDENCE)


def component_verdict(p: Polynomial, z0: complex, scales=(0.1, 0.01), resolution: int = DEFAULT_RESOLUTION,
                      max_iter: int = 200) -> ConnectivityVerdict:
    """Decide whether the Julia component through ``z0`` is ``{z0}``.

    All critical points escaping is a certificate (the Julia set is then a
    Cantor set); otherwise escape curves at every scale count as evidence,
    and a failure confirmed at doubled resolution as evidence against.
    """
    crit = critical_escape(p, max_iter)
    evidence = {"critical_exits": [c.first_exit for c in crit]}
    scales = sorted((float(x) for x in scales), reverse=True)
    if all(c.escapes for c in crit):
        return ConnectivityVerdict(Connectivity.SINGLETON_CERTIFIED, len(scales), evidence)
    if not scales:
        return ConnectivityVerdict(Connectivity.UNKNOWN, 0, evidence)
    found = []
    for i, delta in enumerate(scales):
        curve = escape_curve(p, z0, delta, resolution)
        if curve is None:
            curve = escape_curve(p, z0, delta, 2 * resolution + 1)
            if curve is None:
                evidence["curve_scales"] = found
                evidence["failed_scale"] = delta
                return ConnectivityVerdict(Connectivity.NONTRIVIAL_EVIDENCE, i, evidence)
        found.append(delta)
    evidence["curve_scales"] = found
    return ConnectivityVerdict(Connectivity.SINGLETON_EVIDENCE, len(scales), evidence)


def default_delta(p: Polynomial, z0: complex) -> float:
    """Half the distance from ``z0`` to the nearest other fixed point or critical point."""
    others = [f.z0 for f in find_fixed_points(p) if abs(f.z0 - z0) > 1e-9 * (1 + abs(z0))]
    others += [complex(c) for c in p.critical_points()]
    dist = [abs(w - z0) for w in others if abs(w - z0) > 1e-12]
    return 0.5 * min(dist) if dist else 1.0
