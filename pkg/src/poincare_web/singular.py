"""Exceptional, omitted and critical values of a polynomial and of its linearizer.

Critical points of ``L`` are located with the argument principle on polar
cells of an annulus and polished by Newton's method; their images are then
matched against the forward orbits of the critical values of ``p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .linearizer import LinearizerSeries, eval_L_derivative
from .polynomial import Polynomial


ANGLE_OFFSET = 0.0123456789


def _dedup(points, tol=1e-9):
    out = []
    for z in points:
        z = complex(z)
        if all(abs(z - w) > tol * (1 + abs(w)) for w in out):
            out.append(z)
    return out


def exceptional_points(p: Polynomial, tol: float = 1e-12) -> list[complex]:
    """Points ``w`` with ``p^{-1}(w) = {w}``, i.e. ``p(z) - w = a_d (z - w)^d``.

    The only candidate is ``w = -a_{d-1} / (d a_d)``; it is accepted when all
    coefficients match.
    """
    c = p.coeffs
    d = p.degree
    ad = c[-1]
    w = -c[d - 1] / (d * ad)
    target = np.array([ad * comb(d, i) * (-w) ** (d - i) for i in range(d + 1)], dtype=complex)
    have = c.astype(complex).copy()
    have[0] -= w
    scale = max(1.0, float(np.max(np.abs(target))))
    if np.max(np.abs(have - target)) <= tol * scale:
        return [complex(w) + 0j]
    return []


def critical_values(p: Polynomial) -> list[complex]:
    return _dedup(p(np.asarray(p.critical_points(), dtype=complex)))


@dataclass
class SingularSets:
    Ev_p: list
    Ov_L: list
    Cv_L: list
    Pv_p: list
    depth: int


def singular_sets(p: Polynomial, z0: complex, depth: int = 4) -> SingularSets:
    """Exceptional set of ``p``, omitted and critical values of ``L``, postcritical points of ``p``.

    ``Cv_L`` and ``Pv_p`` are truncated to the first ``depth`` forward images
    of the critical values of ``p``.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    ev = exceptional_points(p)
    ov = [w for w in ev if abs(w - z0) > 1e-9 * (1 + abs(z0))]
    orbit = []
    cur = np.asarray(critical_values(p), dtype=complex)
    for _ in range(depth + 1):
        orbit.extend(cur.tolist())
        cur = p(cur)
    pv = _dedup(orbit)
    cv = [w for w in pv if all(abs(w - e) > 1e-9 * (1 + abs(e)) for e in ev)]
    return SingularSets(ev, ov, cv, pv, depth)


# ---------------------------------------------------------------------------
# critical points of L


def _winding_of(values) -> tuple[int, bool]:
    """Winding number of a closed sampled path around 0, and whether sampling was fine enough."""
    ratio = np.roll(values, -1) / values
    dphi = np.angle(ratio)
    ok = bool(np.all(np.abs(dphi) < np.pi / 3) and np.all(np.isfinite(dphi)))
    return int(round(float(np.sum(dphi)) / (2 * np.pi))), ok


def _cell_boundary(r0, r1, t0, t1, m):
    s = np.linspace(0.0, 1.0, m, endpoint=False)
    radii = np.concatenate([r0 + (r1 - r0) * s, np.full(m, r1), r1 + (r0 - r1) * s, np.full(m, r0)])
    angles = np.concatenate([np.full(m, t0), t0 + (t1 - t0) * s, np.full(m, t1), t1 + (t0 - t1) * s])
    return radii * np.exp(1j * angles)


def _dL(s, p, z):
    return eval_L_derivative(s, p, z)[1]


def _newton_critical(s, p, z, steps=50, tol=1e-13):
    for _ in range(steps):
        h = 1e-6 * (1 + abs(z))
        d1 = _dL(s, p, np.array([z]))[0]
        d2 = (_dL(s, p, np.array([z + h]))[0] - _dL(s, p, np.array([z - h]))[0]) / (2 * h)
        if d2 == 0 or not np.isfinite(d2):
            return z, False
        step = d1 / d2
        z = z - step
        if abs(step) <= tol * (1 + abs(z)):
            return z, True
    return z, False


@dataclass
class CriticalPointReport:
    annulus: tuple
    count: int
    zeros: list
    images: list
    deviations: list
    max_deviation: float
    unresolved_cells: int
    targets: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.unresolved_cells == 0 and len(self.zeros) == self.count and \
            all(dv <= 1e-6 * max(1.0, abs(w)) for dv, w in zip(self.deviations, self.images))


def critical_points_of_L(s: LinearizerSeries, p: Polynomial, annulus, radial: int = 8, angular: int = 32,
                         samples: int = 64, max_split: int = 4):
    """Zeros of ``L'`` in ``r_in < |z| < r_out`` with the per-cell argument-principle counts.

    Returns ``(count, zeros, unresolved)``.  A cell whose boundary sampling is
    too coarse, or passes near a zero, is split into four, up to
    ``max_split`` times.
    """
    r_in, r_out = map(float, annulus)
    if not 0 <= r_in < r_out:
        raise ValueError("annulus must satisfy 0 <= r_in < r_out")
    rs = np.linspace(r_in, r_out, radial + 1)
    # generic offset keeps symmetric zeros (e.g. on the real axis) off cell edges
    ts = ANGLE_OFFSET + np.linspace(-np.pi, np.pi, angular + 1)
    stack = [(rs[i], rs[i + 1], ts[j], ts[j + 1], 0) for i in range(radial) for j in range(angular)]
    total, zeros, unresolved = 0, [], 0
    while stack:
        a, b, t0, t1, lev = stack.pop()
        bd = _cell_boundary(max(a, 1e-12), b, t0, t1, samples)
        vals = _dL(s, p, bd)
        scale = float(np.max(np.abs(vals)))
        wn, ok = _winding_of(vals)
        if ok and float(np.min(np.abs(vals))) > 1e-10 * scale:
            if wn > 0:
                total += wn
                rc, tc = 0.5 * (a + b), 0.5 * (t0 + t1)
                z, conv = _newton_critical(s, p, rc * np.exp(1j * tc))
                ang = (np.angle(z) - t0) % (2 * np.pi) + t0
                inside = conv and a <= abs(z) <= b and ang <= t1 + 1e-12
                if inside:
                    zeros.append(complex(z))
                elif lev < max_split:
                    total -= wn
                    stack.extend(_split(a, b, t0, t1, lev))
                else:
                    unresolved += 1
            continue
        if lev < max_split:
            stack.extend(_split(a, b, t0, t1, lev))
        else:
            unresolved += 1
    zeros.sort(key=lambda z: (abs(z), np.angle(z)))
    return total, zeros, unresolved


def _split(a, b, t0, t1, lev):
    rm, tm = 0.5 * (a + b), 0.5 * (t0 + t1)
    return [(a, rm, t0, tm, lev + 1), (a, rm, tm, t1, lev + 1), (rm, b, t0, tm, lev + 1), (rm, b, tm, t1, lev + 1)]


def verify_Cv_characterization(s: LinearizerSeries, p: Polynomial, depth: int, annulus, **kw) -> CriticalPointReport:
    """Critical points of ``L`` in an annulus and the distance of their images to the truncated ``Cv_L``."""
    count, zeros, unresolved = critical_points_of_L(s, p, annulus, **kw)
    targets = singular_sets(p, s.z0, depth).Cv_L
    images, devs = [], []
    if zeros:
        vals = eval_L_derivative(s, p, np.array(zeros))[0]
        for v in vals:
            v = complex(v)
            images.append(v)
            devs.append(min((abs(v - w) for w in targets), default=math.inf))
    return CriticalPointReport(tuple(annulus), count, zeros, images, devs,
                               max(devs, default=0.0), unresolved, targets)
