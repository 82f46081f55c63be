"""Maximum/minimum modulus of a linearizer on circles, and its order of growth."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _logmod
from .linearizer import LinearizerSeries, pullback_depth, push_forward, tail_bounds, THETA_LOGMOD
from .polynomial import Polynomial

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
DEFAULT_SAMPLES = 1024


def _mid(lo, hi):
    if lo == hi:
        return lo
    if _logmod.is_big(lo) or _logmod.is_big(hi):
        if not (_logmod.ctx.isfinite(lo) and _logmod.ctx.isfinite(hi)):
            return math.nan
        return _logmod.demote((_logmod.big(lo) + _logmod.big(hi)) / 2)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return math.nan
    return 0.5 * (lo + hi)


class Circle:
    """The circle ``|z| = exp(logr)`` pulled back into the validated disk.

    ``logr`` may be a float or an extended-range mpf.  Angles refer to the
    original circle.
    """

    def __init__(self, s: LinearizerSeries, p: Polynomial, logr):
        self.s, self.p = s, p
        self.logr = logr
        self.n = pullback_depth(s, logr)
        loglam = math.log(abs(s.lam))
        argl = math.atan2(s.lam.imag, s.lam.real)
        if _logmod.is_big(logr) or self.n > 10**6:
            ctx = _logmod.ctx
            self.rho = float(ctx.exp(_logmod.big(logr) - self.n * ctx.mpf(loglam)))
            rot = -self.n * ctx.mpf(argl)
            self.rot = float(rot - 2 * ctx.pi * ctx.floor(rot / (2 * ctx.pi)))
        else:
            self.rho = math.exp(logr - self.n * loglam)
            self.rot = math.remainder(-self.n * argl, 2 * math.pi)

    def evaluate(self, theta):
        """``(lo, hi)`` bounds of ``log|L|`` at angles ``theta`` (object arrays)."""
        theta = np.array(theta, dtype=float, ndmin=1)
        w = self.rho * np.exp(1j * (theta + self.rot))
        v0 = self.s.series(w)
        v, rem = push_forward(self.p, v0, np.full(theta.shape, self.n, dtype=object))
        with np.errstate(divide="ignore"):
            logabs = np.log(np.abs(v))
        exact = np.array([r == 0 for r in rem]) & (logabs < THETA_LOGMOD)
        lo = logabs.astype(object)
        hi = logabs.astype(object)
        if not exact.all():
            idx = np.flatnonzero(~exact)
            tlo, thi = tail_bounds(self.p, v[idx], rem[idx])
            lo[idx], hi[idx] = tlo, thi
        return lo, hi

    def points(self, theta):
        return np.exp(float(self.logr)) * np.exp(1j * np.asarray(theta)) if not _logmod.is_big(self.logr) else None


@dataclass
class CircleExtremum:
    est: float
    lo: float
    hi: float
    theta: float
    converged: bool
    evaluations: int


def _extremum(circle: Circle, k: int, sign: int, refine: bool, rtol=1e-6) -> CircleExtremum:
    theta = 2 * np.pi * np.arange(k) / k
    lo, hi = circle.evaluate(theta)
    mids = [_mid(a, b) for a, b in zip(lo, hi)]
    keys = [(-math.inf if (isinstance(m, float) and math.isnan(m)) else sign * m) for m in mids]
    i = max(range(k), key=lambda j: keys[j])
    best = (keys[i], lo[i], hi[i], theta[i])
    evals = k
    converged = True
    if refine and k >= 3:
        h = 2 * np.pi / k
        a, b = theta[i] - h, theta[i] + h

        def f(t):
            l_, h_ = circle.evaluate([t])
            m = _mid(l_[0], h_[0])
            return (-math.inf if (isinstance(m, float) and math.isnan(m)) else sign * m), l_[0], h_[0]

        c = b - GOLDEN * (b - a)
        d = a + GOLDEN * (b - a)
        fc, fd = f(c), f(d)
        evals += 2
        converged = False
        for _ in range(80):
            prev = best[0]
            if fc[0] > fd[0]:
                b, d, fd = d, c, fc
                c = b - GOLDEN * (b - a)
                fc = f(c)
                cand = (fd, d)
            else:
                a, c, fc = c, d, fd
                d = a + GOLDEN * (b - a)
                fd = f(d)
                cand = (fc, c)
            evals += 1
            for val, t in (cand, (fc, c), (fd, d)):
                if val[0] > best[0]:
                    best = (val[0], val[1], val[2], t)
            gain = best[0] - prev
            if b - a < 1e-13 or (gain >= 0 and abs(gain) <= rtol * max(1.0, abs(_logmod.to_float(best[0])))
                                 and b - a < h / 16):
                converged = True
                break
    key, l_, h_, t = best
    return CircleExtremum(_mid(l_, h_), _logmod.demote(l_), _logmod.demote(h_), float(t) % (2 * np.pi), converged, evals)


def max_modulus(s, p, logr, k: int = DEFAULT_SAMPLES, refine: bool = True) -> CircleExtremum:
    """Estimate of ``log M(L, r)`` for ``log r = logr`` (sampled, so a lower estimate)."""
    return _extremum(Circle(s, p, logr), k, +1, refine)


def min_modulus(s, p, logr, k: int = DEFAULT_SAMPLES, refine: bool = True) -> CircleExtremum:
    """Estimate of ``log m(L, r)`` (sampled, so an upper estimate)."""
    return _extremum(Circle(s, p, logr), k, -1, refine)


@dataclass
class ModulusProfile:
    radii: np.ndarray
    logM: np.ndarray
    logm: np.ndarray
    samples_per_circle: int
    argmax: np.ndarray = field(default=None)
    argmin: np.ndarray = field(default=None)
    converged: np.ndarray = field(default=None)


def modulus_profile(s: LinearizerSeries, p: Polynomial, radii, k: int = DEFAULT_SAMPLES,
                    refine: bool = True) -> ModulusProfile:
    """Sampled ``log M(L, r)`` and ``log m(L, r)`` for ascending positive radii.

    A minimum below double range (``|L| < 1e-308``) is reported as ``-inf``.
    """
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be positive and strictly ascending")
    logM, logm, amax, amin, conv = [], [], [], [], []
    for r in radii:
        c = Circle(s, p, math.log(r))
        hi = _extremum(c, k, +1, refine)
        lo = _extremum(c, k, -1, refine)
        logM.append(_logmod.to_float(hi.est))
        logm.append(_logmod.to_float(lo.est))
        amax.append(hi.theta)
        amin.append(lo.theta)
        conv.append(hi.converged and lo.converged)
    return ModulusProfile(radii, np.array(logM), np.array(logm), k, np.array(amax), np.array(amin), np.array(conv))


def theoretical_order(p: Polynomial, lam: complex) -> float:
    return math.log(p.degree) / math.log(abs(lam))


def order_estimate(profile: ModulusProfile) -> float:
    """Least-squares slope of ``log log M(L, r)`` against ``log r``."""
    r = np.asarray(profile.radii, dtype=float)
    if r.size < 4 or math.log10(r[-1] / r[0]) < 2.0 - 1e-9:
        raise ValueError("order estimate needs at least 4 radii spanning 2 decades")
    logM = np.asarray(profile.logM, dtype=float)
    if np.any(logM <= 0):
        raise ValueError("log M must be positive on every radius used for the fit")
    slope, _ = np.polyfit(np.log(r), np.log(logM), 1)
    return float(slope)
