"""Level radii, growth-regularity tables, minimum-modulus rings and the web verdict.

Every comparison between tower-sized quantities is made on log-moduli,
which are floats while they fit and extended-range mpf values beyond.
Strict inequalities are tested with a 1% multiplicative slack on the side
that is supposed to dominate; both the raw and the slacked outcome are kept.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _logmod
from .bigcomplex import BigComplex
from .errors import ConvergenceError, OutOfRangeError, PreconditionError
from .escape import ClosedCurve, default_delta, escape_curve
from .growth import Circle, max_modulus, min_modulus, _extremum
from .linearizer import LinearizerSeries, eval_L, eval_L_array, invert_series, push_forward, tail_bounds
from .polynomial import GrowthBounds, Polynomial, filled_julia_bound

SLACK = 1.01
R_SEARCH_MAX_DOUBLINGS = 48
TOWER_LOGR_LIMIT = 1e300  # circles beyond this log-radius are not sampled


def _gt(a, b):
    """``a > b`` for floats or extended-range values."""
    if _logmod.is_big(a) or _logmod.is_big(b):
        return bool(_logmod.big(a) > _logmod.big(b))
    return a > b


def _scaled(x, factor):
    return _logmod.demote(_logmod.big(x) * factor) if _logmod.is_big(x) else x * factor


def _dominates(big_side, small_side, slack=SLACK):
    """Raw and slacked outcome of ``big_side > small_side`` for log-moduli."""
    raw = _gt(big_side, small_side)
    if _gt(small_side, 0.0) or small_side == 0:
        slacked = _gt(big_side, _scaled(small_side, slack))
    else:
        slacked = _gt(_scaled(big_side, slack), small_side) if _gt(big_side, 0.0) else \
            _gt(big_side, _scaled(small_side, 1.0 / slack))
    return raw, raw and slacked


# ---------------------------------------------------------------------------
# level radii


@dataclass
class LevelParams:
    """Radius ``R`` and the tower ``M^n(L, R)``, ``r_n = |lam|^n M^n(L, R)`` in log form.

    ``logM[n]`` is ``log M^n(L, R)`` and ``log_r[n]`` is ``log r_n`` for
    ``n = 0..len-1``; entries may be mpf.  ``depth`` is the largest ``n`` for
    which ``r_{n+1}`` is also known.
    """

    R: float
    R_L: float
    R_1: float
    logM: list
    log_r: list
    depth: int
    depth_capped: bool = False
    samples: int = 1024

    @property
    def r_seq(self):
        return self.log_r


def coefficient_radius(p: Polynomial, lam: complex) -> float:
    """``2 max{log|a_d|, log(2/|a_d|), log|lam|}``."""
    ad = abs(p.leading)
    return 2.0 * max(math.log(ad), math.log(2.0 / ad), math.log(abs(lam)))


def growth_threshold(s: LinearizerSeries, p: Polynomial, k: int = 256, start: float = 1.0,
                     max_doublings: int = R_SEARCH_MAX_DOUBLINGS) -> float:
    """Smallest tested ``R_L`` with ``M(L, r) > r`` on the sampled radii ``r >= R_L``.

    Windows ``[2^i start, 2^(i+1) start]`` are checked at 9 radii each; the
    answer is the top of the last failing window.  Raises
    :class:`ConvergenceError` if the check still fails in the final window.
    """
    last_fail = None
    for i in range(max_doublings):
        lo = math.log(start) + i * math.log(2.0)
        for logr in lo + math.log(2.0) * np.arange(9) / 8.0:
            est = _extremum(Circle(s, p, float(logr)), k, +1, False).est
            if not _gt(est, float(logr)):
                last_fail = i
                break
    if last_fail == max_doublings - 1:
        raise ConvergenceError("M(L,r) > r still fails at the end of the search range",
                               {"log_r_max": math.log(start) + max_doublings * math.log(2.0)})
    return start if last_fail is None else start * 2.0 ** (last_fail + 1)


def choose_R(s: LinearizerSeries, p: Polynomial, depth: int = 4, k: int = 1024,
             R_L: float | None = None) -> LevelParams:
    """``R = max(R_L, R_1)`` and the radii ``r_n`` up to ``r_{depth+1}``.

    The tower stops early (``depth_capped``) once a circle radius leaves the
    range where the pullback depth is representable.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    R1 = coefficient_radius(p, s.lam)
    RL = growth_threshold(s, p) if R_L is None else float(R_L)
    R = max(RL, R1)
    loglam = math.log(abs(s.lam))
    logM = [math.log(R)]
    capped = False
    while len(logM) < depth + 2:
        prev = logM[-1]
        if _gt(prev, TOWER_LOGR_LIMIT):
            capped = True
            break
        logM.append(max_modulus(s, p, prev, k).est)
    log_r = [_logmod.demote(_logmod.big(m) + n * loglam) if _logmod.is_big(m) else m + n * loglam
             for n, m in enumerate(logM)]
    return LevelParams(R, RL, R1, logM, log_r, len(logM) - 2, capped, k)


def fast_growth_threshold(p: Polynomial, lam: complex, k: int, gb: GrowthBounds | None = None) -> float:
    """A sufficient ``R_k`` for ``M(L, r_n) > r_{n+1}^m`` (``m <= d^k``, ``n > k``)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return coefficient_radius(p, lam)
    gb = gb or GrowthBounds.for_polynomial(p)
    d = p.degree
    a = abs(gb.k_eps)
    sq = math.sqrt(math.e)
    logR = max(2 * a, 2 * k / d * a, sq * math.log(abs(lam)) / ((2 - sq) * (k + 2)))
    return math.exp(logR)


# ---------------------------------------------------------------------------
# growth tables


@dataclass
class RegularityRow:
    n: int
    ratio: float
    lower: float
    upper: float
    passed_raw: bool
    passed: bool


def verify_regularity(s: LinearizerSeries, p: Polynomial, gb: GrowthBounds, r: float, n_max: int = 6,
                      R_L: float | None = None, k: int = 1024) -> list[RegularityRow]:
    """Check the product bounds on ``log M(L, |lam|^n r) / log M(L, r)`` for ``n = 1..n_max``."""
    if r <= gb.R_eps or (R_L is not None and r <= R_L):
        raise PreconditionError(f"r = {r:g} must exceed R_eps = {gb.R_eps:g}"
                                + ("" if R_L is None else f" and R_L = {R_L:g}"))
    logr = math.log(r)
    loglam = math.log(abs(s.lam))
    if R_L is None and not _gt(max_modulus(s, p, logr, k).est, logr):
        raise PreconditionError(f"M(L, r) > r fails at r = {r:g}")
    d = p.degree
    logM = [max_modulus(s, p, logr + i * loglam, k).est for i in range(n_max + 1)]
    rows = []
    lo_prod = hi_prod = 1.0
    for n in range(1, n_max + 1):
        m_prev = _logmod.to_float(logM[n - 1])
        lo_prod *= d + gb.k_eps / m_prev
        hi_prod *= d + gb.K_eps / m_prev
        ratio = _logmod.to_float(_logmod.big(logM[n]) / _logmod.big(logM[0])) \
            if _logmod.is_big(logM[n]) else logM[n] / logM[0]
        raw = lo_prod <= ratio <= hi_prod
        ok = lo_prod / SLACK <= ratio <= hi_prod * SLACK
        rows.append(RegularityRow(n, ratio, lo_prod, hi_prod, raw, ok))
    return rows


@dataclass
class FastGrowthRow:
    n: int
    m: int
    lhs: object  # log M(L, r_n)
    rhs: object  # m log r_{n+1}
    passed_raw: bool
    passed: bool


def verify_fast_growth(s: LinearizerSeries, p: Polynomial, k: int, params: LevelParams, n_range,
                       m_values=None, gb: GrowthBounds | None = None) -> list[FastGrowthRow]:
    """Check ``log M(L, r_n) > m log r_{n+1}`` on the level radii."""
    d = p.degree
    Rk = fast_growth_threshold(p, s.lam, k, gb)
    if params.R < Rk:
        raise PreconditionError(f"R = {params.R:g} is below R_{k} = {Rk:g}")
    m_values = [d] if m_values is None else list(m_values)
    for m in m_values:
        if not 1 <= m <= d**k:
            raise PreconditionError(f"m = {m} outside 1..{d**k}")
    rows = []
    for n in n_range:
        if n <= k:
            raise PreconditionError(f"n = {n} must exceed k = {k}")
        if n + 1 >= len(params.log_r):
            raise PreconditionError(f"r_{n + 1} unavailable (tower depth {params.depth})")
        lhs = max_modulus(s, p, params.log_r[n], params.samples).est
        for m in m_values:
            rhs = _scaled(params.log_r[n + 1], m)
            raw, ok = _dominates(lhs, rhs)
            rows.append(FastGrowthRow(n, m, lhs, rhs, raw, ok))
    return rows


# ---------------------------------------------------------------------------
# rings


@dataclass
class CurveScaling:
    """A curve ``gamma`` around ``z0`` in the escaping set and its preimage near 0.

    ``l_r``/``l_t`` are filled in by :meth:`for_radius`.
    """

    delta: float
    gamma_delta: ClosedCurve
    Gamma_delta: ClosedCurve
    s: float
    t: float
    j: int
    m: int
    C: float
    c_small: float
    l_eps: float
    R_m: float
    l_r: int | None = None
    l_t: int | None = None

    def for_radius(self, logr, loglam: float) -> "CurveScaling":
        l_r, l_t = ring_exponents(logr, self.m, self.t, loglam)
        return replace(self, l_r=l_r, l_t=l_t)


def ring_exponents(logr, m: int, t: float, loglam: float):
    """Integers with ``|lam|^(l_r-1) <= r < |lam|^l_r`` and ``t |lam|^l_t <= r^m < t |lam|^(l_t+1)``."""
    lr = _logmod.big(logr)
    ll = _logmod.big(loglam)
    l_r = int(_logmod.ctx.floor(lr / ll)) + 1
    x = m * lr - _logmod.ctx.log(t)
    l_t = int(_logmod.ctx.floor(x / ll))
    # guard against rounding at the integer boundaries
    while (l_r - 1) * ll > lr:
        l_r -= 1
    while l_r * ll <= lr:
        l_r += 1
    while l_t * ll > x:
        l_t -= 1
    while (l_t + 1) * ll <= x:
        l_t += 1
    return l_r, l_t


def _first_exit_all(p: Polynomial, z, radius: float, budget: int = 400) -> int:
    w = np.array(z, dtype=complex)
    for j in range(budget + 1):
        if np.all(np.abs(w) > radius):
            return j
        w = p(w)
    raise ConvergenceError("curve does not leave the R_eps disk within the budget", {"radius": radius})


def curve_scaling(s: LinearizerSeries, p: Polynomial, gamma: ClosedCurve, delta: float, m: int = 2,
                  eps: float = 0.01) -> CurveScaling:
    """Pull ``gamma`` back through the series and collect the ring constants."""
    if m < 2:
        raise ValueError("m must be at least 2")
    pre = invert_series(s, gamma.points)
    Gamma = ClosedCurve(pre, gamma.level, "Gamma_delta")
    if Gamma.winding_number(0j) != 1:
        raise ConvergenceError("pulled-back curve does not wind once around 0", {"delta": delta})
    gb = GrowthBounds.for_polynomial(p, eps)
    d = p.degree
    ad = abs(p.leading)
    loglam = math.log(abs(s.lam))
    smin, tmax = Gamma.min_abs(), Gamma.max_abs()
    j = _first_exit_all(p, gamma.points, gb.R_eps)
    C = math.log(tmax) / loglam + m + 1
    c_small = math.log(tmax) / loglam
    num = math.log((1 + eps) * ad * gb.R_eps)
    den = math.log((1 - eps) * ad * gb.R_eps**d)
    l_eps = num / den * d ** (C + j + 1)
    R_m = max((abs(s.lam) * tmax / smin) ** (1.0 / (m - 1)),
              abs(s.lam) ** (math.log(l_eps) / math.log(d)))
    return CurveScaling(delta, gamma, Gamma, smin, tmax, j, m, C, c_small, l_eps, R_m)


def curve_candidates(s: LinearizerSeries, p: Polynomial, m: int = 2, delta: float | None = None,
                     tries: int = 4, resolution: int = 401):
    """Curve scalings at ``delta, delta/2, ...``; scales where the curve or inversion fails are skipped."""
    z0 = s.z0
    delta = default_delta(p, z0) if delta is None else delta
    out = []
    for _ in range(tries):
        gamma = escape_curve(p, z0, delta, resolution)
        if gamma is not None:
            try:
                out.append(curve_scaling(s, p, gamma, delta, m))
            except (OutOfRangeError, ConvergenceError):
                pass
        delta *= 0.5
    return out


@dataclass
class RingCertificate:
    n: int
    ring: ClosedCurve
    l_t: int
    log_min_on_ring: object
    log_max_inner: object
    separates: bool
    verdict: bool
    verdict_raw: bool
    above_R_m: bool
    log_r: object = math.nan
    delta: float = math.nan
    log_min_abs: object = math.nan  # log min |z| on the ring
    log_max_abs: object = math.nan  # log max |z| on the ring


def ring_certificate(s: LinearizerSeries, p: Polynomial, cs: CurveScaling, r=None, m: int | None = None, *,
                     logr=None, n: int = 0, enforce_threshold: bool = False, k: int = 1024) -> RingCertificate:
    """Scaled copy of the pulled-back curve between ``|z| = r`` and ``|z| = r^m`` and its minimum of ``|L|``.

    ``L`` on the ring is evaluated through the functional equation as
    ``p^l_t`` applied to ``L`` on the unscaled curve; values past double range
    carry log-interval bounds and the lower end is used.
    """
    if logr is None:
        if r is None or r <= 0:
            raise ValueError("a positive radius is required")
        logr = math.log(r)
    m = cs.m if m is None else m
    if m < 2:
        raise ValueError("m must be at least 2")
    if m != cs.m:
        cs = replace(cs, m=m)
    if enforce_threshold and not _gt(logr, math.log(cs.R_m)):
        raise PreconditionError(f"log r = {_logmod.fmt17(logr)} is not above log R_m = {math.log(cs.R_m):.6g}")
    loglam = math.log(abs(s.lam))
    cs = cs.for_radius(logr, loglam)
    l_t = cs.l_t
    log_inner = _logmod.big(math.log(cs.s)) + l_t * _logmod.big(loglam)
    log_outer = _logmod.big(math.log(cs.t)) + l_t * _logmod.big(loglam)
    separates = bool(log_inner > _logmod.big(logr)) and bool(log_outer <= m * _logmod.big(logr))
    if l_t * loglam + math.log(cs.t) < 700:
        ring = ClosedCurve(complex(s.lam) ** l_t * cs.Gamma_delta.points, cs.gamma_delta.level, f"ring n={n}")
        _, lo, _, _ = eval_L_array(s, p, ring.points, pullback=l_t)
        log_min = float(np.min(lo))
    else:
        # ring coordinates past double range: sample through the functional equation only
        ring = ClosedCurve(np.array([], dtype=complex), cs.gamma_delta.level, f"ring n={n}")
        log_min = _ring_min_by_pushforward(s, p, cs, l_t)
    log_max = max_modulus(s, p, logr, k).est
    raw, ok = _dominates(log_min, log_max)
    above = _gt(logr, math.log(cs.R_m))
    return RingCertificate(n, ring, l_t, _logmod.demote(log_min), log_max, separates, ok and separates,
                           raw and separates, above, logr, cs.delta, _logmod.demote(log_inner),
                           _logmod.demote(log_outer))


def _ring_min_by_pushforward(s, p, cs, l_t):
    v0 = s.series(cs.Gamma_delta.points)
    v, rem = push_forward(p, v0, np.full(v0.shape, l_t, dtype=object))
    lo, _ = tail_bounds(p, v, rem)
    best = lo[0]
    for x in lo[1:]:
        if _gt(best, x):
            best = x
    return best


# ---------------------------------------------------------------------------
# web verdicts


class WebVerdict(str, enum.Enum):
    SPIDERS_WEB = "spiders_web_evidence"
    NOT_SPIDERS_WEB = "not_spiders_web_evidence"
    INCONCLUSIVE = "inconclusive"


@dataclass
class WebReport:
    case_label: str
    K: float
    R: float
    R_1: float
    certificates: list = field(default_factory=list)
    nesting_ok: list = field(default_factory=list)
    containment_ok: list = field(default_factory=list)
    verdict: WebVerdict = WebVerdict.INCONCLUSIVE
    nesting_from: int = 2
    notes: list = field(default_factory=list)
    falsify: dict | None = None

    def to_dict(self) -> dict:
        return {
            "case_label": self.case_label,
            "K": self.K,
            "R": self.R,
            "R_1": self.R_1,
            "certificates": [
                {
                    "n": c.n,
                    "l_t": c.l_t,
                    "delta": c.delta,
                    "log_r": c.log_r,
                    "log_min_on_ring": c.log_min_on_ring,
                    "log_max_inner": c.log_max_inner,
                    "separates": c.separates,
                    "verdict": c.verdict,
                    "verdict_raw": c.verdict_raw,
                    "above_R_m": c.above_R_m,
                }
                for c in self.certificates
            ],
            "nesting_ok": list(self.nesting_ok),
            "containment_ok": list(self.containment_ok),
            "nesting_from": self.nesting_from,
            "verdict": self.verdict.value,
            "notes": list(self.notes),
            **({"falsify": self.falsify} if self.falsify is not None else {}),
        }

    def to_json(self) -> str:
        return dumps_json(self.to_dict())


def dumps_json(obj, indent: int = 2) -> str:
    """JSON text with every real written to 17 significant digits."""

    def enc(x, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(x, bool) or x is None:
            return "true" if x is True else "false" if x is False else "null"
        if isinstance(x, enum.Enum):
            return enc(x.value, level)
        if isinstance(x, (int, np.integer)):
            return str(int(x))
        if isinstance(x, (float, np.floating)) or _logmod.is_big(x):
            v = x if _logmod.is_big(x) else float(x)
            finite = _logmod.ctx.isfinite(v) if _logmod.is_big(v) else math.isfinite(v)
            if not finite:
                return '"' + ("nan" if v != v else "inf" if v > 0 else "-inf") + '"'
            return _logmod.fmt17(v)
        if isinstance(x, str):
            return json.dumps(x)
        if isinstance(x, dict):
            if not x:
                return "{}"
            items = [f"{pad}{enc(str(k), level + 1)}: {enc(v, level + 1)}" for k, v in x.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(x, (list, tuple, np.ndarray)):
            if len(x) == 0:
                return "[]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in x) + "\n" + end + "]"
        raise TypeError(f"cannot serialise {type(x).__name__}")

    return enc(obj, 0) + "\n"


def build_web(s: LinearizerSeries, p: Polynomial, params: LevelParams, depth: int, *, case_label: str = "",
              candidates=None, K: float | None = None, nesting_from: int = 2) -> WebReport:
    """Rings ``Gamma^{r_n}`` for ``n = 1..depth`` with ``m = d``, plus containment and nesting checks.

    Nesting ``log m(L, Gamma^{r_n}) > d log r_{n+1}`` is recorded for every
    ``n`` but only required for ``n >= nesting_from``, the range where the
    fast-growth inequality ``M(L, r_n) > r_{n+1}^d`` holds (``n > 1``).
    """
    K = filled_julia_bound(p) if K is None else K
    report = WebReport(case_label, K, params.R, params.R_1, nesting_from=nesting_from)
    if depth <= 0:
        report.notes.append("depth 0: nothing to certify")
        return report
    if depth > params.depth:
        report.notes.append(f"depth capped at {params.depth}")
        depth = params.depth
    d = p.degree
    if candidates is None:
        candidates = curve_candidates(s, p, m=d)
    if not candidates:
        report.notes.append("no escape curve around the fixed point")
        return report
    for n in range(1, depth + 1):
        cert = None
        for cs in candidates:
            cert = ring_certificate(s, p, cs, logr=params.log_r[n], m=d, n=n)
            if cert.verdict:
                break
        report.certificates.append(cert)
        report.containment_ok.append(_gt(cert.log_min_abs, params.logM[n]))
        report.nesting_ok.append(_dominates(cert.log_min_on_ring, _scaled(params.log_r[n + 1], d))[1])
    required = [ok for n, ok in enumerate(report.nesting_ok, start=1) if n >= nesting_from]
    if all(c.verdict for c in report.certificates) and all(report.containment_ok) and all(required):
        report.verdict = WebVerdict.SPIDERS_WEB
    return report


@dataclass
class FalsifyReport:
    K: float
    radii: np.ndarray
    logm: np.ndarray
    argmin: np.ndarray
    points: np.ndarray
    passed: np.ndarray
    verdict: WebVerdict

    def to_dict(self) -> dict:
        return {"K": self.K, "radii": list(self.radii), "logm": list(self.logm),
                "argmin": list(self.argmin), "passed": [bool(x) for x in self.passed],
                "verdict": self.verdict.value}


def falsify_web(s: LinearizerSeries, p: Polynomial, K: float, radii, k: int = 1024,
                slack: float = 1e-6) -> FalsifyReport:
    """Check that every sampled circle ``|z| = r`` has a point with ``|L| <= K + slack``.

    The sampled minimum is an upper estimate of the true minimum, so a pass
    is reliable evidence.
    """
    radii = np.asarray(radii, dtype=float)
    logm, arg, pts, ok = [], [], [], []
    bound = math.log(K + slack)
    for r in radii:
        ex = min_modulus(s, p, math.log(r), k)
        v = _logmod.to_float(ex.est)
        logm.append(v)
        arg.append(ex.theta)
        pts.append(r * np.exp(1j * ex.theta))
        ok.append(v <= bound)
    ok = np.array(ok)
    verdict = WebVerdict.NOT_SPIDERS_WEB if ok.size and ok.all() else WebVerdict.INCONCLUSIVE
    return FalsifyReport(K, radii, np.array(logm), np.array(arg), np.array(pts), ok, verdict)


@dataclass
class Membership:
    max_level: int
    trace: list  # (lo, hi) of log|L^i(z)|, i = 0..
    base_ok: bool  # |z| >= R
    indeterminate: bool


def level_membership(s: LinearizerSeries, p: Polynomial, z, params: LevelParams, depth: int) -> Membership:
    """Largest ``j <= depth`` with ``log|L^i(z)| >= log M^i(L, R)`` for ``i = 1..j``.

    Once an iterate is only known through log-interval bounds its argument is
    lost; the next comparison still uses the bounds but iteration stops
    there.  A bound straddling the threshold stops the count as indeterminate.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if depth + 1 > len(params.logM):
        raise PreconditionError(f"M^{depth}(L,R) unavailable (tower depth {len(params.logM) - 1})")
    w = BigComplex.from_complex(complex(z)) if not isinstance(z, BigComplex) else z
    l0 = w.logmod
    trace = [(l0, l0)]
    base_ok = not _gt(math.log(params.R), l0)
    level = 0
    indeterminate = False
    for i in range(1, depth + 1):
        if w is None:
            indeterminate = True
            break
        out = eval_L(s, p, w)
        trace.append((out.lo, out.hi))
        thr = params.logM[i]
        if not _gt(thr, out.lo):
            level = i
        elif _gt(thr, out.hi):
            break
        else:
            indeterminate = True
            break
        w = out.value if out.mode == "exact" else None
    return Membership(level, trace, base_ok, indeterminate)
