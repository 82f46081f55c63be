"""Poincaré functions (linearizers) of a polynomial at a repelling fixed point.

A linearizer ``L`` solves ``p(L(z)) = L(lam * z)`` with ``L(0) = z0``.  Near
the origin it is a Taylor series computed from the functional equation; far
away it is evaluated by pulling the argument back into the validated disk
and pushing the value forward with ``p``::

    L(z) = p^n(L(z / lam^n))

Once the pushed value leaves double range only its log-modulus is tracked,
bracketed by the growth bounds of ``p`` near infinity.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import _logmod
from .bigcomplex import BigComplex
from .dynamics import FixedPointInfo, FixedPointClass
from .errors import ConvergenceError, NotRepellingError, OutOfRangeError
from .polynomial import AffineMap, GrowthBounds, Polynomial, log_bounds_from_logmod

THETA_LOGMOD = 600.0  # exact -> log_interval switch
_SAFE_LOGMOD = 700.0
DEFAULT_N = 64
DEFAULT_TOL = 1e-9


def _csum(terms: np.ndarray) -> complex:
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


@dataclass(frozen=True, eq=False)
class LinearizerSeries:
    z0: complex
    lam: complex
    coeffs: np.ndarray
    normalization: complex
    r0: float = 0.0
    residual_tol: float = DEFAULT_TOL

    @property
    def N(self) -> int:
        return self.coeffs.size - 1

    def series(self, w):
        """Truncated Taylor sum at ``w`` (scalar or array)."""
        w = np.asarray(w, dtype=complex)
        acc = np.full(w.shape, self.coeffs[-1], dtype=complex)
        for c in self.coeffs[-2::-1]:
            acc = acc * w + c
        return acc if acc.ndim else complex(acc)

    def series_derivative(self, w):
        w = np.asarray(w, dtype=complex)
        dc = self.coeffs[1:] * np.arange(1, self.coeffs.size)
        acc = np.full(w.shape, dc[-1], dtype=complex)
        for c in dc[-2::-1]:
            acc = acc * w + c
        return acc if acc.ndim else complex(acc)


def koenigs_series(p: Polynomial, fp, N: int = DEFAULT_N, normalization: complex = 1.0,
                   *, tol: float = DEFAULT_TOL, validate: bool = True) -> LinearizerSeries:
    """Taylor coefficients of the linearizer of ``p`` at the fixed point ``fp``.

    With ``p(z0 + u) - z0 = sum_k b_k u^k`` and ``phi = L - z0``, matching
    powers of ``z`` in ``sum_k b_k phi(z)^k = phi(lam z)`` gives

        c_n (lam^n - lam) = sum_{k>=2} b_k [z^n] phi^k,

    whose right side only involves ``c_1 .. c_{n-1}``.  Convolutions use
    compensated summation.  ``fp`` is a :class:`FixedPointInfo` or a bare
    fixed point.
    """
    if not isinstance(fp, FixedPointInfo):
        from .dynamics import classify

        z0 = complex(fp)
        lam = complex(p.taylor_at(z0)[1])
        fp = FixedPointInfo(z0, lam, classify(lam))
    if fp.cls is not FixedPointClass.REPELLING:
        raise NotRepellingError(f"fixed point {fp.z0} is {fp.cls.value} (|lambda| = {abs(fp.multiplier):.6g})")
    if fp.multiplicity > 1:
        raise NotRepellingError("repeated fixed points have no linearizer")
    if N < 2:
        raise ValueError("N must be >= 2")
    normalization = complex(normalization)
    if normalization == 0:
        raise ValueError("normalization must be nonzero")
    z0 = fp.z0
    b = p.taylor_at(z0)
    lam = complex(b[1])
    d = p.degree
    c = np.zeros(N + 1, dtype=complex)
    c[0], c[1] = z0, normalization
    # powers[k][n] = [z^n] phi^k for k = 1..d
    powers = np.zeros((d + 1, N + 1), dtype=complex)
    powers[1, 1] = normalization
    lam_n = lam
    last_good = N
    for n in range(2, N + 1):
        lam_n = lam_n * lam
        for k in range(2, min(d, n) + 1):
            j = np.arange(1, n - k + 2)
            powers[k, n] = _csum(c[j] * powers[k - 1, n - j])
        rhs = _csum(b[2:min(d, n) + 1] * powers[2:min(d, n) + 1, n])
        denom = lam_n - lam
        if not np.isfinite(denom):
            cn = 0j
        else:
            cn = rhs / denom
        if not (math.isfinite(cn.real) and math.isfinite(cn.imag)):
            last_good = n - 1
            warnings.warn(f"coefficient overflow at n={n}; truncating series to N={last_good}")
            break
        c[n] = cn
        powers[1, n] = cn
    c = c[: last_good + 1].copy()
    c.setflags(write=False)
    s = LinearizerSeries(complex(z0), lam, c, normalization, 0.0, tol)
    if validate:
        s = replace(s, r0=validated_radius(s, p, tol))
    return s


def residual(s: LinearizerSeries, p: Polynomial, z):
    """Relative functional-equation residual ``|p(L(z)) - L(lam z)| / (1 + |L(lam z)|)``."""
    rhs = s.series(s.lam * np.asarray(z))
    return np.abs(p(s.series(z)) - rhs) / (1.0 + np.abs(rhs))


def validated_radius(s: LinearizerSeries, p: Polynomial, tol: float = DEFAULT_TOL,
                     ladder=None) -> float:
    """Largest rung ``r0`` of a geometric ladder where the series is trusted.

    A rung passes when the largest ``|c_n| r^n`` over the last quarter of the
    coefficients is below ``tol`` and the residual is below ``tol`` at 64
    points on each of the circles ``r/2``, ``3r/4`` and ``r``.  The ladder is
    climbed from below and stops at the first failure.
    """
    if ladder is None:
        ladder = 2.0 ** (np.arange(-192, 385) / 32.0)
    N = s.N
    tail_idx = np.arange(max(1, N - max(1, (N + 1) // 4) + 1), N + 1)
    tail_abs = np.abs(s.coeffs[tail_idx])
    theta = 2 * np.pi * (np.arange(64) + 0.5) / 64
    unit = np.exp(1j * theta)
    best = None
    for r in ladder:
        with np.errstate(over="ignore"):
            tail = float(np.max(tail_abs * r ** tail_idx.astype(float)))
        if not tail < tol:
            break
        pts = np.concatenate([f * r * unit for f in (0.5, 0.75, 1.0)])
        res = residual(s, p, pts)
        if not np.all(res < tol):
            break
        best = float(r)
    if best is None:
        raise ConvergenceError(
            f"no radius passes the truncation/residual tests at tol={tol:g}; increase N (now {N})",
            {"N": N, "tol": tol},
        )
    return best


def rescale_series(s: LinearizerSeries, c: complex) -> LinearizerSeries:
    """Series of ``z -> L(c z)``, again a linearizer of the same polynomial."""
    c = complex(c)
    if c == 0:
        raise ValueError("rescaling constant must be nonzero")
    coeffs = s.coeffs * c ** np.arange(s.coeffs.size)
    coeffs.setflags(write=False)
    return replace(s, coeffs=coeffs, normalization=complex(coeffs[1]), r0=s.r0 / abs(c))


def conjugate_linearizer(s1: LinearizerSeries, phi: AffineMap) -> LinearizerSeries:
    """Series of ``phi^{-1} o L1 o (phi - b)``, i.e. ``z -> (L1(a z) - b) / a``.

    It linearizes ``phi^{-1} o p1 o phi`` at ``phi^{-1}(z1)`` with the same
    normalization as ``L1``.
    """
    a, b = phi.a, phi.b
    coeffs = s1.coeffs * a ** np.arange(s1.coeffs.size) / a
    coeffs[0] = (s1.coeffs[0] - b) / a
    coeffs.setflags(write=False)
    return replace(s1, z0=complex(coeffs[0]), coeffs=coeffs, normalization=complex(coeffs[1]), r0=s1.r0 / abs(a))


# ---------------------------------------------------------------------------
# evaluation far from the origin


@dataclass(frozen=True)
class EvalOutcome:
    """Value of ``L`` at a point.

    In ``log_interval`` mode ``[lo, hi]`` brackets ``log|L(z)|`` and
    ``value.logmod`` is the midpoint; ``value.arg`` is then only the argument
    reached before the switch and carries no information.
    """

    value: BigComplex
    mode: str
    lo: float
    hi: float
    pullback: int = 0


def pullback_depth(s: LinearizerSeries, logmod) -> int:
    """``max(0, ceil(log(|z|/r0) / log|lam|))`` for ``log|z| = logmod``."""
    loglam = math.log(abs(s.lam))
    wide = _logmod.is_big(logmod) or abs(logmod) >= _logmod.EXACT_LIMIT
    x = (_logmod.big(logmod) - math.log(s.r0)) / _logmod.big(loglam) if wide \
        else (logmod - math.log(s.r0)) / loglam
    if _logmod.is_big(x):
        return max(0, int(_logmod.ctx.ceil(x)))
    return max(0, math.ceil(x - 1e-12))


def _switch_needed(logv, d, log_ad):
    return (logv >= THETA_LOGMOD) | (d * logv + log_ad > _SAFE_LOGMOD)


def push_forward(p: Polynomial, v, steps, cap: int = 4096):
    """Apply ``p`` to ``v`` elementwise ``steps`` times while values stay in double range.

    Returns ``(v, remaining)``: ``v`` after the exact steps actually taken and
    the number of steps still owed (non-zero where the value grew past the
    switch threshold or the ``cap`` was hit).
    """
    v = np.array(v, dtype=complex, ndmin=1)
    remaining = np.broadcast_to(np.asarray(steps, dtype=object), v.shape).copy()
    d = p.degree
    log_ad = math.log(abs(p.leading))
    budget = cap
    while budget > 0:
        rem_pos = np.array([r > 0 for r in remaining], dtype=bool)
        if not rem_pos.any():
            break
        with np.errstate(divide="ignore"):
            logv = np.log(np.abs(v))
        active = rem_pos & ~_switch_needed(logv, d, log_ad)
        if not active.any():
            break
        v[active] = p(v[active])
        remaining[active] -= 1
        budget -= 1
    return v, remaining


def tail_bounds(p: Polynomial, v, remaining):
    """Bounds on ``log|p^m(v)|`` for values that have left the exact range."""
    lo = np.empty(v.shape, dtype=object)
    hi = np.empty(v.shape, dtype=object)
    for i, (vi, m) in enumerate(zip(v, remaining)):
        a = abs(vi)
        logv = math.log(a) if a > 0 else -math.inf
        if m == 0:
            lo[i] = hi[i] = logv
            continue
        if a == 0:
            lo[i], hi[i] = -math.inf, math.inf
            continue
        gb = GrowthBounds.beyond(p, a * (1 - 1e-12))
        if (1 - gb.eps) * abs(p.leading) * gb.R_eps ** (p.degree - 1) <= 1 or gb.eps >= 0.5:
            # bounded orbit that ran out of iteration budget: unknown
            lo[i], hi[i] = -math.inf, math.inf
            continue
        lo[i], hi[i] = log_bounds_from_logmod(p, logv, int(m), gb)
    return lo, hi


def _as_float_array(x):
    try:
        return np.array([_logmod.to_float(v) for v in x], dtype=float)
    except TypeError:
        return np.asarray(x, dtype=float)


def eval_L_array(s: LinearizerSeries, p: Polynomial, z, pullback=None):
    """Vectorised evaluation for ordinary complex arguments.

    Returns ``(values, lo, hi, exact)``: ``values`` holds ``L(z)`` where
    ``exact`` is true (nan elsewhere); ``lo``/``hi`` bracket ``log|L(z)|`` as
    floats (``inf`` past double range).
    """
    z = np.array(z, dtype=complex, ndmin=1)
    if not np.all(np.isfinite(z)):
        raise ValueError("non-finite argument")
    loglam = math.log(abs(s.lam))
    with np.errstate(divide="ignore"):
        if pullback is None:
            n = np.ceil((np.log(np.abs(z)) - math.log(s.r0)) / loglam - 1e-12)
            n = np.where(np.isfinite(n), np.maximum(n, 0), 0).astype(np.int64)
        else:
            n = np.full(z.shape, int(pullback), dtype=np.int64)
    w = np.where(n > 0, z * np.exp(-n * np.log(complex(s.lam))), z)
    v0 = s.series(w)
    v, rem = push_forward(p, v0, n.astype(object))
    exact = np.array([r == 0 for r in rem], dtype=bool)
    with np.errstate(divide="ignore"):
        logabs = np.log(np.abs(v))
    exact &= logabs < THETA_LOGMOD
    lo = logabs.copy()
    hi = logabs.copy()
    if not exact.all():
        idx = np.flatnonzero(~exact)
        tlo, thi = tail_bounds(p, v[idx], rem[idx])
        lo[idx] = _as_float_array(tlo)
        hi[idx] = _as_float_array(thi)
    values = np.where(exact, v, np.nan)
    return values, lo, hi, exact


def eval_L(s: LinearizerSeries, p: Polynomial, z, pullback=None) -> EvalOutcome:
    """Evaluate ``L(z)`` for a complex ``z`` or a :class:`BigComplex`.

    The pullback depth is ``max(0, ceil(log(|z|/r0)/log|lam|))`` unless
    forced with ``pullback``.
    """
    if isinstance(z, BigComplex):
        if z.is_zero:
            z = 0j
        elif z.representable and not _logmod.is_big(z.logmod) and z.logmod < THETA_LOGMOD:
            z = z.to_complex()
    if not isinstance(z, BigComplex):
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"non-finite argument {z!r}")
        logz = math.log(abs(z)) if z != 0 else -math.inf
        n = pullback_depth(s, logz) if (pullback is None and z != 0) else (pullback or 0)
        w = z * complex(s.lam) ** (-n) if n else z
    else:
        n = pullback_depth(s, z.logmod) if pullback is None else int(pullback)
        loglam = math.log(abs(s.lam))
        argl = math.atan2(s.lam.imag, s.lam.real)
        if _logmod.is_big(z.logmod) or n > 10**6:
            lm = _logmod.big(z.logmod) - n * _logmod.big(loglam)
            ar = _logmod.big(z.arg) - n * _logmod.big(argl)
            ar = float(ar - 2 * _logmod.ctx.pi * _logmod.ctx.nint(ar / (2 * _logmod.ctx.pi)))
            w = BigComplex.from_polar(float(lm), ar).to_complex()
        else:
            w = BigComplex.from_polar(z.logmod - n * loglam, z.arg - n * argl).to_complex()
    v, rem = push_forward(p, np.array([s.series(w)]), np.array([n], dtype=object))
    vv, m = complex(v[0]), rem[0]
    logv = math.log(abs(vv)) if vv != 0 else -math.inf
    if m == 0 and logv < THETA_LOGMOD:
        bc = BigComplex.from_complex(vv)
        return EvalOutcome(bc, "exact", bc.logmod, bc.logmod, n)
    lo, hi = tail_bounds(p, v, rem)
    lo, hi = _logmod.demote(lo[0]), _logmod.demote(hi[0])
    if m == 0:
        mid = logv
    elif _logmod.is_big(lo) or _logmod.is_big(hi):
        mid = _logmod.demote((_logmod.big(lo) + _logmod.big(hi)) / 2)
    else:
        mid = 0.5 * (lo + hi)
    arg = math.atan2(vv.imag, vv.real)
    return EvalOutcome(BigComplex.from_polar(mid, arg), "log_interval", lo, hi, n)


def eval_L_derivative(s: LinearizerSeries, p: Polynomial, z):
    """``(L(z), L'(z))`` in exact arithmetic via the chain rule on the pushforward."""
    z = np.array(z, dtype=complex, ndmin=1)
    loglam = math.log(abs(s.lam))
    with np.errstate(divide="ignore"):
        n = np.ceil((np.log(np.abs(z)) - math.log(s.r0)) / loglam - 1e-12)
    n = np.where(np.isfinite(n), np.maximum(n, 0), 0).astype(np.int64)
    scale = np.exp(-n * np.log(complex(s.lam)))
    w = z * scale
    v = s.series(w)
    dv = s.series_derivative(w) * scale
    dp = p.derivative()
    for step in range(int(n.max()) if n.size else 0):
        act = n > step
        pv = p(v[act])
        acc = np.full(act.sum(), dp[-1], dtype=complex)
        for c in dp[-2::-1]:
            acc = acc * v[act] + c
        dv[act] = acc * dv[act]
        v[act] = pv
    return v, dv


def invert_series(s: LinearizerSeries, targets, *, start=None, tol=1e-13, max_iter=60):
    """Solve ``L(w) = target`` inside the validated disk by Newton's method.

    Targets are processed in order, each starting from the previous solution
    (continuation along a curve).  Raises :class:`OutOfRangeError` if an
    iterate leaves the disk ``|w| <= r0``.
    """
    targets = np.asarray(targets, dtype=complex)
    out = np.empty_like(targets)
    w = (targets[0] - s.z0) / s.normalization if start is None else complex(start)
    for i, t in enumerate(targets):
        for _ in range(max_iter):
            f = s.series(w) - t
            df = s.series_derivative(w)
            if df == 0:
                raise ConvergenceError("zero derivative during inversion", {"w": w})
            step = f / df
            w = w - step
            if abs(w) > s.r0:
                raise OutOfRangeError(f"Newton inversion left the validated disk (|w| = {abs(w):.4g} > r0 = {s.r0:.4g})")
            if abs(step) <= tol * (1 + abs(w)):
                break
        else:
            raise ConvergenceError("Newton inversion did not converge", {"target": t, "w": w})
        out[i] = w
    return out


# ---------------------------------------------------------------------------
# series cache file

HEADER = "LINEARIZER-SERIES v1"


def _hexc(z: complex) -> str:
    return f"{float(z.real).hex()} {float(z.imag).hex()}"


def _unhexc(text: str) -> complex:
    re_, im_ = text.split()
    return complex(float.fromhex(re_), float.fromhex(im_))


def dumps_series(s: LinearizerSeries) -> str:
    """Text form with hexadecimal float literals (bit-exact round trip)."""
    lines = [
        HEADER,
        f"z0 {_hexc(s.z0)}",
        f"lambda {_hexc(s.lam)}",
        f"normalization {_hexc(s.normalization)}",
        f"N {s.N}",
        f"r0 {float(s.r0).hex()}",
        f"residual_tol {float(s.residual_tol).hex()}",
    ]
    lines += [_hexc(c) for c in s.coeffs]
    return "\n".join(lines) + "\n"


def loads_series(text: str) -> LinearizerSeries:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != HEADER:
        raise ValueError(f"not a linearizer series file (expected header {HEADER!r})")
    fields = {}
    for ln in lines[1:7]:
        key, _, rest = ln.partition(" ")
        fields[key] = rest
    N = int(fields["N"])
    coeffs = np.array([_unhexc(ln) for ln in lines[7:]], dtype=complex)
    if coeffs.size != N + 1:
        raise ValueError(f"expected {N + 1} coefficients, found {coeffs.size}")
    coeffs.setflags(write=False)
    return LinearizerSeries(
        _unhexc(fields["z0"]),
        _unhexc(fields["lambda"]),
        coeffs,
        _unhexc(fields["normalization"]),
        float.fromhex(fields["r0"]),
        float.fromhex(fields["residual_tol"]),
    )


def save_series(s: LinearizerSeries, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps_series(s))


def load_series(path) -> LinearizerSeries:
    with open(path, encoding="ascii") as fh:
        return loads_series(fh.read())
