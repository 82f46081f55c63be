"""Extended-exponent real arithmetic for log-moduli of tower-sized numbers.

Log-moduli are ordinary floats while they fit; past that they are promoted to
``mpf`` values from a private mpmath context (113-bit mantissa, unbounded
exponent).  The global ``mpmath.mp`` precision is never touched.
"""

import math

import mpmath

ctx = mpmath.MPContext()
ctx.prec = 113

FLOAT_LIMIT = 1e300
EXACT_LIMIT = 2.0**52  # beyond this a float log-modulus cannot absorb O(1) terms


def is_big(x):
    return isinstance(x, ctx.mpf)


def big(x):
    """Promote a float/int/mpf to the private context."""
    return ctx.mpf(x)


def demote(x):
    """Return a float when ``x`` is small enough to keep unit-level precision, else an mpf."""
    if is_big(x):
        if ctx.isfinite(x) and abs(x) < EXACT_LIMIT:
            return float(x)
        return x
    x = float(x)
    if math.isfinite(x) and abs(x) >= EXACT_LIMIT:
        return ctx.mpf(x)
    return x


def to_float(x):
    """Best-effort float view (inf for values past double range)."""
    if is_big(x):
        if abs(x) >= FLOAT_LIMIT:
            return math.copysign(math.inf, float(ctx.sign(x)))
        return float(x)
    return float(x)


def exp(x):
    if is_big(x) or x > 700.0:
        return ctx.exp(big(x))
    return math.exp(x)


def log(x):
    if is_big(x):
        return demote(ctx.log(x))
    return math.log(x)


def pow_int(base, n):
    """``base ** n`` for a non-negative Python int ``n`` of any size."""
    if n * math.log(base) < 700.0:
        return float(base) ** n
    return ctx.mpf(base) ** n


def q_int(d, n):
    """Geometric sum ``d**(n-1) + ... + d + 1`` as an exact integer."""
    if n <= 0:
        return 0
    return (d**n - 1) // (d - 1)


def tower_step(d, n, k, logz):
    """``q_n(d) * k + d**n * logz`` as float, or mpf once it leaves double range."""
    if n * math.log(d) < 600.0:
        dn = float(d) ** n
        val = (dn - 1.0) / (d - 1) * k + dn * logz if not is_big(logz) else None
        if val is not None and math.isfinite(val) and abs(val) < EXACT_LIMIT:
            return val
    dn = ctx.mpf(d) ** n
    return demote((dn - 1) / (d - 1) * k + dn * big(logz))


def fmt17(x):
    """Decimal text with 17 significant digits."""
    if is_big(x):
        return ctx.nstr(x, 17, min_fixed=0, max_fixed=0, strip_zeros=False)
    return format(float(x), ".17g")
