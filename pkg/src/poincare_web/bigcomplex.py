"""Log-polar complex numbers for magnitudes far outside double range."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import _logmod

OVERFLOW_LOGMOD = 700.0


def _wrap(theta: float) -> float:
    # arg in (-pi, pi]
    t = math.remainder(theta, 2 * math.pi)
    return math.pi if t == -math.pi else t


@dataclass(frozen=True)
class BigComplex:
    """``exp(logmod) * exp(i arg)``; ``logmod`` may be an extended-range mpf.

    Only the argument modulo 2*pi is kept.
    """

    logmod: float
    arg: float = 0.0
    is_zero: bool = False

    @classmethod
    def from_complex(cls, z) -> "BigComplex":
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"non-finite input {z!r}")
        if z == 0:
            return cls(-math.inf, 0.0, True)
        return cls(math.log(math.hypot(z.real, z.imag)), _wrap(math.atan2(z.imag, z.real)))

    @classmethod
    def from_polar(cls, logmod, arg) -> "BigComplex":
        return cls(_logmod.demote(logmod), _wrap(float(arg)))

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        if self.logmod >= OVERFLOW_LOGMOD:
            raise OverflowError(f"logmod {_logmod.fmt17(self.logmod)} exceeds double range")
        return cmath.rect(math.exp(float(self.logmod)), self.arg)

    @property
    def representable(self) -> bool:
        return self.is_zero or self.logmod < OVERFLOW_LOGMOD

    def __mul__(self, other):
        if not isinstance(other, BigComplex):
            other = BigComplex.from_complex(other)
        if self.is_zero or other.is_zero:
            return BigComplex(-math.inf, 0.0, True)
        return BigComplex.from_polar(self.logmod + other.logmod, self.arg + other.arg)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, BigComplex):
            other = BigComplex.from_complex(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero BigComplex")
        if self.is_zero:
            return self
        return BigComplex.from_polar(self.logmod - other.logmod, self.arg - other.arg)

    def __pow__(self, n: int):
        if self.is_zero:
            return self
        return BigComplex.from_polar(self.logmod * n, self.arg * n)

    def __abs__(self):
        return 0.0 if self.is_zero else _logmod.exp(self.logmod)

    def __lt__(self, other):
        # order by modulus
        return self.logmod < other.logmod

    def __le__(self, other):
        return self.logmod <= other.logmod

    def __gt__(self, other):
        return self.logmod > other.logmod

    def __ge__(self, other):
        return self.logmod >= other.logmod
