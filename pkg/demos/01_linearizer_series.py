"""Build linearizers and compare them with closed forms.

For p(z) = z^2 at the fixed point 1 the linearizer is exp; for z^2 - 2 at 2
it is 2 cosh(sqrt z).  Both are rebuilt from the coefficient recursion and
then evaluated far outside the disk where the series converges.
"""

import math

import numpy as np

from poincare_web import _logmod
from poincare_web import BigComplex, Polynomial, eval_L, koenigs_series

square = Polynomial([0, 0, 1])
s = koenigs_series(square, 1.0)
print(f"z^2 at 1: multiplier {s.lam.real:g}, {s.N} coefficients, validated radius {s.r0:.3g}")
k = np.arange(8)
print("  first coefficients  ", np.round(s.coeffs[:8].real, 12))
print("  1/k!                ", np.round([1 / math.factorial(int(j)) for j in k], 12))

# pulled back by the multiplier, evaluated, pushed forward with p
for z in (10, 100, 1e6):
    out = eval_L(s, square, z)
    if out.mode == "exact":
        print(f"  L({z:g}) = {out.value.to_complex().real:.10g}   (exp gives {math.exp(z):.10g})")
    else:
        print(f"  log|L({z:g})| in [{float(out.lo):.12g}, {float(out.hi):.12g}]   (exactly {z:g})")

# arguments past double range go in as log-modulus/argument pairs
huge = BigComplex.from_polar(800.0, 0.0)
out = eval_L(s, square, huge)
print(f"  log|L(e^800)| in [{_logmod.fmt17(out.lo)}, {_logmod.fmt17(out.hi)}]")
print(f"  e^800             = {_logmod.fmt17(_logmod.exp(800.0))}")

cheb = Polynomial([-2, 0, 1])
c = koenigs_series(cheb, 2.0)
print(f"\nz^2 - 2 at 2: multiplier {c.lam.real:g}, c_2 = {c.coeffs[2].real:.15f} (1/12 = {1 / 12:.15f})")
for z in (-math.pi**2, -4 * math.pi**2, 50.0):
    v = eval_L(c, cheb, z).value.to_complex()
    ref = 2 * np.cosh(np.sqrt(complex(z)))
    print(f"  L({z:.6g}) = {v.real:+.10f}   2cosh(sqrt z) = {ref.real:+.10f}")
