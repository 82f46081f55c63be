"""Maximum and minimum modulus on circles, and the order of growth.

The order of a linearizer is log d / log|multiplier|.  A least-squares fit
of log log M(L, r) against log r over three decades recovers it.
"""

import math

import numpy as np

from poincare_web import (GrowthBounds, Polynomial, koenigs_series, modulus_profile, order_estimate, theoretical_order,
                          verify_regularity)

cases = [
    ("z^2 at 1", Polynomial([0, 0, 1]), 1.0, 4.0),
    ("z^2-2 at 2", Polynomial([-2, 0, 1]), 2.0, 16.0),
    ("z^2-5 at (1+sqrt 21)/2", Polynomial([-5, 0, 1]), (1 + math.sqrt(21)) / 2, 25.0),
]
radii = np.geomspace(10, 1e4, 10)

for label, p, z0, r_reg in cases:
    s = koenigs_series(p, z0)
    prof = modulus_profile(s, p, radii, k=512)
    print(f"{label}: fitted order {order_estimate(prof):.4f}, predicted {theoretical_order(p, s.lam):.4f}")
    for r, hi, lo in zip(prof.radii[::3], prof.logM[::3], prof.logm[::3]):
        print(f"    r = {r:9.1f}   log M = {hi:12.5g}   log m = {lo:12.5g}")
    # log M(L, |lam|^n r) / log M(L, r) grows like d^n up to product corrections
    rows = verify_regularity(s, p, GrowthBounds.for_polynomial(p), r_reg, n_max=6)
    print("    n   lower        ratio        upper     ok")
    for row in rows:
        print(f"    {row.n}   {row.lower:<11.5g}  {row.ratio:<11.5g}  {row.upper:<9.5g} {row.passed}")
    print()
