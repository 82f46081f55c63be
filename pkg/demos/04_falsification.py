"""The other side: connected Julia components.

For z^2 (Julia set the unit circle) and z^2 - 2 (the segment [-2, 2]) the
component of the fixed point is not a point.  Every large circle then meets
the preimage of the filled Julia set, so min |L| on it stays bounded: by 1
for exp and by 2 for 2 cosh(sqrt z).
"""

import math

import numpy as np

from poincare_web import Polynomial, component_verdict, falsify_web, koenigs_series

for label, p, z0, K in [("z^2", Polynomial([0, 0, 1]), 1.0, 1.0), ("z^2-2", Polynomial([-2, 0, 1]), 2.0, 2.0)]:
    s = koenigs_series(p, z0)
    print(f"{label}: component {component_verdict(p, z0).status.value}")
    fr = falsify_web(s, p, K, [1, 5, 10, 50, 500])
    for r, lm, pt in zip(fr.radii, fr.logm, fr.points):
        print(f"    r = {r:5g}   min |L| = {math.exp(lm):.3e}   at z = {np.round(pt, 4)}")
    print(f"    bound {K}: {fr.verdict.value}\n")
