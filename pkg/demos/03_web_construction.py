"""Rings of small |L| around the origin for z^2 - 5.

The critical point of z^2 - 5 escapes, so the Julia set is a Cantor set and
the component of the fixed point is the point itself.  A small escaping curve
around the fixed point, pulled back through the series and scaled by powers
of the multiplier, gives closed curves where |L| is large compared with the
maximum modulus inside.  Nested, these curves are the skeleton of a web.
"""

import math
from pathlib import Path

from poincare_web import Polynomial, build_web, choose_R, component_verdict, koenigs_series, render_levels
from poincare_web import _logmod

p = Polynomial([-5, 0, 1])
z0 = (1 + math.sqrt(21)) / 2
s = koenigs_series(p, z0)
print("component:", component_verdict(p, z0).status.value)

params = choose_R(s, p, depth=4)
print(f"R = {params.R:.4f} (search {params.R_L:g}, coefficient bound {params.R_1:.4f})")
print("log r_n:", ", ".join(f"{float(x):.4g}" for x in params.log_r))

rep = build_web(s, p, params, 3, case_label="z^2-5")
print("\n n  l_t   log min on ring   log max inside   ring ok  contains   nests")
for c, cont, nest in zip(rep.certificates, rep.containment_ok, rep.nesting_ok):
    print(f" {c.n}  {c.l_t:3d}   {_logmod.fmt17(c.log_min_on_ring)[:12]:>15}   "
          f"{_logmod.fmt17(c.log_max_inner)[:12]:>14}   {str(c.verdict):7}  {str(cont):8}   {nest}")
print(f"nesting is required from n = {rep.nesting_from}; verdict: {rep.verdict.value}")

out = Path("out")
out.mkdir(exist_ok=True)
rings = [c.ring for c in rep.certificates if c.verdict and c.ring.points.size]
img = render_levels(s, p, params, 0j, 1500.0, (240, 240), 3, rings)
img.save(out / "levels_z2m5.ppm")
print(f"\nlevel image with ring overlay written to {out / 'levels_z2m5.ppm'}")
