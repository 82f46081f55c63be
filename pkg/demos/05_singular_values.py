"""Critical points of a linearizer and where they go.

L' vanishes exactly where the functional equation pulls back a critical
point of p, so the critical values of L are forward images of critical
values of p.  For 2 cosh(sqrt z) the zeros of L' are -k^2 pi^2 with values +-2.
"""

import math

from poincare_web import Polynomial, koenigs_series, singular_sets, verify_Cv_characterization

for label, p, z0, annulus in [
    ("z^2 at 1", Polynomial([0, 0, 1]), 1.0, (0.5, 30.0)),
    ("z^2-2 at 2", Polynomial([-2, 0, 1]), 2.0, (1.0, 100.0)),
    ("z^2-5", Polynomial([-5, 0, 1]), (1 + math.sqrt(21)) / 2, (0.5, 40.0)),
]:
    s = koenigs_series(p, z0)
    ss = singular_sets(p, z0, depth=3)
    rep = verify_Cv_characterization(s, p, 3, annulus)
    print(f"{label}: omitted values {ss.Ov_L}, expected critical values {[complex(round(w.real, 6), round(w.imag, 6)) for w in ss.Cv_L][:4]}")
    print(f"    {rep.count} zeros of L' in {annulus}, max distance of images to the expected set {rep.max_deviation:.1e}")
    for z, w in zip(rep.zeros, rep.images):
        print(f"    z = {z.real:+.8f}{z.imag:+.8f}j   L(z) = {w.real:+.8f}{w.imag:+.8f}j")
