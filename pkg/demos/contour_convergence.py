"""Trapezoid rule on the torus: error against node count.

The integrand is analytic on an annulus around the unit circle, so the error
falls geometrically until it reaches rounding level.
"""

from qselberg import WeightSpec, contour_integral
from qselberg.closed_forms import contour_rhs

for n, counts in ((1, (8, 16, 32, 64, 2048)), (2, (8, 16, 32, 64, 512))):
    spec = WeightSpec.a_type(0.3, n, 0.6, 0.5, 0.45, tau=0.35)
    exact = contour_rhs(spec)
    for m in counts:
        err = abs(contour_integral(spec, m) - exact) / abs(exact)
        print(f"n={n} nodes={m:5d}  rel err={err:.2e}")
