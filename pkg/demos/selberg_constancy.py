"""Two-variable Selberg combination divided by its theta product.

The combination of sums at the split points zeta_i(x1, x2) equals a constant
times a theta product in (x1, x2). Dividing out the theta product should give
the same number for every pair; the spread printed at the end measures that.
"""

import cmath

import numpy as np

from qselberg import closed_forms as cf
from qselberg import Region, WeightSpec, jackson_sum
from qselberg.weights import zeta_i

spec = WeightSpec.selberg(0.3, 2, 2.2, 1.9 * cmath.exp(0.2j), 1.3, 1.1, tau=0.7)
rng = np.random.default_rng(1)
quotients = []
for _ in range(4):
    x1, x2 = (complex(rng.uniform(0.3, 0.9)) * cmath.exp(1j * rng.uniform(-0.6, 0.6))
              for _ in range(2))
    total = 0j
    for i in range(spec.n + 1):
        base = zeta_i(i, x1, x2, spec.t, spec.n)
        total += cf.selberg_lhs_coeff(i, x1, x2, spec) * jackson_sum(
            spec, base, Region.ordered(spec.n, i)).value
    quotients.append(total / cf.selberg_theta_product(spec, x1, x2))
    print(f"x1={x1:.3f} x2={x2:.3f}  quotient={quotients[-1]:.14g}")
print(f"constant from the product formula: {cf.selberg_C0(spec):.14g}")
spread = max(abs(a - b) for a in quotients for b in quotients) / abs(quotients[0])
print(f"relative spread of the quotient: {spread:.1e}")
