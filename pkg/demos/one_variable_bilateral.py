"""One-variable bilateral sum against its theta-ratio product.

For n = 1 the bilateral A-type sum is a bilateral basic hypergeometric series,
so this prints the lattice value, the product value and how many lattice
terms the shell summation needed.
"""

import cmath

from qselberg import Region, WeightSpec, jackson_sum
from qselberg.closed_forms import bilateral_A_rhs

spec = WeightSpec.a_type(0.3, 1, 0.6, 2.0, 0.8 * cmath.exp(-0.3j), tau=0.5)
for x in (0.5, 0.8j, 1.3 * cmath.exp(2j)):
    res = jackson_sum(spec, [x], Region.full(1))
    rhs = bilateral_A_rhs(spec, [x])
    err = abs(res.value - rhs) / abs(rhs)
    print(f"x={x:.3f}  sum={res.value:.12g}  product={rhs:.12g}  "
          f"rel err={err:.1e}  terms={res.terms}  converged={res.converged}")
