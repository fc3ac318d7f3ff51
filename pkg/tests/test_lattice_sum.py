import cmath
import itertools
import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qselberg import closed_forms as cf
from qselberg.errors import (
    BalanceViolated,
    DimensionUnsupported,
    NotConverged,
    PoleOnContour,
)
from qselberg.lattice_sum import (
    Region,
    RegionKind,
    balance_qbeta,
    contour_integral,
    default_max_radius,
    jackson_sum,
    lattice_term,
    macdonald_constant_sum,
    term_ratio,
)
from qselberg.weights import WeightSpec, zeta, zeta_i

mp.mp.dps = 25


def mp_weight(spec, z):
    q = mp.mpf(spec.q)
    n, tau = spec.n, mp.mpc(spec.tau)
    t = mp.power(q, tau)
    z = [mp.mpc(c) for c in z]
    out = mp.mpc(1)
    for i in range(n):
        out *= mp.power(z[i], mp.mpc(spec.exponent) + (2 * tau - 1) * (n - 1 - i))
        for c in spec.numer:
            out *= mp.qp(q * z[i] / mp.mpc(c), q)
        for d in spec.denom:
            out /= mp.qp(mp.mpc(d) * z[i], q)
    for i, j in itertools.combinations(range(n), 2):
        w = z[j] / z[i]
        out *= mp.qp(q * w / t, q) / mp.qp(t * w, q) * (z[i] - z[j])
    return out


def mp_box_sum(spec, x, region, radius):
    q = mp.mpf(spec.q)
    total = mp.mpc(0)
    lo, hi = region.bounds(radius)
    for nu in itertools.product(range(lo, hi + 1), repeat=spec.n):
        if region.contains(nu):
            total += mp_weight(spec, [mp.mpc(x[k]) * q ** nu[k] for k in range(spec.n)])
    return complex(total * (1 - q) ** spec.n)


def rel(a, b):
    return abs(complex(a) - complex(b)) / abs(complex(b))


def test_region_membership():
    fan = Region.fan(3, 1)
    assert fan.kind is RegionKind.FAN
    assert fan.contains((0, 0, 1)) and not fan.contains((0, 2, 1)) and not fan.contains((-1, 0, 0))
    assert Region.full(2).contains((-5, 7))
    ordered = Region.ordered(2)
    assert ordered.contains((-3, -1)) and not ordered.contains((1, 0))
    with pytest.raises(ValueError):
        Region.fan(2, 3)
    assert default_max_radius(3) >= 40
    with pytest.raises(DimensionUnsupported):
        default_max_radius(9)


def test_one_variable_bilateral_matches_high_precision_sum():
    spec = WeightSpec.a_type(0.25, 1, 0.6, 2.0 * cmath.exp(0.4j), 0.8, tau=0.5)
    x = [0.6 * cmath.exp(0.2j)]
    res = jackson_sum(spec, x, Region.full(1))
    assert res.converged
    assert rel(res.value, mp_box_sum(spec, x, Region.full(1), 60)) < 1e-12


def test_two_variable_fan_sum_matches_high_precision_sum():
    spec = WeightSpec.a_type(0.2, 2, 1.1, 0.9 * cmath.exp(0.3j), 0.3, tau=0.6)
    res = jackson_sum(spec, zeta(spec), Region.fan(2))
    ref = mp_box_sum(spec, zeta(spec), Region.fan(2), 28)
    assert res.converged and rel(res.value, ref) < 1e-12


def test_frozen_bilateral_value():
    # 25-digit mpmath box sum at radius 60, frozen
    spec = WeightSpec.a_type(0.25, 1, 0.6, 2.0 * cmath.exp(0.4j), 0.8, tau=0.5)
    res = jackson_sum(spec, [0.6 * cmath.exp(0.2j)], Region.full(1))
    assert rel(res.value, FROZEN_1D) < 1e-12


FROZEN_1D = complex(-0.42738529188854024, 0.6393779008932224)


def test_one_variable_sum_is_ramanujan_product():
    spec = WeightSpec.a_type(0.3, 1, 0.6, 2.0, 0.8 * cmath.exp(-0.3j), tau=0.5)
    for x in (0.5, 0.8j, 1.3 * cmath.exp(2j)):
        res = jackson_sum(spec, [x], Region.full(1))
        assert res.converged and rel(res.value, cf.bilateral_A_rhs(spec, [x])) < 1e-12


def test_truncation_kills_terms_outside_fan():
    spec = WeightSpec.a_type(0.3, 2, 0.8, 1.2, 0.3, tau=0.45)
    full = jackson_sum(spec, zeta(spec), Region.full(2))
    fan = jackson_sum(spec, zeta(spec), Region.fan(2))
    assert rel(full.value, fan.value) < 1e-13
    assert lattice_term(spec, zeta(spec), (-1, 0)) == 0


def test_term_ratio_matches_terms():
    spec = WeightSpec.a_type(0.3, 2, 0.8, 1.2, 0.3, tau=0.45)
    x = [0.55 + 0.1j, 0.3 - 0.2j]
    nu = (2, 1)
    up = (3, 1)
    expected = lattice_term(spec, x, up) / lattice_term(spec, x, nu)
    assert rel(term_ratio(spec, x, nu, 0), expected) < 1e-12


def test_nonconvergence_is_reported_and_strict_raises():
    spec = WeightSpec.a_type(0.6, 2, 0.9, 1.1, 0.3, tau=0.7)
    res = jackson_sum(spec, zeta(spec), Region.fan(2), max_radius=4)
    assert not res.converged and res.radius_used == 4
    with pytest.raises(NotConverged):
        jackson_sum(spec, zeta(spec), Region.fan(2), max_radius=4, strict=True)


def test_sums_are_bit_reproducible():
    spec = WeightSpec.selberg(0.3, 2, 2.0, 1.8, 1.1, 0.9, tau=0.55)
    base = zeta_i(1, 0.6, 0.4j, spec.t, 2)
    a = jackson_sum(spec, base, Region.ordered(2, 1))
    b = jackson_sum(spec, base, Region.ordered(2, 1))
    assert a == b


@settings(max_examples=15, deadline=None)
@given(shift=st.integers(-3, 3), ph=st.floats(-1.0, 1.0))
def test_bilateral_sum_is_lattice_shift_invariant(shift, ph):
    spec = WeightSpec.a_type(0.3, 1, 0.6, 2.0, 0.8, tau=0.5)
    x = 0.7 * cmath.exp(1j * ph)
    ra = jackson_sum(spec, [x], Region.full(1))
    rb = jackson_sum(spec, [x * spec.q**shift], Region.full(1))
    assert ra.converged and rb.converged
    a, b = ra.value, rb.value
    assert abs(a - b) <= 1e-12 * abs(a)


def test_constant_term_sum_is_base_independent():
    spec = WeightSpec.a_type(0.3, 2, 0.8, 2.5 * cmath.exp(0.2j), 1.5, tau=0.4)
    assert abs(balance_qbeta(spec)) < 1
    vals = [macdonald_constant_sum(spec, x).value for x in ([0.5, 0.7j], [1.2, -0.4])]
    assert rel(vals[0], vals[1]) < 1e-11
    assert rel(vals[0], cf.macdonald_rhs(spec)) < 1e-11


def test_balance_and_contour_guards():
    spec = WeightSpec.a_type(0.3, 2, 0.8, 0.5, 0.4, tau=0.4)
    qb = balance_qbeta(spec)
    assert abs(spec.a1 * spec.b1 * spec.t**2 * 0.3**0.8 * qb - 0.3) < 1e-14
    with pytest.raises(BalanceViolated):
        balance_qbeta(spec, beta=0.123)
    with pytest.raises(PoleOnContour):
        contour_integral(WeightSpec.a_type(0.3, 1, 0.8, 1.0, 0.4, tau=0.4), 64)
    with pytest.raises(DimensionUnsupported):
        contour_integral(WeightSpec.a_type(0.3, 3, 0.8, 0.5, 0.4, tau=0.4), 16)


@pytest.mark.parametrize("n,nodes,tol", [(1, 2048, 1e-8), (2, 512, 1e-6)])
def test_contour_quadrature(n, nodes, tol):
    spec = WeightSpec.a_type(0.3, n, 0.6, 0.5 * cmath.exp(0.2j), 0.45, tau=0.35)
    assert rel(contour_integral(spec, nodes), cf.contour_rhs(spec)) < tol


def test_contour_converges_geometrically():
    spec = WeightSpec.a_type(0.3, 1, 0.6, 0.5, 0.45, tau=0.35)
    errs = [rel(contour_integral(spec, m), cf.contour_rhs(spec)) for m in (4, 8, 16)]
    assert errs[0] > errs[1] > errs[2] or errs[2] < 1e-14
    assert math.isfinite(errs[0])
