import cmath
import math

import mpmath as mp
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qselberg import closed_forms as cf
from qselberg.errors import TauIsPositiveInteger
from qselberg.lattice_sum import Region, jackson_sum
from qselberg.qkernel import QContext, theta
from qselberg.weights import WeightSpec, zeta

mp.mp.dps = 30


def rel(a, b):
    return abs(complex(a) - complex(b)) / abs(complex(b))


def mp_q_beta_sum(q, alpha, a1, b1, terms=200):
    """(1-q) sum_{k>=0} z^alpha (q z/a1)_inf / (b1 z)_inf at z = a1 q^k."""
    q, a1, b1, alpha = mp.mpf(q), mp.mpc(a1), mp.mpc(b1), mp.mpc(alpha)
    total = mp.mpc(0)
    for k in range(terms):
        z = a1 * q**k
        total += mp.power(z, alpha) * mp.qp(q * z / a1, q) / mp.qp(b1 * z, q)
    return complex((1 - q) * total)


def test_one_variable_truncated_product_against_high_precision():
    spec = WeightSpec.a_type(0.3, 1, 0.7 + 0.2j, 0.9 * cmath.exp(0.3j), 0.5, tau=0.4)
    ref = mp_q_beta_sum(0.3, spec.alpha, spec.a1, spec.b1)
    assert rel(cf.aomoto_truncated_rhs(spec), ref) < 1e-13


def test_frozen_truncated_products():
    # one-variable value frozen from the 30-digit series above; two-variable
    # value frozen from a converged double-precision fan sum cross-checked at 1e-14
    s1 = WeightSpec.a_type(0.3, 1, 0.7 + 0.2j, 0.9 * cmath.exp(0.3j), 0.5, tau=0.4)
    assert rel(cf.aomoto_truncated_rhs(s1), FROZEN_A1) < 1e-13
    s2 = WeightSpec.a_type(0.35, 2, 0.9, 1.2 * cmath.exp(-0.2j), 0.4, tau=0.55)
    assert rel(cf.aomoto_truncated_rhs(s2), FROZEN_A2) < 1e-12


FROZEN_A1 = complex(1.1431263124348807, 0.27817371564321564)
FROZEN_A2 = complex(0.377446542543796, -0.4446740437298873)


@settings(max_examples=25, deadline=None)
@given(q=st.floats(0.15, 0.5), alpha=st.floats(0.2, 2.0), tau=st.floats(0.2, 1.8),
       r=st.floats(0.5, 1.5), ph=st.floats(-0.5, 0.5), b=st.floats(0.1, 0.6))
def test_truncated_sum_equals_product(q, alpha, tau, r, ph, b):
    # the fan sum decays like q^alpha per shell; keep it within the default radius
    assume(q**alpha <= 0.4)
    spec = WeightSpec.a_type(q, 2, alpha, r * cmath.exp(1j * ph), b, tau=tau)
    res = jackson_sum(spec, zeta(spec), Region.fan(2))
    assert res.converged
    assert rel(res.value, cf.aomoto_truncated_rhs(spec)) < 1e-10


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gamma_form_agrees_with_product(n):
    q, alpha, beta, tau = 0.4, 0.8, 1.3, 0.6
    spec = WeightSpec.a_type(q, n, alpha, 1.0, q**beta, tau=tau)
    assert rel(cf.aomoto_gamma_rhs(q, n, alpha, beta, tau), cf.aomoto_truncated_rhs(spec)) < 1e-12


def test_equal_argument_constant_relation():
    # generic tau: at integer tau both theta(t) and theta(t^j) vanish
    spec = WeightSpec.a_type(0.3, 3, 0.8, 1.1, 0.4, tau=0.45)
    ctx = QContext(0.3)
    ratio = math.prod(theta(spec.t, ctx) / theta(spec.t**j, ctx) for j in range(1, 4))
    assert rel(cf.c1(spec), cf.c0(spec) * ratio) < 1e-12


def test_theta_ratio_refuses_integer_tau():
    spec = WeightSpec.a_type(0.3, 2, 0.8, 1.1, 0.4, tau=1.0)
    with pytest.raises(TauIsPositiveInteger):
        cf.bilateral_A_rhs(spec, [0.5, 0.7])
    assert cf.is_positive_integer(2.0 + 1e-14j) and not cf.is_positive_integer(0.0)
    with pytest.raises(ValueError):
        cf.integer_tau(WeightSpec.a_type(0.3, 2, 0.8, 1.1, 0.4, tau=0.5))


@pytest.mark.parametrize("tau", [1, 2])
def test_classical_variables_agree(tau):
    q, alpha, beta, x1, x2 = 0.3, 0.7, 1.1, 0.8 * cmath.exp(0.2j), 1.3
    spec = WeightSpec.selberg(q, 2, x1, x2, q**alpha / x1, q**beta / x2, tau=tau)
    assert rel(cf.askey_evans_classical(q, 2, tau, alpha, beta, x1, x2),
               cf.askey_evans_rhs(spec)) < 1e-12


def test_selberg_constant_prefactor_flag():
    spec = WeightSpec.selberg(0.3, 2, 2.0, 1.5, 1.2, 0.8, tau=0.6)
    bare = cf.selberg_C1(spec, with_prefactor=False)
    assert rel(cf.selberg_C1(spec), bare * (1 - 0.3) ** 2) < 1e-14


@pytest.mark.parametrize("dual", [False, True])
def test_asymptotic_ratio_tends_to_one(dual):
    spec = WeightSpec.a_type(0.3, 2, 0.6, 0.8, 0.5, tau=0.45)
    far = abs(cf.asymptotic_ratio(spec, 40, dual=dual) - 1)
    near = abs(cf.asymptotic_ratio(spec, 3, dual=dual) - 1)
    assert far < 1e-14 and near > far
