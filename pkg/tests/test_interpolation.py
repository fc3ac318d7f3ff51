import cmath
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qselberg.errors import DimensionUnsupported, IndexOutOfRange, PoleHit
from qselberg.interpolation import (
    E_poly,
    alt_sum,
    check_appendix_identity,
    e_shifted,
    elem_sym,
    nabla,
    nabla_phi_closed,
    perm_sign,
    phi_appendix,
    recursion_factor,
    vandermonde,
)
from qselberg.weights import WeightSpec

coord = st.complex_numbers(min_magnitude=0.2, max_magnitude=3.0, allow_nan=False,
                           allow_infinity=False)
SPEC = WeightSpec.selberg(0.35, 3, 1.3, 0.8 * cmath.exp(0.4j), 0.6, 1.7, tau=0.45, dual=True)


@settings(max_examples=50, deadline=None)
@given(z=st.lists(coord, min_size=1, max_size=4))
def test_elementary_symmetric_match_polynomial_coefficients(z):
    coeffs = np.poly(z)  # prod (x - z_k) = sum (-1)^r e_r x^(n-r)
    for r in range(len(z) + 1):
        assert abs(elem_sym(r, z) - (-1) ** r * coeffs[r]) <= 1e-10 * max(1, abs(coeffs[r]))


def test_E_poly_reduces_to_elementary_when_a_is_zero():
    z = [0.3 + 0.1j, -1.2, 2.0j]
    for r in range(4):
        assert abs(E_poly(r, 0, 0.7, z) - elem_sym(r, z)) < 1e-13


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_E_poly_vanishes_at_graded_points(n):
    a, t = 0.9 * cmath.exp(0.3j), 0.6 * cmath.exp(-0.1j)
    rng = np.random.default_rng(n)
    for j in range(n):
        z = list(rng.normal(size=j) + 1j * rng.normal(size=j)) + [a * t**k for k in range(n - j)]
        for i in range(j + 1, n + 1):
            assert abs(E_poly(i, a, t, z)) < 1e-13


def test_E_poly_is_symmetric_vectorised():
    a, t = 1.1, 0.5
    z = [np.array([0.2, 0.7]), np.array([1.5, -0.3]), np.array([0.9j, 2.0])]
    v = E_poly(2, a, t, z)
    w = E_poly(2, a, t, [z[2], z[0], z[1]])
    assert v.shape == (2,) and np.allclose(v, w, rtol=1e-13, atol=0)


def test_e_shifted_is_E_at_inverse():
    z = [0.5, 2.0 + 1j]
    assert abs(e_shifted(1, 0.7, 0.4, z) - E_poly(1, 0.7, 0.4, [2.0, 1 / (2.0 + 1j)])) < 1e-14


def test_index_errors():
    with pytest.raises(IndexOutOfRange):
        elem_sym(3, [1.0, 2.0])
    with pytest.raises(IndexOutOfRange):
        nabla(2, lambda w: w[0], SPEC, [1.0, 2.0])
    with pytest.raises(DimensionUnsupported):
        alt_sum(lambda w: 1.0, [1.0] * 7)


@settings(max_examples=30, deadline=None)
@given(perm=st.permutations(range(4)))
def test_perm_sign_matches_determinant(perm):
    m = np.eye(4)[list(perm)]
    assert perm_sign(perm) == round(np.linalg.det(m))


@settings(max_examples=30, deadline=None)
@given(z=st.lists(coord, min_size=3, max_size=3))
def test_alternating_sum_of_monomial_is_vandermonde(z):
    # sum_sigma sgn z_sigma(1)^2 z_sigma(2) = det[z_i^(n-j)] = vandermonde
    v = alt_sum(lambda w: w[0] ** 2 * w[1], z)
    assert abs(v - vandermonde(z)) <= 1e-10 * max(1, abs(vandermonde(z)))


@settings(max_examples=40, deadline=None)
@given(z=st.lists(coord, min_size=3, max_size=3))
def test_nabla_closed_form(z):
    try:
        direct = nabla(0, lambda w: phi_appendix(SPEC, w), SPEC, z)
    except PoleHit:
        return
    closed = nabla_phi_closed(SPEC, z)
    assert abs(direct - closed) <= 1e-9 * max(1, abs(closed))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_skew_identity_residual(n):
    spec = WeightSpec.selberg(0.3, n, 1.4, 0.7j, 0.5, 1.9, tau=0.6, dual=True)
    rng = np.random.default_rng(10 + n)
    for i in range(1, n + 1):
        for _ in range(10):
            z = list(rng.normal(size=n) + 1j * rng.normal(size=n))
            assert check_appendix_identity(i, spec, z) < 1e-11


def test_nabla_scalar_pole_raises():
    # shift quotient of the dual weight is singular where 1 - q z / b1 vanishes
    with pytest.raises(PoleHit):
        nabla(0, lambda w: 1.0, SPEC, [SPEC.b1 / SPEC.q, 0.4, 0.9])


def test_recursion_factor_rejects_unknown_kind():
    with pytest.raises(ValueError):
        recursion_factor("no_such_kind", SPEC)


def test_vandermonde_sign_convention():
    z = [1.0, 2.0, 5.0]
    expected = np.prod([z[i] - z[j] for i, j in itertools.combinations(range(3), 2)])
    assert vandermonde(z) == expected
