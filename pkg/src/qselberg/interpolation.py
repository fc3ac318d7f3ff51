"""Shifted symmetric polynomials, skew-symmetrization and the recursion factors.

Polynomial helpers take ``z`` as a sequence of coordinates; each coordinate
may be a scalar or a numpy array, so the same code evaluates at one point or
across a whole lattice slab (as a ``weight`` for :func:`jackson_sum`).
"""

from __future__ import annotations

import itertools
import math
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionUnsupported, IndexOutOfRange, PoleHit
from .qkernel import cpow
from .weights import WeightSpec, shift_quotient

MAX_PERMUTATION_N = 6


def _coords(z) -> list:
    return [c if isinstance(c, np.ndarray) else complex(c) for c in z]


def _check_r(r: int, n: int) -> None:
    if not 0 <= r <= n:
        raise IndexOutOfRange(f"degree index r={r} outside 0..{n}")


def E_poly(r: int, a, t, z):
    """``sum_{i_1<...<i_r} prod_k (z_{i_k} - a t^(i_k - k))`` (1-based indices)."""
    z = _coords(z)
    n = len(z)
    _check_r(r, n)
    a, t = complex(a), complex(t)
    total = 0j
    for idx in itertools.combinations(range(n), r):
        term = 1 + 0j
        for k, i in enumerate(idx):
            term = term * (z[i] - a * t ** (i - k))
        total = total + term
    return total


def e_shifted(r: int, a, t, z):
    """``E_r(a; t; z^-1)``."""
    return E_poly(r, a, t, [1 / c for c in _coords(z)])


def elem_sym(r: int, z):
    z = _coords(z)
    _check_r(r, len(z))
    total = 0j
    for idx in itertools.combinations(range(len(z)), r):
        term = 1 + 0j
        for i in idx:
            term = term * z[i]
        total = total + term
    return total


def vandermonde(z):
    """Difference product ``prod_{i<j} (z_i - z_j)`` over a coordinate list."""
    z = _coords(z)
    out = 1 + 0j
    for i, j in itertools.combinations(range(len(z)), 2):
        out = out * (z[i] - z[j])
    return out


def perm_sign(sigma: Sequence[int]) -> int:
    inv = sum(1 for i, j in itertools.combinations(range(len(sigma)), 2) if sigma[i] > sigma[j])
    return -1 if inv % 2 else 1


def alt_sum(f: Callable, z):
    """``sum_sigma sgn(sigma) f(z_sigma(1), ..., z_sigma(n))``."""
    z = _coords(z)
    n = len(z)
    if n > MAX_PERMUTATION_N:
        raise DimensionUnsupported(f"skew-symmetrization capped at n={MAX_PERMUTATION_N}")
    total = 0j
    for sigma in itertools.permutations(range(n)):
        total = total + perm_sign(sigma) * f([z[s] for s in sigma])
    return total


def nabla(i: int, phi: Callable, spec: WeightSpec, z):
    """``phi(z) - (T_i Phi / Phi)(z) * phi(T_i z)`` with ``T_i: z_i -> q z_i`` (0-based ``i``).

    Scalar points raise PoleHit on a singular quotient; array input returns
    inf/nan there and leaves masking to the caller.
    """
    z = _coords(z)
    if not 0 <= i < len(z):
        raise IndexOutOfRange(f"coordinate {i} outside 0..{len(z) - 1}")
    shifted = list(z)
    shifted[i] = spec.q * z[i]
    try:
        ratio = shift_quotient(spec, z, i)
    except ZeroDivisionError:
        raise PoleHit("shift quotient is singular at this point") from None
    if np.ndim(ratio) == 0 and not np.isfinite(ratio):
        raise PoleHit("shift quotient is singular at this point")
    return phi(z) - ratio * phi(shifted)


def phi_appendix(spec: WeightSpec, z):
    """``z1^-1 (z1 - b1)(z1 - b2) prod_{k>=2} (z1 - t z_k)``."""
    z = _coords(z)
    out = (z[0] - spec.b1) * (z[0] - spec.b2) / z[0]
    for zk in z[1:]:
        out = out * (z[0] - spec.t * zk)
    return out


def nabla_phi_closed(spec: WeightSpec, z):
    """Expanded form of ``nabla`` applied to :func:`phi_appendix` on the first coordinate."""
    z = _coords(z)
    n, t = len(z), spec.t
    u = 1 / z[0]
    second = u ** (-n) * (1 - u / spec.a1) * (1 - u / spec.a2)
    for zk in z[1:]:
        second = second * (1 - zk / (t * z[0]))
    return phi_appendix(spec, z) - second


def c_coeffs(i: int, spec: WeightSpec) -> tuple[complex, complex]:
    """``(c_{i-1}, c_i)`` of the skew-symmetrized identity."""
    n, t = spec.n, spec.t
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"i={i} outside 1..{n}")
    a1, a2, b1, b2 = spec.a1, spec.a2, spec.b1, spec.b2
    f = math.factorial(n - 1)
    c_prev = (f * (-1) ** (n - 1) / a1 * t ** (-(n - i))
              * (1 - a1 * b1 * t ** (n - i)) * (1 - a1 * b2 * t ** (n - i))
              * (1 - t ** (n - i + 1)) / (1 - t))
    c_cur = (f * (-1) ** n / (a1 * a2) * t ** (-(n - 1))
             * (1 - a1 * a2 * b1 * b2 * t ** (2 * n - i - 1)) * (1 - t**i) / (1 - t))
    return complex(c_prev), complex(c_cur)


def appendix_sides(i: int, spec: WeightSpec, z):
    """Both sides of the skew-symmetrized identity at ``z`` (vectorised)."""
    z = _coords(z)
    n = len(z)
    if n != spec.n:
        raise ValueError("point dimension does not match the spec")
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"i={i} outside 1..{n}")
    a, t = spec.a1, spec.t

    def inner(w):
        rest = w[1:]
        return phi_appendix(spec, w) * e_shifted(i - 1, a, t, rest) * vandermonde(rest)

    def lhs_term(w):
        return nabla(0, inner, spec, w)

    lhs = (-1) ** (n - 1) * alt_sum(lhs_term, z)
    c_prev, c_cur = c_coeffs(i, spec)
    rhs = (c_cur * e_shifted(i, a, t, z) + c_prev * e_shifted(i - 1, a, t, z)) * vandermonde(z)
    return lhs, rhs


def check_appendix_identity(i: int, spec: WeightSpec, z, ctx=None) -> float:
    if spec.n > 4:
        raise DimensionUnsupported("identity check supports n <= 4")
    lhs, rhs = appendix_sides(i, spec, z)
    return float(abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0))


class RecursionKind(str, Enum):
    AOMOTO_E = "aomoto_e"
    ALPHA_STEP_A = "alpha_step_A"
    A_SHIFT = "a_shift"
    B_SHIFT = "b_shift"
    TA_TOTAL = "Ta_total"
    TB_TOTAL = "Tb_total"


def recursion_factor(kind, spec: WeightSpec, i: int = 1, j: int = 1, ctx=None) -> complex:
    """Scalar multiplier of one recursion step.

    ``aomoto_e``:     sum of ``e_i`` over ``sum of e_{i-1}`` for the A-type weight.
    ``alpha_step_A``: ``I(alpha+1) / I(alpha)``.
    ``a_shift``, ``b_shift``: step ``i-1 -> i`` for ``e_i(a_j; t)`` and
    ``e_i(1/b_j; 1/t)`` under the dual Selberg weight at ``zeta_k(b1, b2)``.
    ``Ta_total``, ``Tb_total``: the full ``a_j -> q a_j`` and ``b_j -> q b_j`` factors.
    """
    kind = RecursionKind(kind)
    n, q, t = spec.n, spec.q, spec.t
    if kind in (RecursionKind.AOMOTO_E, RecursionKind.ALPHA_STEP_A):
        qa = cpow(q, spec.alpha)
        a1, b1 = spec.a1, spec.b1
        if kind is RecursionKind.AOMOTO_E:
            if not 1 <= i <= n:
                raise IndexOutOfRange(f"i={i} outside 1..{n}")
            num = a1 * t ** (i - 1) * (1 - t ** (n - i + 1)) * (1 - qa * t ** (n - i))
            den = (1 - t**i) * (1 - qa * a1 * b1 * t ** (2 * n - i - 1))
            return _ratio(num, den, kind)
        out = 1 + 0j
        for k in range(1, n + 1):
            out *= _ratio(a1 * t ** (k - 1) * (1 - qa * t ** (k - 1)),
                          1 - qa * a1 * b1 * t ** (n + k - 2), kind)
        return out
    if not spec.is_selberg:
        raise ValueError(f"{kind.value} needs a Selberg-type spec")
    if j not in (1, 2):
        raise IndexOutOfRange(f"parameter index j={j} must be 1 or 2")
    a1, a2, b1, b2 = spec.a1, spec.a2, spec.b1, spec.b2
    P = a1 * a2 * b1 * b2
    if kind is RecursionKind.A_SHIFT:
        if not 1 <= i <= n:
            raise IndexOutOfRange(f"i={i} outside 1..{n}")
        aj = a1 if j == 1 else a2
        num = -aj * (1 - t ** (n - i + 1)) * (1 - t ** (-(n - i)) / (aj * b1)) \
            * (1 - t ** (-(n - i)) / (aj * b2))
        den = (1 - t**i) * (1 - t ** (-(2 * n - i - 1)) / P)
        return _ratio(num, den, kind)
    if kind is RecursionKind.B_SHIFT:
        if not 1 <= i <= n:
            raise IndexOutOfRange(f"i={i} outside 1..{n}")
        bj = b1 if j == 1 else b2
        num = -(1 - t ** (-(n - i + 1))) * (1 - a1 * bj * t ** (n - i)) \
            * (1 - a2 * bj * t ** (n - i)) / bj
        den = (1 - t ** (-i)) * (1 - P * t ** (2 * n - i - 1))
        return _ratio(num, den, kind)
    out = 1 + 0j
    if kind is RecursionKind.TA_TOTAL:
        aj = a1 if j == 1 else a2
        out = (-aj) ** n
        for k in range(1, n + 1):
            out *= _ratio((1 - t ** (-(k - 1)) / (aj * b1)) * (1 - t ** (-(k - 1)) / (aj * b2)),
                          1 - t ** (-(n + k - 2)) / P, kind)
        return out
    bj = b1 if j == 1 else b2
    out = (-1 / bj) ** n
    for k in range(1, n + 1):
        out *= _ratio((1 - a1 * bj * t ** (k - 1)) * (1 - a2 * bj * t ** (k - 1)),
                      1 - P * t ** (n + k - 2), kind)
    return out


def _ratio(num, den, kind) -> complex:
    if abs(den) <= 1e-14 * max(1.0, abs(num)):
        raise PoleHit(f"{RecursionKind(kind).value}: vanishing denominator")
    return complex(num / den)


def regularized_shift_factor(kind, spec: WeightSpec, j: int = 1) -> complex:
    """Factor for the regularized dual sum under ``a_j -> q a_j`` or ``b_j -> q b_j``.

    ``kind`` is ``"a"`` or ``"b"``.
    """
    n, t = spec.n, spec.t
    a1, a2, b1, b2 = spec.a1, spec.a2, spec.b1, spec.b2
    P = a1 * a2 * b1 * b2
    out = 1 + 0j
    for k in range(1, n + 1):
        if kind == "a":
            c = a1 if j == 1 else a2
            num = (1 - t ** (-(k - 1)) / (c * b1)) * (1 - t ** (-(k - 1)) / (c * b2))
        elif kind == "b":
            c = b1 if j == 1 else b2
            num = (1 - t ** (-(k - 1)) / (a1 * c)) * (1 - t ** (-(k - 1)) / (a2 * c))
        else:
            raise ValueError("kind must be 'a' or 'b'")
        out *= _ratio(num, 1 - t ** (-(n + k - 2)) / P, kind="Ta_total")
    return out


def graded_point(j: int, a, t, n: int, scale: float) -> list[complex]:
    """``(scale^j, ..., scale, a, a t, ..., a t^(n-j-1))``."""
    if not 0 <= j <= n:
        raise IndexOutOfRange(f"j={j} outside 0..{n}")
    head = [complex(scale ** (j - k)) for k in range(j)]
    return head + [complex(a) * complex(t) ** k for k in range(n - j)]


def vanishing_asymptotic_check(i: int, j: int, spec: WeightSpec, scale: float = 1e4,
                               ctx=None) -> float:
    """Residual of the graded-limit vanishing property of ``E_i`` at ``zeta_j``."""
    n = spec.n
    if n > 4:
        raise DimensionUnsupported("vanishing check supports n <= 4")
    _check_r(i, n)
    a, t = spec.a1, spec.t
    z = graded_point(j, a, t, n, scale)
    norm = 1 + 0j
    for k in range(j):
        norm *= z[k] ** (n - k)
    ratio = E_poly(i, a, t, z) * vandermonde(z) / norm
    target = vandermonde([a * t**k for k in range(n - i)]) if i == j else 0j
    return float(abs(ratio - target) / max(1.0, abs(target)))


__all__ = [
    "E_poly", "e_shifted", "elem_sym", "vandermonde", "alt_sum", "perm_sign", "nabla",
    "phi_appendix", "nabla_phi_closed", "c_coeffs", "appendix_sides",
    "check_appendix_identity", "RecursionKind", "recursion_factor",
    "regularized_shift_factor", "graded_point", "vanishing_asymptotic_check",
]
