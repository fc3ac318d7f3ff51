"""Product formulas, constants and connection coefficients.

Each function evaluates one right-hand side by accumulating logarithms of its
factors (see :class:`qselberg.qkernel.LogProduct`) and exponentiating once.
Parameters come from a :class:`WeightSpec`; the family field is ignored, only
the numeric parameters are read.
"""

from __future__ import annotations

import math
from enum import Enum

from .errors import TauIsPositiveInteger
from .qkernel import LogProduct, cpow, qgamma
from .weights import WeightSpec, as_point


def is_positive_integer(tau, tol: float = 1e-12) -> bool:
    tau = complex(tau)
    r = round(tau.real)
    return r >= 1 and abs(tau - r) <= tol


def integer_tau(spec: WeightSpec) -> int:
    if not is_positive_integer(spec.tau):
        raise ValueError(f"tau={spec.tau} is not a positive integer")
    return int(round(spec.tau.real))


def _start(spec: WeightSpec, with_prefactor: bool = True) -> LogProduct:
    p = LogProduct(spec.ctx)
    if with_prefactor:
        p.log += spec.n * math.log1p(-spec.q)
    return p


# A-type ---------------------------------------------------------------------


def aomoto_truncated_rhs(spec: WeightSpec, ctx=None) -> complex:
    """Product value of the A-type sum over the fan at ``zeta``."""
    return _aomoto(spec).value("truncated A-type product")


def _aomoto(spec: WeightSpec) -> LogProduct:
    n, q, t, al = spec.n, spec.q, spec.t, spec.alpha
    a1, b1 = spec.a1, spec.b1
    qa = cpow(q, al)
    p = _start(spec)
    for j in range(1, n + 1):
        p.cpow(a1 * t ** (j - 1), al + 2 * (n - j) * spec.tau)
        p.poch(q).poch(t).poch(qa * a1 * b1 * t ** (n + j - 2))
        p.poch(t**j, -1).poch(qa * t ** (j - 1), -1).poch(a1 * b1 * t ** (j - 1), -1)
    return p


def aomoto_gamma_rhs(q, n: int, alpha, beta, tau) -> complex:
    """q-gamma form of the truncated A-type value with ``a1 = 1``, ``b1 = q^beta``."""
    from .qkernel import QContext

    ctx = QContext(q)
    alpha, beta, tau = complex(alpha), complex(beta), complex(tau)
    pre = cpow(q, alpha * tau * math.comb(n, 2) + 2 * tau**2 * math.comb(n, 3))
    out = pre
    for i in range(1, n + 1):
        out *= qgamma(alpha + (i - 1) * tau, ctx) * qgamma(beta + (i - 1) * tau, ctx)
        out *= qgamma(i * tau, ctx)
        out /= qgamma(alpha + beta + (n + i - 2) * tau, ctx) * qgamma(tau, ctx)
    return out


def c0(spec: WeightSpec, ctx=None) -> complex:
    n, q, t = spec.n, spec.q, spec.t
    a1, b1 = spec.a1, spec.b1
    qa = cpow(q, spec.alpha)
    p = _start(spec)
    for j in range(1, n + 1):
        p.poch(q).poch(q * t ** (-j)).poch(q / (a1 * b1) * t ** (-(j - 1)))
        p.poch(q / t, -1).poch(qa * t ** (j - 1), -1)
        p.poch(q / qa / (a1 * b1) * t ** (-(n + j - 2)), -1)
    return p.value("c0")


def bilateral_A_rhs(spec: WeightSpec, x, ctx=None) -> complex:
    """Theta-ratio value of the bilateral A-type sum at ``x``."""
    if is_positive_integer(spec.tau):
        raise TauIsPositiveInteger("the bilateral theta-ratio formula needs tau not in Z+")
    x = as_point(x, spec.n)
    n, q, t = spec.n, spec.q, spec.t
    qa = cpow(q, spec.alpha)
    p = LogProduct(spec.ctx)
    for i in range(n):
        p.cpow(x[i], spec.alpha + 2 * (n - 1 - i) * spec.tau)
        p.theta(qa * spec.b1 * t ** (n - 1) * x[i])
        p.theta(spec.b1 * x[i], -1)
    for i in range(n):
        for j in range(i + 1, n):
            p.theta(x[j] / x[i]).theta(t * x[j] / x[i], -1)
    return c0(spec) * p.value("bilateral A-type theta ratio")


def regularized_A_rhs(spec: WeightSpec, x) -> complex:
    """``c0 prod theta(q^alpha b1 t^(n-1) x_i)``: the regularized A-type value."""
    x = as_point(x, spec.n)
    qa = cpow(spec.q, spec.alpha)
    p = LogProduct(spec.ctx)
    for xi in x:
        p.theta(qa * spec.b1 * spec.t ** (spec.n - 1) * xi)
    return c0(spec) * p.value()


def c1(spec: WeightSpec, ctx=None) -> complex:
    """``c0 * prod_j theta(t)/theta(t^j)``, the equal-argument constant."""
    n, q, t = spec.n, spec.q, spec.t
    a1, b1 = spec.a1, spec.b1
    qa = cpow(q, spec.alpha)
    p = _start(spec)
    for j in range(1, n + 1):
        p.poch(q).poch(t).poch(q / (a1 * b1) * t ** (-(j - 1)))
        p.poch(t**j, -1).poch(qa * t ** (j - 1), -1)
        p.poch(q / qa / (a1 * b1) * t ** (-(n + j - 2)), -1)
    return p.value("c1")


def equal_argument_rhs(spec: WeightSpec, x, ctx=None) -> complex:
    """Value of the full-lattice A-type sum at ``(x, ..., x)`` divided by ``n!``."""
    integer_tau(spec)
    n, q, t = spec.n, spec.q, spec.t
    x = complex(x)
    qa = cpow(q, spec.alpha)
    p = LogProduct(spec.ctx)
    for i in range(1, n + 1):
        p.cpow(x * t ** (i - 1), spec.alpha + 2 * (n - i) * spec.tau)
        p.theta(qa * spec.b1 * t ** (n + i - 2) * x)
        p.theta(spec.b1 * t ** (i - 1) * x, -1)
    return c1(spec) * p.value("equal-argument theta ratio")


def ahke_rhs(spec: WeightSpec) -> complex:
    """Equal-argument value at ``x = a1`` (integer ``tau``)."""
    return equal_argument_rhs(spec, spec.a1)


def aomoto_asymptotic(spec: WeightSpec, N: int) -> complex:
    """Leading term of the truncated A-type sum after ``alpha -> alpha + N``."""
    return _aomoto_asym(spec, N).value()


def _aomoto_asym(spec: WeightSpec, N: int) -> LogProduct:
    n, q, t = spec.n, spec.q, spec.t
    p = _start(spec)
    for i in range(1, n + 1):
        p.cpow(spec.a1 * t ** (i - 1), spec.alpha + 2 * (n - i) * spec.tau + N)
        p.poch(q).poch(t)
        p.poch(spec.a1 * spec.b1 * t ** (i - 1), -1).poch(t**i, -1)
    return p


def dual_A_truncated_rhs(spec: WeightSpec, ctx=None) -> complex:
    """Product value of the dual A-type sum over the fan at ``zeta_bar``."""
    return _dual_A(spec).value("truncated dual A-type product")


def _dual_A(spec: WeightSpec) -> LogProduct:
    n, q, t = spec.n, spec.q, spec.t
    a1, b1 = spec.a1, spec.b1
    q1a = q / cpow(q, spec.alpha)
    p = _start(spec)
    for i in range(1, n + 1):
        p.cpow(b1 * t ** (i - 1),
               1 - spec.alpha1 - spec.beta1 - 2 * (i - 1) * spec.tau - spec.alpha)
        p.poch(q).poch(t).poch(q1a * t ** (-(i - 1)))
        p.poch(t**i, -1).poch(q1a / (a1 * b1) * t ** (-(n + i - 2)), -1)
        p.poch(a1 * b1 * t ** (i - 1), -1)
    return p


def dual_A_asymptotic(spec: WeightSpec, N: int) -> complex:
    """Leading term of the truncated dual sum after ``alpha -> alpha - N``."""
    return _dual_A_asym(spec, N).value()


def _dual_A_asym(spec: WeightSpec, N: int) -> LogProduct:
    n, q, t = spec.n, spec.q, spec.t
    p = _start(spec)
    for i in range(1, n + 1):
        p.cpow(spec.b1 * t ** (i - 1),
               1 - spec.alpha1 - spec.beta1 - 2 * (i - 1) * spec.tau - spec.alpha + N)
        p.poch(q).poch(t)
        p.poch(spec.a1 * spec.b1 * t ** (i - 1), -1).poch(t**i, -1)
    return p


def asymptotic_ratio(spec: WeightSpec, N: int, dual: bool = False) -> complex:
    """Truncated product over its leading term, formed in log space (no overflow).

    ``dual=False`` shifts ``alpha -> alpha + N`` in the A-type product,
    ``dual=True`` shifts ``alpha -> alpha - N`` in the dual one. Tends to 1.
    """
    if dual:
        p = _dual_A(spec.shifted("alpha", -N)).mul(_dual_A_asym(spec, N), -1)
    else:
        p = _aomoto(spec.shifted("alpha", N)).mul(_aomoto_asym(spec, N), -1)
    return p.value("asymptotic ratio")


def macdonald_rhs(spec: WeightSpec, qbeta=None) -> complex:
    """Value of the balanced constant-term sum."""
    from .lattice_sum import balance_qbeta

    n, q, t = spec.n, spec.q, spec.t
    qb = balance_qbeta(spec) if qbeta is None else complex(qbeta)
    qa = cpow(q, spec.alpha)
    p = _start(spec)
    for j in range(1, n + 1):
        p.poch(q).poch(q * t ** (-j)).poch(q / (spec.a1 * spec.b1) * t ** (-(j - 1)))
        p.poch(q / t, -1).poch(qa * t ** (j - 1), -1).poch(qb * t ** (j - 1), -1)
    return p.value("constant-term product")


def contour_rhs(spec: WeightSpec, qbeta=None) -> complex:
    """Product value of the torus integral."""
    from .lattice_sum import balance_qbeta

    n, q, t = spec.n, spec.q, spec.t
    qb = balance_qbeta(spec) if qbeta is None else complex(qbeta)
    qa = cpow(q, spec.alpha)
    p = LogProduct(spec.ctx)
    for i in range(1, n + 1):
        p.poch(t).poch(q / qb * t ** (-(i - 1))).poch(q / qa * t ** (-(i - 1)))
        p.poch(q, -1).poch(t**i, -1).poch(spec.a1 * spec.b1 * t ** (i - 1), -1)
    return p.value("torus product")


# Selberg type -----------------------------------------------------------------


def selberg_C0(spec: WeightSpec, ctx=None) -> complex:
    n, q, t = spec.n, spec.q, spec.t
    A, B = (spec.a1, spec.a2), (spec.b1, spec.b2)
    P = spec.a1 * spec.a2 * spec.b1 * spec.b2
    p = _start(spec)
    for k in range(1, n + 1):
        p.poch(q).poch(t)
        for a in A:
            for b in B:
                p.poch(q / (a * b) * t ** (-(k - 1)))
        p.poch(t**k, -1).poch(q / P * t ** (-(n + k - 2)), -1)
    return p.value("C0")


def selberg_lhs_coeff(i: int, x1, x2, spec: WeightSpec) -> complex:
    """Multiplier of the sum at ``zeta_i(x1, x2)`` in the main bilateral identity."""
    n, t, tau = spec.n, spec.t, spec.tau
    x1, x2 = complex(x1), complex(x2)
    p = LogProduct(spec.ctx)
    for j in range(1, i + 1):
        p.cpow(x1 * t ** (j - 1), -1 - 2 * (n - j) * tau)
        p.theta(x2 / x1 * t ** (-j + 1), -1)
    for k in range(1, n - i + 1):
        p.cpow(x2 * t ** (k - 1), -1 - 2 * (n - i - k) * tau)
        p.theta(x1 / x2 * t ** (i - k + 1), -1)
    return p.value(f"main identity coefficient {i}")


def selberg_theta_product(spec: WeightSpec, x1, x2) -> complex:
    """``prod_k theta(x1 x2 b1 b2 t^(n+k-2)) / prod_{i,j} theta(x_i b_j t^(k-1))``."""
    n, t = spec.n, spec.t
    x1, x2 = complex(x1), complex(x2)
    X = x1 * x2 * spec.b1 * spec.b2
    p = LogProduct(spec.ctx)
    for k in range(1, n + 1):
        p.theta(X * t ** (n + k - 2))
        for x in (x1, x2):
            for b in (spec.b1, spec.b2):
                p.theta(x * b * t ** (k - 1), -1)
    return p.value("Selberg theta product")


def selberg_main_rhs(spec: WeightSpec, x1, x2, ctx=None) -> complex:
    return selberg_C0(spec) * selberg_theta_product(spec, x1, x2)


def selberg_integer_tau_rhs(spec: WeightSpec, x1, x2) -> complex:
    """Right side of the alternating identity at integer ``tau``."""
    tau = integer_tau(spec)
    n, q, t = spec.n, spec.q, spec.t
    x1, x2 = complex(x1), complex(x2)
    X = x1 * x2 * spec.b1 * spec.b2
    p = LogProduct(spec.ctx)
    nn = math.comb(n, 2)
    p.factor(-1, tau * nn)
    p.log -= math.comb(tau, 2) * nn * math.log(q)
    for j in range(1, n + 1):
        p.factor(x1 * x2 * t ** (j - 1), (n - j) * tau)
        p.factor(x2).theta(x1 / x2).theta(X * t ** (n + j - 2))
        for x in (x1, x2):
            for b in (spec.b1, spec.b2):
                p.theta(x * b * t ** (j - 1), -1)
    return selberg_C0(spec) * p.value()


def tvs_rhs(spec: WeightSpec, ctx=None) -> complex:
    """Product value of the truncated Selberg combination at ``(a1, a2)``."""
    n, q, t = spec.n, spec.q, spec.t
    P = spec.a1 * spec.a2 * spec.b1 * spec.b2
    p = _start(spec)
    for k in range(1, n + 1):
        p.poch(q).poch(t).poch(P * t ** (n + k - 2)).poch(t**k, -1)
        for a in (spec.a1, spec.a2):
            for b in (spec.b1, spec.b2):
                p.poch(a * b * t ** (k - 1), -1)
    return p.value("truncated Selberg product")


def askey_evans_rhs(spec: WeightSpec, ctx=None) -> complex:
    """Product value at integer ``tau`` of the iterated integral from a1 to a2."""
    tau = integer_tau(spec)
    n, q, t = spec.n, spec.q, spec.t
    a1, a2 = spec.a1, spec.a2
    P = a1 * a2 * spec.b1 * spec.b2
    p = _start(spec)
    for j in range(1, n + 1):
        p.poch(q).poch(t).poch(P * t ** (n + j - 2))
        p.factor(a1 * a2 * t ** (j - 1), (n - j) * tau)
        p.factor(a2).theta(a1 / a2)
        p.poch(t**j, -1)
        for a in (a1, a2):
            for b in (spec.b1, spec.b2):
                p.poch(a * b * t ** (j - 1), -1)
    return p.value("Askey-Evans product")


def askey_evans_classical(q, n: int, tau: int, alpha, beta, x1, x2) -> complex:
    """Same value in the variables of the classical statement.

    Equals :func:`askey_evans_rhs` with ``a1 = x1``, ``a2 = x2``,
    ``b1 = q^alpha / x1``, ``b2 = q^beta / x2``.
    """
    from .qkernel import QContext

    ctx = QContext(q)
    p = LogProduct(ctx)
    qa, qb, t = cpow(q, alpha), cpow(q, beta), q**tau
    x1, x2 = complex(x1), complex(x2)
    for j in range(1, n + 1):
        p.log += math.log1p(-q)
        p.poch(q).poch(qa * qb * t ** (n + j - 2)).poch(t)
        p.poch(qa * t ** (j - 1), -1).poch(qb * t ** (j - 1), -1).poch(t**j, -1)
        p.factor(x1 * x2 * t ** (j - 1), (n - j) * tau).factor(x2).theta(x1 / x2)
        p.poch(x2 * qa * t ** (j - 1) / x1, -1).poch(x1 * qb * t ** (j - 1) / x2, -1)
    return p.value()


def selberg_C1(spec: WeightSpec, ctx=None, *, with_prefactor: bool = True) -> complex:
    """The regularized constant.

    ``with_prefactor`` includes ``(1-q)^n``, which the regularized sums carry;
    ``False`` gives the bare product.
    """
    n, q, t = spec.n, spec.q, spec.t
    P = spec.a1 * spec.a2 * spec.b1 * spec.b2
    p = _start(spec, with_prefactor)
    for k in range(1, n + 1):
        p.poch(q).poch(q * t ** (-k))
        for a in (spec.a1, spec.a2):
            for b in (spec.b1, spec.b2):
                p.poch(q / (a * b) * t ** (-(k - 1)))
        p.poch(q / t, -1).poch(q / P * t ** (-(n + k - 2)), -1)
    return p.value("C1")


def h_at_zeta_i(i: int, x1, x2, spec: WeightSpec) -> complex:
    """Closed form of the Selberg regularizer at ``zeta_i(x1, x2)``.

    The second block uses ``theta(b1 x2 t^(k-1)) theta(b2 x2 t^(k-1))``.
    """
    n, t, tau = spec.n, spec.t, spec.tau
    x1, x2 = complex(x1), complex(x2)
    b1, b2 = spec.b1, spec.b2
    p = LogProduct(spec.ctx)
    for j in range(1, i + 1):
        x = x1 * t ** (j - 1)
        p.cpow(x, 1 + 2 * (n - j) * tau)
        p.theta(b1 * x, -1).theta(b2 * x, -1)
        p.theta(x2 / x1 * t ** (-(j - 1))).theta(x2 / x1 * t ** (n - i - j + 1), -1)
        p.theta(t).theta(t**j, -1)
    for k in range(1, n - i + 1):
        x = x2 * t ** (k - 1)
        p.cpow(x, 1 + 2 * (n - i - k) * tau)
        p.theta(b1 * x, -1).theta(b2 * x, -1)
        p.theta(t).theta(t**k, -1)
    return p.value("h at zeta_i")


def selberg_dual_asymptotic(spec: WeightSpec, N: int) -> complex:
    """Leading term of the truncated dual Selberg sum at ``zeta_bar`` along
    ``b1 -> b1 q^(2N), b2 -> b2 q^-N, a_j -> a_j q^-N``."""
    n, q, t = spec.n, spec.q, spec.t
    g = spec.exponent if spec.is_dual else spec.dual().exponent
    p = _start(spec)
    for i in range(1, n + 1):
        p.cpow(spec.b1 * t ** (i - 1) * q ** (2 * N), g - 2 * (i - 1) * spec.tau + 2 * (n - 1) * spec.tau + N)
        p.poch(q).poch(t).poch(t**i, -1)
    return p.value()


# connection coefficients -----------------------------------------------------


class ConnectionKind(str, Enum):
    A_TO_TRUNC = "A_to_trunc"
    A_TO_DUAL = "A_to_dual"
    J_TO_I = "J_to_I"


def connection_coeff(kind, spec: WeightSpec, x=None, ctx=None) -> complex:
    """Theta/Pochhammer coefficient of a connection formula.

    ``A_to_trunc``: ``I(x) = I(zeta) h(x)/h(zeta) * coeff``.
    ``A_to_dual``:  ``I(x) = Ibar(zeta_bar) h(x)/hbar(zeta_bar) * coeff``.
    ``J_to_I``:     ``Jbar(zeta_bar) = Ibar(zeta_bar) * coeff`` where the dual
    A-type sum uses ``alpha = alpha2 + beta2`` (``x`` unused).
    """
    kind = ConnectionKind(kind)
    n, q, t = spec.n, spec.q, spec.t
    p = LogProduct(spec.ctx)
    if kind is ConnectionKind.J_TO_I:
        for i in range(1, n + 1):
            p.poch(q / (spec.a1 * spec.b2) * t ** (-(i - 1)))
            p.poch(spec.b1 * spec.a2 * t ** (i - 1), -1)
        return p.value("J to I coefficient")
    x = as_point(x, n)
    qa = cpow(q, spec.alpha)
    for i in range(1, n + 1):
        p.theta(qa * spec.b1 * t ** (n - 1) * x[i - 1])
        if kind is ConnectionKind.A_TO_TRUNC:
            p.theta(qa * spec.a1 * spec.b1 * t ** (n + i - 2), -1)
        else:
            p.theta(qa * t ** (i - 1), -1)
    return p.value(f"{kind.value} coefficient")
