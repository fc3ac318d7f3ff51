"""Scalar q-special functions: Pochhammer symbols, theta, q-gamma, principal powers.

Everything is evaluated in double precision. Infinite products are cut off once
the next factor differs from 1 by less than ``QContext.eps_tail``. A factor
``1 - u`` with ``|1 - u| <= ZERO_TOL`` is treated as an exact zero, so products
that vanish on the lattice ``q^k`` return 0 instead of a rounding residue.
Zeros are tracked as integer orders alongside a complex logarithm of the
nonzero part; this lets a zero in a numerator cancel an identical zero in a
denominator, and keeps products of many Pochhammer symbols inside double range.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import FactorCapExceeded, PoleHit, ZeroArgument

ZERO_TOL = 1e-12


@dataclass(frozen=True)
class QContext:
    """The base ``q`` together with the truncation policy for infinite products."""

    q: float
    eps_tail: float = 1e-17
    max_factors: int = 20000

    def __post_init__(self):
        q = float(self.q)
        if not 0.0 < q < 1.0:
            raise ValueError(f"q must lie in (0, 1), got {self.q!r}")
        if not self.eps_tail > 0:
            raise ValueError("eps_tail must be positive")
        if int(self.max_factors) < 1:
            raise ValueError("max_factors must be >= 1")
        object.__setattr__(self, "q", q)

    @property
    def logq(self) -> float:
        return math.log(self.q)


def as_context(q_or_ctx) -> QContext:
    return q_or_ctx if isinstance(q_or_ctx, QContext) else QContext(float(q_or_ctx))


def n_factors(abs_a: float, ctx: QContext) -> int:
    """Smallest N with ``q^N |a| < eps_tail``."""
    if abs_a < ctx.eps_tail:
        return 0
    n = math.ceil(math.log(ctx.eps_tail / abs_a) / ctx.logq)
    while abs_a * ctx.q**n >= ctx.eps_tail:
        n += 1
    if n > ctx.max_factors:
        raise FactorCapExceeded(
            f"|a|={abs_a:.3g} needs {n} factors (cap {ctx.max_factors})"
        )
    return n


def tail_bound(a, ctx: QContext) -> float:
    """Relative error bound of the truncated product ``(a)_inf``."""
    a = complex(a)
    n = n_factors(abs(a), ctx)
    return math.expm1(abs(a) * ctx.q**n / (1.0 - ctx.q))


def cpow(z, alpha) -> complex:
    """Principal power ``exp(alpha * Log z)``."""
    z = complex(z)
    if z == 0:
        raise ZeroArgument("cpow of zero")
    return cmath.exp(complex(alpha) * cmath.log(z))


def clog(z) -> complex:
    z = complex(z)
    if z == 0:
        raise ZeroArgument("log of zero")
    return cmath.log(z)


def q_exponent(a, ctx: QContext) -> complex:
    """The exponent ``e`` with ``a = q^e`` on the principal branch."""
    return clog(a) / ctx.logq


def _factors(a: complex, ctx: QContext) -> np.ndarray:
    n = n_factors(abs(a), ctx)
    return 1.0 - ctx.q ** np.arange(n) * a


def log_qpoch_inf(a, ctx: QContext) -> tuple[complex, int]:
    """``(log of nonzero part, number of vanishing factors)`` of ``(a)_inf``."""
    a = complex(a)
    if a == 0:
        return 0j, 0
    f = _factors(a, ctx)
    zero = np.abs(f) <= ZERO_TOL
    order = int(zero.sum())
    if order:
        f = f[~zero]
    return complex(np.log(f).sum()), order


def qpoch_inf(a, ctx: QContext) -> complex:
    """``(a; q)_inf``."""
    a = complex(a)
    if a == 0:
        return 1 + 0j
    f = _factors(a, ctx)
    if np.any(np.abs(f) <= ZERO_TOL):
        return 0j
    val = complex(np.prod(f))
    if cmath.isfinite(val) and val != 0:
        return val
    lg, _ = log_qpoch_inf(a, ctx)
    return _safe_exp(lg)


def qpoch_int(a, m: int, ctx: QContext) -> complex:
    """``(a)_m`` for any integer ``m``; negative ``m`` uses the reciprocal form."""
    a = complex(a)
    m = int(m)
    q = ctx.q
    if m >= 0:
        val = 1 + 0j
        for i in range(m):
            f = 1.0 - q**i * a
            if abs(f) <= ZERO_TOL:
                return 0j
            val *= f
        return val
    den = 1 + 0j
    for i in range(1, -m + 1):
        f = 1.0 - q ** (-i) * a
        if abs(f) <= ZERO_TOL:
            raise PoleHit(f"(a)_{m}: factor 1 - q^-{i} a vanishes at a={a}")
        den *= f
    return 1.0 / den


def qpoch_gen(a, beta, ctx: QContext) -> complex:
    """``(a)_beta = (a)_inf / (q^beta a)_inf`` with ``q^beta`` principal."""
    p = LogProduct(ctx)
    p.poch(a)
    p.poch(cpow(ctx.q, beta) * complex(a), -1)
    return p.value(f"(a)_beta at a={a}, beta={beta}")


def log_theta(a, ctx: QContext) -> tuple[complex, int]:
    a = complex(a)
    if a == 0:
        raise ZeroArgument("theta of zero")
    l1, o1 = log_qpoch_inf(a, ctx)
    l2, o2 = log_qpoch_inf(ctx.q / a, ctx)
    return l1 + l2, o1 + o2


def theta(a, ctx: QContext) -> complex:
    """``theta(a) = (a)_inf (q/a)_inf``; exactly 0 on the lattice ``q^k``."""
    a = complex(a)
    if a == 0:
        raise ZeroArgument("theta of zero")
    return qpoch_inf(a, ctx) * qpoch_inf(ctx.q / a, ctx)


def qgamma(x, ctx: QContext) -> complex:
    """``Gamma_q(x) = (1-q)^(1-x) (q)_inf / (q^x)_inf``."""
    p = LogProduct(ctx)
    p.log += (1 - complex(x)) * math.log1p(-ctx.q)
    p.poch(ctx.q)
    p.poch(cpow(ctx.q, x), -1)
    return p.value(f"Gamma_q at x={x}")


def _safe_exp(lg: complex) -> complex:
    try:
        return cmath.exp(lg)
    except OverflowError:
        return complex(math.inf, 0.0)


class LogProduct:
    """Accumulates a product of kernels as a complex log plus a zero order.

    ``order > 0`` means the product vanishes, ``order < 0`` is a pole. Equal
    numbers of vanishing factors upstairs and downstairs cancel.
    """

    __slots__ = ("ctx", "log", "order")

    def __init__(self, ctx: QContext):
        self.ctx = ctx
        self.log = 0j
        self.order = 0

    def poch(self, a, power: int = 1) -> "LogProduct":
        lg, o = log_qpoch_inf(a, self.ctx)
        self.log += power * lg
        self.order += power * o
        return self

    def theta(self, a, power: int = 1) -> "LogProduct":
        lg, o = log_theta(a, self.ctx)
        self.log += power * lg
        self.order += power * o
        return self

    def one_minus(self, u, power: int = 1) -> "LogProduct":
        f = 1.0 - complex(u)
        if abs(f) <= ZERO_TOL:
            self.order += power
        else:
            self.log += power * cmath.log(f)
        return self

    def factor(self, z, power: int = 1) -> "LogProduct":
        """Multiply by ``z**power`` for an integer ``power``."""
        z = complex(z)
        if z == 0:
            self.order += power
        else:
            self.log += power * cmath.log(z)
        return self

    def cpow(self, z, alpha) -> "LogProduct":
        """Multiply by the principal power ``z**alpha``."""
        self.log += complex(alpha) * clog(z)
        return self

    def mul(self, other: "LogProduct", power: int = 1) -> "LogProduct":
        self.log += power * other.log
        self.order += power * other.order
        return self

    def value(self, what: str = "product") -> complex:
        if self.order > 0:
            return 0j
        if self.order < 0:
            raise PoleHit(f"{what}: denominator vanishes")
        return _safe_exp(self.log)


def log_qpoch_array(u, ctx: QContext) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`log_qpoch_inf` over an array of arguments."""
    u = np.asarray(u, dtype=complex)
    acc = np.zeros(u.shape, dtype=complex)
    order = np.zeros(u.shape, dtype=np.int64)
    if u.size == 0:
        return acc, order
    n = n_factors(float(np.max(np.abs(u))), ctx)
    powers = ctx.q ** np.arange(n)
    for p in powers:
        f = 1.0 - p * u
        z = np.abs(f) <= ZERO_TOL
        if z.any():
            order += z
            f = np.where(z, 1.0, f)
        acc += np.log(f)
    return acc, order


def log_one_minus_array(u) -> tuple[np.ndarray, np.ndarray]:
    f = 1.0 - np.asarray(u, dtype=complex)
    z = np.abs(f) <= ZERO_TOL
    return np.log(np.where(z, 1.0, f)), z.astype(np.int64)


def qpoch_inf_array(u, ctx: QContext) -> np.ndarray:
    """Vectorised ``(u)_inf`` by direct multiplication (no zero bookkeeping)."""
    u = np.asarray(u, dtype=complex)
    acc = np.ones(u.shape, dtype=complex)
    if u.size == 0:
        return acc
    n = n_factors(float(np.max(np.abs(u))), ctx)
    for p in ctx.q ** np.arange(n):
        acc *= 1.0 - p * u
    return acc
