"""Integrand families, difference product, regularizers and theta coefficients.

One evaluator covers the four weight families. Every family has the shape

    prod_i z_i^g * prod_l (q z_i / c_l)_inf / (d_l z_i)_inf
        * prod_{i<j} z_i^(2 tau - 1) (q t^-1 z_j/z_i)_inf / (t z_j/z_i)_inf

and differs only in the base exponent ``g`` and the parameter lists ``c``
(numerator) and ``d`` (denominator):

    A             g = alpha                        c = (a1,)     d = (b1,)
    A_dual        g = 1-alpha1-beta1-2(n-1)tau-alpha  c = (b1,)  d = (a1,)
    Selberg       g = 1                            c = (a1, a2)  d = (b1, b2)
    Selberg_dual  g = 1-alpha1-alpha2-beta1-beta2-2(n-1)tau
                                                   c = (b1, b2)  d = (a1, a2)

Points are plain sequences of complex numbers; permutations are 0-based
tuples ``sigma`` with ``sigma[k]`` the image of ``k``.
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import IndexOutOfRange, PoleHit, ZeroArgument
from .qkernel import (
    LogProduct,
    QContext,
    as_context,
    cpow,
    log_qpoch_inf,
    q_exponent,
    theta,
)


class Family(str, Enum):
    A = "A"
    A_DUAL = "A_dual"
    SELBERG = "Selberg"
    SELBERG_DUAL = "Selberg_dual"


_DUAL = {
    Family.A: Family.A_DUAL,
    Family.A_DUAL: Family.A,
    Family.SELBERG: Family.SELBERG_DUAL,
    Family.SELBERG_DUAL: Family.SELBERG,
}


def _resolve_tau(ctx: QContext, tau, t) -> complex:
    if (tau is None) == (t is None):
        raise ValueError("give exactly one of tau or t")
    return complex(tau) if tau is not None else q_exponent(t, ctx)


@dataclass(frozen=True)
class WeightSpec:
    """Parameter bundle selecting one integrand family.

    Multiplicative parameters are primary; the exponent forms ``alpha1`` etc.
    are derived with the principal logarithm so that ``a1 == q**alpha1``.
    """

    family: Family
    n: int
    ctx: QContext
    tau: complex
    a1: complex
    b1: complex
    a2: complex | None = None
    b2: complex | None = None
    alpha: complex = 0j
    t: complex = field(init=False)
    alpha1: complex = field(init=False)
    beta1: complex = field(init=False)
    alpha2: complex | None = field(init=False)
    beta2: complex | None = field(init=False)

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "ctx", as_context(self.ctx))
        if int(self.n) < 1:
            raise ValueError("n must be >= 1")
        object.__setattr__(self, "n", int(self.n))
        selberg = fam in (Family.SELBERG, Family.SELBERG_DUAL)
        if selberg and (self.a2 is None or self.b2 is None):
            raise ValueError("Selberg families need a2 and b2")
        names = ("a1", "b1", "a2", "b2") if selberg else ("a1", "b1")
        for name in names:
            v = complex(getattr(self, name))
            if v == 0:
                raise ZeroArgument(f"parameter {name} must be nonzero")
            object.__setattr__(self, name, v)
        if not selberg:
            object.__setattr__(self, "a2", None)
            object.__setattr__(self, "b2", None)
        object.__setattr__(self, "tau", complex(self.tau))
        object.__setattr__(self, "alpha", complex(self.alpha))
        ctx = self.ctx
        object.__setattr__(self, "t", cpow(ctx.q, self.tau))
        object.__setattr__(self, "alpha1", q_exponent(self.a1, ctx))
        object.__setattr__(self, "beta1", q_exponent(self.b1, ctx))
        object.__setattr__(self, "alpha2", q_exponent(self.a2, ctx) if selberg else None)
        object.__setattr__(self, "beta2", q_exponent(self.b2, ctx) if selberg else None)

    # construction -----------------------------------------------------
    @classmethod
    def a_type(cls, q, n, alpha, a1, b1, *, tau=None, t=None, dual=False):
        ctx = as_context(q)
        fam = Family.A_DUAL if dual else Family.A
        return cls(fam, n, ctx, _resolve_tau(ctx, tau, t), a1, b1, alpha=alpha)

    @classmethod
    def selberg(cls, q, n, a1, a2, b1, b2, *, tau=None, t=None, dual=False):
        ctx = as_context(q)
        fam = Family.SELBERG_DUAL if dual else Family.SELBERG
        return cls(fam, n, ctx, _resolve_tau(ctx, tau, t), a1, b1, a2=a2, b2=b2)

    def replace(self, **changes) -> "WeightSpec":
        return dataclasses.replace(self, **changes)

    def shifted(self, name: str, k: int = 1) -> "WeightSpec":
        """Multiply parameter ``name`` by ``q**k`` (for ``alpha``: add ``k``)."""
        if name == "alpha":
            return self.replace(alpha=self.alpha + k)
        return self.replace(**{name: getattr(self, name) * self.ctx.q**k})

    # family data ------------------------------------------------------
    @property
    def q(self) -> float:
        return self.ctx.q

    @property
    def is_selberg(self) -> bool:
        return self.family in (Family.SELBERG, Family.SELBERG_DUAL)

    @property
    def is_dual(self) -> bool:
        return self.family in (Family.A_DUAL, Family.SELBERG_DUAL)

    @property
    def beta(self) -> complex:
        """A-type partner exponent, fixed by the balancing condition."""
        return 1 - self.alpha1 - self.beta1 - 2 * (self.n - 1) * self.tau - self.alpha

    @property
    def exponent(self) -> complex:
        f, n, tau = self.family, self.n, self.tau
        if f is Family.A:
            return self.alpha
        if f is Family.A_DUAL:
            return self.beta
        if f is Family.SELBERG:
            return 1 + 0j
        return 1 - self.alpha1 - self.alpha2 - self.beta1 - self.beta2 - 2 * (n - 1) * tau

    @property
    def numer(self) -> tuple[complex, ...]:
        return {
            Family.A: (self.a1,),
            Family.A_DUAL: (self.b1,),
            Family.SELBERG: (self.a1, self.a2),
            Family.SELBERG_DUAL: (self.b1, self.b2),
        }[self.family]

    @property
    def denom(self) -> tuple[complex, ...]:
        return {
            Family.A: (self.b1,),
            Family.A_DUAL: (self.a1,),
            Family.SELBERG: (self.b1, self.b2),
            Family.SELBERG_DUAL: (self.a1, self.a2),
        }[self.family]

    def dual(self) -> "WeightSpec":
        return self.replace(family=_DUAL[self.family])

    def interchanged(self) -> "WeightSpec":
        """A-type spec with ``alpha <-> beta`` and ``a1 <-> b1``.

        Its primal weight equals the dual weight of ``self``.
        """
        if self.is_selberg:
            raise ValueError("interchange rule is defined for A-type specs")
        return self.replace(family=Family.A, alpha=self.beta, a1=self.b1, b1=self.a1)

    def describe(self) -> dict:
        out = {"family": self.family.value, "n": self.n, "q": self.q, "tau": self.tau,
               "a1": self.a1, "b1": self.b1}
        if self.is_selberg:
            out.update(a2=self.a2, b2=self.b2)
        else:
            out["alpha"] = self.alpha
        return out


# points ---------------------------------------------------------------


def as_point(z, n: int | None = None) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.ndim != 1:
        raise ValueError("a point is a 1-d sequence of coordinates")
    if n is not None and z.size != n:
        raise ValueError(f"point has {z.size} coordinates, expected {n}")
    if np.any(z == 0):
        raise ZeroArgument("point coordinates must be nonzero")
    return z


def geometric_block(x, t, length: int) -> list[complex]:
    return [complex(x) * complex(t) ** k for k in range(length)]


def zeta(spec: WeightSpec) -> np.ndarray:
    """``(a1, a1 t, ..., a1 t^(n-1))``."""
    return np.array(geometric_block(spec.a1, spec.t, spec.n))


def zeta_bar(spec: WeightSpec) -> np.ndarray:
    """``(b1, b1 t, ..., b1 t^(n-1))``."""
    return np.array(geometric_block(spec.b1, spec.t, spec.n))


def zeta_i(i: int, x1, x2, t, n: int) -> np.ndarray:
    """``(x1, x1 t, ..., x1 t^(i-1), x2, x2 t, ..., x2 t^(n-i-1))``."""
    if not 0 <= i <= n:
        raise IndexOutOfRange(f"block index i={i} outside 0..{n}")
    return np.array(geometric_block(x1, t, i) + geometric_block(x2, t, n - i))


def inverse_point(x) -> np.ndarray:
    return 1.0 / as_point(x)


# evaluators -----------------------------------------------------------


def delta(z) -> complex:
    """Difference product ``prod_{i<j} (z_i - z_j)``."""
    z = np.asarray(z, dtype=complex)
    out = 1 + 0j
    for i, j in itertools.combinations(range(z.size), 2):
        out *= z[i] - z[j]
    return out


def _log_phi(spec: WeightSpec, z: np.ndarray) -> tuple[LogProduct, list[str]]:
    ctx, n, q, t = spec.ctx, spec.n, spec.q, spec.t
    g, tau = spec.exponent, spec.tau
    p = LogProduct(ctx)
    poles: list[str] = []

    def den(arg, label):
        lg, o = log_qpoch_inf(arg, ctx)
        p.log -= lg
        p.order -= o
        if o:
            poles.append(label)

    for i in range(n):
        p.cpow(z[i], g + (2 * tau - 1) * (n - 1 - i))
        for c in spec.numer:
            p.poch(q * z[i] / c)
        for k, d in enumerate(spec.denom):
            den(d * z[i], f"(d{k + 1} z_{i + 1})_inf")
    for i, j in itertools.combinations(range(n), 2):
        w = z[j] / z[i]
        p.poch(q * w / t)
        den(t * w, f"(t z_{j + 1}/z_{i + 1})_inf")
    return p, poles


def phi(spec: WeightSpec, z, ctx: QContext | None = None) -> complex:
    """The family's weight at ``z``; exact 0 when a numerator product vanishes."""
    z = as_point(z, spec.n)
    p, poles = _log_phi(spec, z)
    if p.order < 0:
        raise PoleHit(f"weight pole at z={z.tolist()}: " + ", ".join(poles))
    return p.value()


def h_reg(spec: WeightSpec, x, ctx: QContext | None = None) -> complex:
    """Regularizing factor ``h`` (``h-bar`` for the dual families)."""
    x = as_point(x, spec.n)
    n, t = spec.n, spec.t
    p = LogProduct(spec.ctx)
    for i in range(n):
        p.cpow(x[i], spec.exponent)
        for d in spec.denom:
            p.theta(d * x[i], -1)
    for i, j in itertools.combinations(range(n), 2):
        p.cpow(x[i], 2 * spec.tau)
        p.theta(x[j] / x[i])
        p.theta(t * x[j] / x[i], -1)
    return p.value(f"h at x={x.tolist()}")


def shift_quotient(spec: WeightSpec, z, k: int):
    """``phi(z with z_k -> q z_k) / phi(z)`` as a rational function of ``z``.

    ``z`` is a sequence of ``n`` coordinates, scalars or broadcastable arrays.
    """
    n, q, t = spec.n, spec.q, spec.t
    zk = z[k]
    out = cpow(q, spec.exponent + (2 * spec.tau - 1) * (n - 1 - k)) + 0 * zk
    for c in spec.numer:
        out = out / (1 - q * zk / c)
    for d in spec.denom:
        out = out * (1 - d * zk)
    for j in range(n):
        if j > k:
            w = z[j] / zk
            out = out * (1 - w / t) / (1 - t * w / q)
        elif j < k:
            w = zk / z[j]
            out = out * (1 - t * w) / (1 - q * w / t)
    return out


def permute(z, sigma: Sequence[int]) -> np.ndarray:
    """``sigma^{-1}(z) = (z_{sigma(1)}, ..., z_{sigma(n)})``."""
    z = np.asarray(z, dtype=complex)
    return z[list(sigma)]


def compose(sigma: Sequence[int], rho: Sequence[int]) -> tuple[int, ...]:
    """``(sigma rho)(k) = sigma(rho(k))``."""
    return tuple(sigma[r] for r in rho)


def u_sigma(spec: WeightSpec, x, sigma: Sequence[int]) -> complex:
    """Cocycle with ``phi(permute(z, sigma)) == u_sigma(z) * phi(z)``."""
    x = as_point(x, spec.n)
    n = spec.n
    if sorted(sigma) != list(range(n)):
        raise ValueError(f"{sigma} is not a permutation of 0..{n - 1}")
    inv = [0] * n
    for k, s in enumerate(sigma):
        inv[s] = k
    q, t, tau = spec.q, spec.t, spec.tau
    p = LogProduct(spec.ctx)
    for i, j in itertools.combinations(range(n), 2):
        if inv[i] > inv[j]:
            r = x[i] / x[j]
            p.cpow(r, 1 - 2 * tau)
            p.theta(q / t * r)
            p.theta(t * r, -1)
    return p.value("U_sigma")


def _block_theta(p: LogProduct, n: int, i: int, x1, x2, b1, b2, t) -> None:
    for j in range(1, i + 1):
        p.theta(x2 * b1 * t ** (n - j)).theta(x2 * b2 * t ** (n - j))
        p.theta(t**j, -1).theta(x2 / x1 * t ** (n - i - j + 1), -1)
    for k in range(1, n - i + 1):
        p.theta(x1 * b1 * t ** (n - k)).theta(x1 * b2 * t ** (n - k))
        p.theta(t**k, -1).theta(x1 / x2 * t ** (i - k + 1), -1)


def F_coeff(i: int, x1, x2, spec: WeightSpec) -> complex:
    """Multiplier of the regularized sum at ``zeta_i(x1, x2)`` inside ``F``."""
    n = spec.n
    if not 0 <= i <= n:
        raise IndexOutOfRange(f"i={i} outside 0..{n}")
    x1, x2, t = complex(x1), complex(x2), spec.t
    p = LogProduct(spec.ctx)
    _block_theta(p, n, i, x1, x2, spec.b1, spec.b2, t)
    for l in range(1, n + 1):
        p.theta(t**l)
    return p.value(f"F coefficient {i}")


def H_coeff(i: int, x1, x2, spec: WeightSpec, ctx: QContext | None = None) -> complex:
    """Theta coefficient ``H_i(x1, x2)`` of the regularized sum at ``zeta_i``."""
    n = spec.n
    if not 0 <= i <= n:
        raise IndexOutOfRange(f"i={i} outside 0..{n}")
    x1, x2, t = complex(x1), complex(x2), spec.t
    X = x1 * x2 * spec.b1 * spec.b2
    p = LogProduct(spec.ctx)
    _block_theta(p, n, i, x1, x2, spec.b1, spec.b2, t)
    for l in range(1, n + 1):
        p.theta(t**l).theta(X * t ** (n + l - 2), -1)
    return p.value(f"H_{i}")


def theta_basis(i: int, x1, x2, spec: WeightSpec, ctx: QContext | None = None) -> complex:
    """``Theta_i(x1, x2)``, ``1 <= i <= n``."""
    n = spec.n
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"i={i} outside 1..{n}")
    X = complex(x1) * complex(x2) * spec.b1 * spec.b2
    t = spec.t
    out = theta(X * t ** (n - i), spec.ctx)
    for j in range(1, n + 1):
        if j != i:
            out *= theta(X * t ** (2 * n - j), spec.ctx)
    return out


def theta_quasi_factor(x1, x2, spec: WeightSpec) -> complex:
    """Factor picked up by the theta basis under ``x1 -> q x1``.

    ``(-x1 x2 b1 b2 t^{3(n-1)/2})^{-n}`` written with the integer power
    ``t^{3n(n-1)/2}`` so no square root of ``t`` is needed.
    """
    n = spec.n
    X = complex(x1) * complex(x2) * spec.b1 * spec.b2
    return (-X) ** (-n) * spec.t ** (-(3 * n * (n - 1) // 2))


def h_ratio_closed(spec: WeightSpec, x) -> complex:
    """Closed form of ``h(x) / h_dual(1/x)`` for the primal families."""
    x = as_point(x, spec.n)
    n, q, t, tau = spec.n, spec.q, spec.t, spec.tau
    if spec.is_dual:
        raise ValueError("use the primal spec")
    p = LogProduct(spec.ctx)
    p.factor(-1, n * (n - 1) // 2)
    pairs = [(spec.alpha1, spec.beta1, spec.a1, spec.b1)]
    if spec.is_selberg:
        pairs.append((spec.alpha2, spec.beta2, spec.a2, spec.b2))
    for i in range(n):
        for al, be, a, b in pairs:
            p.cpow(x[i], 1 - al - be)
            p.theta(q / a * x[i])
            p.theta(b * x[i], -1)
    for j, k in itertools.combinations(range(n), 2):
        r = x[k] / x[j]
        p.cpow(r, 1 - 2 * tau)
        p.theta(q / t * r)
        p.theta(t * r, -1)
    return p.value("h ratio")


__all__ = [
    "Family", "WeightSpec", "as_point", "zeta", "zeta_bar", "zeta_i", "inverse_point",
    "geometric_block", "delta", "phi", "h_reg", "u_sigma", "permute", "compose",
    "H_coeff", "F_coeff", "theta_basis", "theta_quasi_factor", "h_ratio_closed",
    "shift_quotient",
]
