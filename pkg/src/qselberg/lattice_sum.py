"""Lattice sums over fans and over the full lattice, plus the torus quadrature.

Every integrand handled here is separable: its logarithm is a sum of terms in
one coordinate ``z_i`` and terms in one ratio ``z_j / z_i``. On the lattice
``z = x q^nu`` those become 1-d tables indexed by ``nu_i`` and by
``nu_j - nu_i``, so each lattice term is an ``exp`` of a handful of table
lookups and no infinite product is evaluated per term.

Summation runs shell by shell (shell ``k`` holds the points with
``max |nu_i| = k``). Each shell is summed with ``math.fsum`` (exactly rounded)
and shells are folded in index order, so results are bit-reproducible. The
sum stops after three consecutive shells whose absolute mass is below
``tol`` times the absolute mass accumulated so far.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BalanceViolated,
    DimensionUnsupported,
    NotConverged,
    PoleHit,
    PoleOnContour,
)
from .qkernel import (
    ZERO_TOL,
    QContext,
    cpow,
    log_one_minus_array,
    log_qpoch_array,
    qpoch_inf_array,
)
from .weights import WeightSpec, as_point, delta, h_reg, phi

DEFAULT_MAX_RADIUS = {1: 80, 2: 80, 3: 48, 4: 28}
MIN_SHELLS = 4


def default_max_radius(n: int) -> int:
    try:
        return DEFAULT_MAX_RADIUS[n]
    except KeyError:
        raise DimensionUnsupported(f"lattice sums support n <= 4, got n={n}") from None


class RegionKind(str, Enum):
    FAN = "FanLambda_i"
    FULL = "FullZ"
    ORDERED = "OrderedBlocks"


@dataclass(frozen=True)
class Region:
    """Summation region.

    ``FAN`` is ``0 <= nu_1 <= ... <= nu_i, 0 <= nu_{i+1} <= ... <= nu_n``.
    ``ORDERED`` has the same ordering inside the two blocks but no lower
    bound; it is the support of a sum based at ``zeta_i(x1, x2)`` with
    generic ``x1, x2`` and the right object there when ``tau`` is a positive
    integer (where the literal weight no longer vanishes off that support).
    """

    kind: RegionKind
    n: int
    i: int = 0

    @classmethod
    def fan(cls, n: int, i: int | None = None) -> "Region":
        i = n if i is None else i
        if not 0 <= i <= n:
            raise ValueError(f"fan index {i} outside 0..{n}")
        return cls(RegionKind.FAN, n, i)

    @classmethod
    def full(cls, n: int) -> "Region":
        return cls(RegionKind.FULL, n, 0)

    @classmethod
    def ordered(cls, n: int, i: int | None = None) -> "Region":
        i = n if i is None else i
        if not 0 <= i <= n:
            raise ValueError(f"block index {i} outside 0..{n}")
        return cls(RegionKind.ORDERED, n, i)

    def bounds(self, radius: int) -> tuple[int, int]:
        return (0, radius) if self.kind is RegionKind.FAN else (-radius, radius)

    def ordered_pairs(self) -> list[tuple[int, int]]:
        """Adjacent index pairs (0-based) that must be non-decreasing."""
        if self.kind is RegionKind.FULL:
            return []
        i, n = self.i, self.n
        return [(k, k + 1) for k in range(n - 1) if k + 1 != i]

    def contains(self, nu: Sequence[int]) -> bool:
        if self.kind is RegionKind.FAN and min(nu) < 0:
            return False
        return all(nu[a] <= nu[b] for a, b in self.ordered_pairs())


@dataclass(frozen=True)
class SumResult:
    value: complex
    tail_estimate: float
    radius_used: int
    terms: int
    converged: bool
    abs_sum: float = 0.0

    def scaled(self, factor: complex) -> "SumResult":
        f = complex(factor)
        return SumResult(self.value * f, self.tail_estimate * abs(f), self.radius_used,
                         self.terms, self.converged, self.abs_sum * abs(f))


# integrands -------------------------------------------------------------


class PhiDelta:
    """``phi(z) * delta(z)`` for one of the weight families."""

    def __init__(self, spec: WeightSpec):
        self.spec = spec
        self.n = spec.n
        self.ctx = spec.ctx
        self.prefactor = (1 - spec.q) ** spec.n

    def single(self, i, z):
        s = self.spec
        q = s.q
        lg = (s.exponent + 2 * s.tau * (s.n - 1 - i)) * np.log(z)
        order = np.zeros(z.shape, dtype=np.int64)
        for c in s.numer:
            l, o = log_qpoch_array(q * z / c, self.ctx)
            lg, order = lg + l, order + o
        for d in s.denom:
            l, o = log_qpoch_array(d * z, self.ctx)
            lg, order = lg - l, order - o
        return lg, order

    def pair(self, i, j, w):
        s = self.spec
        l1, o1 = log_qpoch_array(s.q * w / s.t, self.ctx)
        l2, o2 = log_qpoch_array(s.t * w, self.ctx)
        l3, o3 = log_one_minus_array(w)
        return l1 - l2 + l3, o1 - o2 + o3


class MacdonaldIntegrand:
    """Self-dual integrand of the balanced constant-term sum (no powers)."""

    def __init__(self, spec: WeightSpec, qbeta: complex):
        self.spec = spec
        self.n = spec.n
        self.ctx = spec.ctx
        self.prefactor = (1 - spec.q) ** spec.n
        q, t, n = spec.q, spec.t, spec.n
        qalpha = cpow(q, spec.alpha)
        self._num = (q / spec.a1, "z"), (q / spec.b1, "1/z")
        self._den = (qalpha * spec.b1 * t ** (n - 1), "z"), (qbeta * spec.a1 * t ** (n - 1), "1/z")

    def _acc(self, z, items, sign, lg, order):
        for c, kind in items:
            l, o = log_qpoch_array(c * (z if kind == "z" else 1.0 / z), self.ctx)
            lg, order = lg + sign * l, order + sign * o
        return lg, order

    def single(self, i, z):
        lg = np.zeros(z.shape, dtype=complex)
        order = np.zeros(z.shape, dtype=np.int64)
        lg, order = self._acc(z, self._num, 1, lg, order)
        return self._acc(z, self._den, -1, lg, order)

    def pair(self, i, j, w):
        q, t = self.spec.q, self.spec.t
        lg = np.zeros(w.shape, dtype=complex)
        order = np.zeros(w.shape, dtype=np.int64)
        for arg, sign in ((q / t * w, 1), (q / t / w, 1), (q * w, -1), (q / w, -1)):
            l, o = log_qpoch_array(arg, self.ctx)
            lg, order = lg + sign * l, order + sign * o
        return lg, order


# engine -----------------------------------------------------------------


def _shell_sums(integrand, x, region: Region, radius: int, weight):
    n, q = integrand.n, integrand.ctx.q
    lo, hi = region.bounds(radius)
    m = np.arange(lo, hi + 1)
    qm = q ** m.astype(float)
    singles = [integrand.single(i, x[i] * qm) for i in range(n)]
    d = np.arange(lo - hi, hi - lo + 1)
    qd = q ** d.astype(float)
    pairs = {
        (i, j): integrand.pair(i, j, (x[j] / x[i]) * qd)
        for i, j in itertools.combinations(range(n), 2)
    }
    off = hi - lo  # index of difference 0 in the pair tables
    size = m.size
    shells_re: list[list[float]] = [[] for _ in range(radius + 1)]
    shells_im: list[list[float]] = [[] for _ in range(radius + 1)]
    shell_abs = np.zeros(radius + 1)
    shell_terms = np.zeros(radius + 1, dtype=np.int64)

    # contribution of coordinates 2..n, shape (size,)*(n-1)
    rest_dims = n - 1
    idx = np.indices((size,) * rest_dims) if rest_dims else None
    if rest_dims:
        rest_log = np.zeros((size,) * rest_dims, dtype=complex)
        rest_ord = np.zeros((size,) * rest_dims, dtype=np.int64)
        mask = np.ones((size,) * rest_dims, dtype=bool)
        for k in range(1, n):
            lg, od = singles[k]
            rest_log += lg[idx[k - 1]]
            rest_ord += od[idx[k - 1]]
        for i, j in itertools.combinations(range(1, n), 2):
            lg, od = pairs[(i, j)]
            dd = idx[j - 1] - idx[i - 1] + off
            rest_log += lg[dd]
            rest_ord += od[dd]
        for a, b in region.ordered_pairs():
            if a >= 1:
                mask &= idx[a - 1] <= idx[b - 1]
        rest_shell = np.max(np.abs(m[idx]), axis=0)
        flat_order = np.argsort(rest_shell, axis=None, kind="stable")
        sorted_shell = rest_shell.ravel()[flat_order]
    lo_abs = np.abs(m)

    for a in range(size):
        v = m[a]
        if rest_dims == 0:
            lg = np.array([singles[0][0][a]])
            od = np.array([singles[0][1][a]])
            msk = np.array([True])
            order_ix = np.array([0])
            sshell = np.array([lo_abs[a]])
        else:
            lg = rest_log + singles[0][0][a]
            od = rest_ord + singles[0][1][a]
            for j in range(1, n):
                plg, pod = pairs[(0, j)]
                dd = idx[j - 1] - a + off
                lg = lg + plg[dd]
                od = od + pod[dd]
            msk = mask
            if (0, 1) in region.ordered_pairs():
                msk = msk & (idx[0] >= a)
            order_ix = flat_order
            sshell = np.maximum(sorted_shell, lo_abs[a])
        if np.any((od < 0) & msk):
            bad = np.argwhere((od < 0) & msk)[0]
            nu = [int(v)] + [int(m[b]) for b in bad] if rest_dims else [int(v)]
            raise PoleHit(f"lattice point nu={nu} lands on a pole")
        live = msk & (od == 0)
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.where(live, np.exp(np.where(live, lg, 0)), 0)
        if weight is not None:
            zs = [x[0] * q**float(v)] + ([x[k] * qm[idx[k - 1]] for k in range(1, n)])
            with np.errstate(all="ignore"):
                w = np.asarray(weight(zs), dtype=complex)
            # weights may be singular off the support; only live terms count
            vals = np.where(live, vals * np.where(live, w, 0), 0)
        if not np.all(np.isfinite(vals)):
            raise NotConverged("lattice terms overflow double range; parameters likely divergent")
        flat = vals.ravel()[order_ix]
        live_flat = live.ravel()[order_ix]
        # split by shell (sshell is sorted)
        bounds = np.searchsorted(sshell, np.arange(radius + 2), side="left")
        for k in range(int(sshell[0]), radius + 1):
            s0, s1 = bounds[k], bounds[k + 1]
            if s1 <= s0:
                continue
            seg = flat[s0:s1]
            shells_re[k].append(math.fsum(seg.real))
            shells_im[k].append(math.fsum(seg.imag))
            shell_abs[k] += float(np.sum(np.abs(seg)))
            shell_terms[k] += int(np.count_nonzero(live_flat[s0:s1]))
    shell_vals = [complex(math.fsum(r), math.fsum(i)) for r, i in zip(shells_re, shells_im)]
    return shell_vals, shell_abs, shell_terms


def _tail(abs_masses: np.ndarray) -> float:
    a = abs_masses[-3:]
    if a[-1] == 0:
        return 0.0
    if a[0] > 0:
        r = math.sqrt(a[-1] / a[0])
        if r < 1:
            return a[-1] * r / (1 - r)
    return math.inf


def _evaluate(integrand, x, region, tol, max_radius, weight, strict) -> SumResult:
    x = as_point(x, integrand.n)
    if max_radius is None:
        max_radius = default_max_radius(integrand.n)
    radius = min(max_radius, 24 if integrand.n <= 2 else 16)
    while True:
        vals, masses, counts = _shell_sums(integrand, x, region, radius, weight)
        cum = np.cumsum(masses)
        stop = None
        for k in range(max(3, MIN_SHELLS - 1), radius + 1):
            lim = tol * cum[k]
            # the quiet shells must follow some mass, else a sum whose support
            # starts late (exact zeros near the origin) would stop at once
            if cum[k - 3] > 0 and max(masses[k - 2], masses[k - 1], masses[k]) <= lim:
                stop = k
                break
        if stop is not None or radius >= max_radius:
            k = radius if stop is None else stop
            pref = integrand.prefactor
            value = complex(math.fsum(v.real for v in vals[: k + 1]),
                            math.fsum(v.imag for v in vals[: k + 1])) * pref
            tail = _tail(masses[: k + 1]) * abs(pref)
            res = SumResult(value, tail, k, int(counts[: k + 1].sum()), stop is not None,
                            float(cum[k]) * abs(pref))
            if strict and not res.converged:
                raise NotConverged(
                    f"sum not converged at radius {k}: tail {res.tail_estimate:.3g}, "
                    f"value {abs(res.value):.3g}"
                )
            return res
        radius = min(2 * radius, max_radius)


def jackson_sum(
    spec: WeightSpec,
    base,
    region: Region | None = None,
    tol: float = 1e-14,
    max_radius: int | None = None,
    ctx: QContext | None = None,
    *,
    weight: Callable | None = None,
    strict: bool = False,
) -> SumResult:
    """``(1-q)^n sum_{nu in region} phi(x q^nu) delta(x q^nu)``.

    ``weight`` optionally multiplies each term by a function of the lattice
    coordinates; it receives a list of ``n`` broadcastable arrays.
    """
    region = region or Region.full(spec.n)
    if region.n != spec.n:
        raise ValueError("region dimension does not match the spec")
    return _evaluate(PhiDelta(spec), base, region, tol, max_radius, weight, strict)


def regularized_sum(spec, base, region=None, tol=1e-14, ctx=None, **kw) -> SumResult:
    """Lattice sum divided by the regularizer at the same base."""
    res = jackson_sum(spec, base, region, tol, **kw)
    return res.scaled(1.0 / h_reg(spec, base))


def lattice_term(spec: WeightSpec, base, nu) -> complex:
    """Single term ``phi(x q^nu) delta(x q^nu)`` evaluated from scratch."""
    x = as_point(base, spec.n)
    z = x * spec.q ** np.asarray(nu, dtype=float)
    return phi(spec, z) * delta(z)


def term_ratio(spec: WeightSpec, base, nu, axis: int, ctx=None) -> complex:
    """``T(nu + e_axis) / T(nu)`` from the rational shift quotients only."""
    x = as_point(base, spec.n)
    n, q, t = spec.n, spec.q, spec.t
    z = x * q ** np.asarray(nu, dtype=float)
    k = int(axis)
    num, den = [], []
    power = cpow(q, spec.exponent + (2 * spec.tau - 1) * (n - 1 - k))
    for c in spec.numer:
        den.append(1 - q * z[k] / c)
    for d in spec.denom:
        num.append(1 - d * z[k])
    for j in range(n):
        if j == k:
            continue
        if j > k:
            w = z[j] / z[k]
            num.append(1 - w / t)
            den.append(1 - t * w / q)
        else:
            w = z[k] / z[j]
            num.append(1 - t * w)
            den.append(1 - q * w / t)
        num.append(q * z[k] - z[j])
        den.append(z[k] - z[j])
    if any(abs(f) <= ZERO_TOL * max(1.0, abs(z[k])) for f in den):
        raise PoleHit(f"shift quotient singular at nu={list(nu)}, axis={k}")
    if any(abs(f) <= ZERO_TOL * max(1.0, abs(z[k])) for f in num):
        return 0j
    out = power
    for f in num:
        out *= f
    for f in den:
        out /= f
    return complex(out)


# balanced sums ----------------------------------------------------------


def balance_qbeta(spec: WeightSpec, beta=None) -> complex:
    """``q^beta`` from the balancing condition, or checked against it."""
    q, n, t = spec.q, spec.n, spec.t
    qalpha = cpow(q, spec.alpha)
    target = q / (spec.a1 * spec.b1 * t ** (2 * n - 2) * qalpha)
    if beta is None:
        return target
    qb = cpow(q, beta)
    if abs(qb - target) > 1e-12 * max(1.0, abs(target)):
        raise BalanceViolated(
            f"a1 b1 t^(2n-2) q^(alpha+beta) = "
            f"{spec.a1 * spec.b1 * t ** (2 * n - 2) * qalpha * qb} != q"
        )
    return qb


def macdonald_constant_sum(spec: WeightSpec, base, tol: float = 1e-14, ctx=None, *,
                           beta=None, max_radius=None, strict=False) -> SumResult:
    """Full-lattice sum of the balanced self-dual integrand; independent of ``base``."""
    if spec.is_selberg:
        raise ValueError("the constant-term sum uses an A-type spec")
    integrand = MacdonaldIntegrand(spec, balance_qbeta(spec, beta))
    return _evaluate(integrand, base, Region.full(spec.n), tol, max_radius, None, strict)


def contour_integral(spec: WeightSpec, nodes: int, ctx=None, *, beta=None) -> complex:
    """Torus integral by the trapezoid rule with ``nodes`` points per circle."""
    n, q, t = spec.n, spec.q, spec.t
    if n not in (1, 2):
        raise DimensionUnsupported(f"torus quadrature supports n in (1, 2), got {n}")
    for name, v in (("a1", spec.a1), ("b1", spec.b1), ("t", t)):
        if abs(v) >= 1 - 1e-6:
            raise PoleOnContour(f"|{name}|={abs(v):.6g} puts integrand poles on the unit torus")
    qbeta = balance_qbeta(spec, beta)
    qalpha = cpow(q, spec.alpha)
    ctx = spec.ctx
    N = int(nodes)
    z = np.exp(2j * np.pi * np.arange(N) / N)
    a1, b1 = spec.a1, spec.b1
    single = (
        qpoch_inf_array(qalpha * t ** (n - 1) * a1 / z, ctx)
        * qpoch_inf_array(qbeta * t ** (n - 1) * b1 * z, ctx)
        / qpoch_inf_array(a1 / z, ctx)
        / qpoch_inf_array(b1 * z, ctx)
    )
    if n == 1:
        return complex(math.fsum(single.real), math.fsum(single.imag)) / N
    # pair factor depends only on the node difference
    w = z
    pair = (
        qpoch_inf_array(w, ctx) * qpoch_inf_array(1 / w, ctx)
        / qpoch_inf_array(t * w, ctx) / qpoch_inf_array(t / w, ctx)
    )
    pair[0] = 0.0
    k = np.arange(N)
    table = pair[(k[:, None] - k[None, :]) % N]
    terms = (single[:, None] * single[None, :] * table).ravel()
    total = complex(math.fsum(terms.real), math.fsum(terms.imag))
    return total / (N * N) / 2


__all__ = [
    "Region", "RegionKind", "SumResult", "jackson_sum", "regularized_sum", "term_ratio",
    "lattice_term", "macdonald_constant_sum", "contour_integral", "balance_qbeta",
    "default_max_radius", "PhiDelta", "MacdonaldIntegrand",
]
