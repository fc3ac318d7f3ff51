"""Identity registry: constraints, admissible samplers and LHS/RHS recipes.

Each entry turns a parameter dictionary into an :class:`Outcome`. Parameters
are plain dicts (``q, n, tau, alpha, a1, a2, b1, b2, xs, pairs, nodes``) so
they pickle cheaply into worker processes. ``xs`` holds A-type evaluation
points and ``pairs`` holds Selberg ``(x1, x2)`` pairs; identities whose value
must not depend on the point are evaluated at every entry.

Samplers only fill keys the caller left out, so a config can pin any subset
of parameters. The drawn values keep a margin inside each convergence region
(typical term ratios at most 0.3 to 0.5) so default lattice radii suffice.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import closed_forms as cf
from .errors import ConstraintViolated
from .interpolation import (
    E_poly,
    appendix_sides,
    check_appendix_identity,
    e_shifted,
    elem_sym,
    recursion_factor,
    vandermonde,
    vanishing_asymptotic_check,
)
from .lattice_sum import (
    Region,
    SumResult,
    balance_qbeta,
    contour_integral,
    jackson_sum,
    macdonald_constant_sum,
)
from .qkernel import cpow
from .weights import (
    H_coeff,
    WeightSpec,
    geometric_block,
    h_reg,
    inverse_point,
    zeta,
    zeta_bar,
    zeta_i,
)

SUM_TOL = 1e-14
DEFAULT_TOL = 1e-8
N_DRAWS = 3


@dataclass
class Outcome:
    lhs: complex
    rhs: complex
    rel_err: float
    tail_estimate: float = 0.0
    radius_used: int = 0
    converged: bool = True
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Constraint:
    text: str
    check: Callable[[dict], tuple[bool, str]]


@dataclass(frozen=True)
class IdentityEntry:
    id: str
    summary: str
    n_default: int
    n_max: int
    tau_kind: str  # "generic", "integer" or "any"
    sampler: Callable
    run: Callable
    constraints: tuple = ()
    n_min: int = 1
    tol: Callable[[dict], float] | None = None

    def default_tol(self, p: dict) -> float:
        return self.tol(p) if self.tol else DEFAULT_TOL

    def violations(self, p: dict, structural: bool = False) -> list[str]:
        """Violated constraints; ``structural`` checks only ``n`` and ``tau``."""
        out = []
        n = p["n"]
        if not self.n_min <= n <= self.n_max:
            out.append(f"{self.n_min} <= n <= {self.n_max} (got n={n})")
            return out
        tau = complex(p["tau"])
        if tau.real <= 0:
            out.append(f"Re(tau) > 0 (got {tau.real:.6g})")
        if self.tau_kind == "generic" and cf.is_positive_integer(tau):
            out.append(f"tau not in Z+ (got tau={_fmt(tau)})")
        if self.tau_kind == "integer" and not cf.is_positive_integer(tau):
            out.append(f"tau in Z+ (got tau={_fmt(tau)})")
        if out or structural:
            return out
        for c in self.constraints:
            ok, seen = c.check(p)
            if not ok:
                out.append(f"{c.text} (got {seen})")
        return out

    def prepare(self, fixed: dict, rng: np.random.Generator) -> dict:
        """Fill missing parameters and validate; raises ConstraintViolated."""
        p = dict(fixed)
        p.setdefault("q", 0.3)
        p.setdefault("n", self.n_default)
        if "tau" not in p:
            p["tau"] = 1.0 if self.tau_kind == "integer" else float(rng.uniform(0.25, 0.6))
        bad = self.violations(p, structural=True)
        if not bad:
            self.sampler(p, rng)
            bad = self.violations(p)
        if bad:
            raise ConstraintViolated(f"{self.id}: " + "; ".join(bad))
        return p


def _fmt(z) -> str:
    z = complex(z)
    return f"{z.real:.6g}" if z.imag == 0 else f"{z.real:.6g}{z.imag:+.6g}j"


# sampling helpers --------------------------------------------------------


def _phase(rng, spread=0.25) -> complex:
    return cmath.exp(1j * rng.uniform(-spread, spread))


def _draw(rng, lo, hi, spread=0.25) -> complex:
    return complex(rng.uniform(lo, hi)) * _phase(rng, spread)


def _t(p) -> complex:
    return cpow(p["q"], p["tau"])


def _alpha(p, rng, ratio=0.3):
    """Real, non-integer alpha with ``|q^alpha| <= ratio``."""
    if "alpha" not in p:
        p["alpha"] = max(0.0, math.log(ratio) / math.log(p["q"])) + rng.uniform(0.1, 0.6)


def _split(p, rng, names, target: float, lo=0.8, hi=1.25):
    """Draw the missing names among ``names`` so their product has modulus ``target``."""
    free = [k for k in names if k not in p]
    if not free:
        return
    fixed = math.prod(abs(p[k]) for k in names if k in p)
    share = (target / fixed) ** (1.0 / len(free))
    for k in free:
        p[k] = share * rng.uniform(lo, hi) * _phase(rng)


def _qbeta_A(p) -> complex:
    """``q^beta`` of the A-type weight, ``beta = 1 - alpha1 - beta1 - 2(n-1)tau - alpha``."""
    q, n = p["q"], p["n"]
    return cpow(q, 1 - complex(p["alpha"]) - 2 * (n - 1) * complex(p["tau"])) / (p["a1"] * p["b1"])


def _points(p, rng, coincide=False):
    """Top up ``xs`` (caller-given points first) to ``N_DRAWS`` random points."""
    n = p["n"]
    pts = list(p.get("xs", []))
    while len(pts) < N_DRAWS:
        x = [_draw(rng, 0.3, 1.2, 0.8) for _ in range(n)]
        if coincide and n >= 2:
            x[1] = x[0]
        pts.append(x)
    p["xs"] = pts


def _pairs(p, rng):
    pairs = list(p.get("pairs", []))
    while len(pairs) < N_DRAWS:
        pairs.append([_draw(rng, 0.3, 0.9, 0.6), _draw(rng, 0.3, 0.9, 0.6)])
    p["pairs"] = pairs


def _P(p) -> complex:
    return p["a1"] * p["a2"] * p["b1"] * p["b2"]


def _selberg_margin(p) -> float:
    """``|q / (a1 a2 b1 b2 t^(2n-2))|``; the bilateral sums need it below 1."""
    return abs(p["q"] / (_P(p) * _t(p) ** (2 * p["n"] - 2)))


# sampler families --------------------------------------------------------


def _s_aomoto(p, rng):
    _alpha(p, rng)
    if "a1" not in p:
        p["a1"] = _draw(rng, 0.6, 1.4)
    if "b1" not in p:
        p["b1"] = _draw(rng, 0.1, 0.5)


def _s_bilateral_A(p, rng, coincide=False):
    _alpha(p, rng)
    q, n = p["q"], p["n"]
    scale = abs(cpow(q, 1 - complex(p["alpha"]) - 2 * (n - 1) * complex(p["tau"])))
    _split(p, rng, ("a1", "b1"), scale / rng.uniform(0.12, 0.3))
    _points(p, rng, coincide)


def _s_dual_A(p, rng):
    q, n, t = p["q"], p["n"], _t(p)
    if "alpha" not in p:
        p["alpha"] = rng.uniform(0.3, 0.8)
    if "b1" not in p:
        p["b1"] = _draw(rng, 0.4, 0.8)
    if "a1" not in p:
        beta = max(rng.uniform(0.5, 1.0), math.log(0.3) / math.log(q))
        p["a1"] = (q * cpow(q, -complex(p["alpha"]) - beta) / (p["b1"] * t ** (2 * n - 2))
                   * _phase(rng))


def _s_macdonald(p, rng):
    _alpha(p, rng, ratio=0.5)
    q, n, t = p["q"], p["n"], _t(p)
    need = 2 * q / (abs(t) ** (2 * n - 2) * abs(cpow(q, p["alpha"])))
    _split(p, rng, ("a1", "b1"), need * rng.uniform(1.5, 3.0))
    _points(p, rng)


def _s_contour(p, rng):
    if "alpha" not in p:
        p["alpha"] = rng.uniform(0.3, 1.0)
    for k in ("a1", "b1"):
        if k not in p:
            p[k] = _draw(rng, 0.3, 0.7)
    p.setdefault("nodes", 2048 if p["n"] == 1 else 512)


def _s_selberg(p, rng, margin=0.4, coincide=False, points=True, xs=False):
    for k, lo, hi in (("a1", 1.5, 3.0), ("a2", 1.5, 3.0), ("b1", 0.8, 1.8), ("b2", 0.8, 1.8)):
        if k not in p:
            p[k] = _draw(rng, lo, hi, 0.2)
            p.setdefault("_free", []).append(k)
    free = p.pop("_free", [])
    if free and _selberg_margin(p) > margin:
        s = (_selberg_margin(p) / margin * rng.uniform(1.0, 1.3)) ** (1.0 / len(free))
        for k in free:
            p[k] *= s
    if points:
        _pairs(p, rng)
        if coincide or xs:
            _points(p, rng, coincide=coincide)


def _s_poly(p, rng):
    for k, lo, hi in (("a1", 0.5, 2.0), ("a2", 0.5, 2.0), ("b1", 0.5, 2.0), ("b2", 0.5, 2.0)):
        if k not in p:
            p[k] = _draw(rng, lo, hi, 0.5)


# constraints -------------------------------------------------------------


def _re_alpha_pos() -> Constraint:
    return Constraint("Re(alpha) > 0", lambda p: (complex(p["alpha"]).real > 0,
                                                  f"{complex(p['alpha']).real:.6g}"))


def _qbeta_lt1() -> Constraint:
    def f(p):
        v = abs(_qbeta_A(p))
        return v < 1, f"|q^beta|={v:.6g}"
    return Constraint("|q^beta| < 1 with beta = 1-alpha1-beta1-2(n-1)tau-alpha", f)


def _selberg_region() -> Constraint:
    def f(p):
        v = abs(_P(p) * _t(p) ** (2 * p["n"] - 2))
        return v > p["q"], f"{v:.6g}"
    return Constraint("|a1 a2 b1 b2 t^(2n-2)| > q", f)


def _abs_lt1(name) -> Constraint:
    def f(p):
        v = abs(_t(p)) if name == "t" else abs(p[name])
        return v < 1, f"|{name}|={v:.6g}"
    return Constraint(f"|{name}| < 1", f)


def _re_beta_pos() -> Constraint:
    def f(p):
        v = math.log(abs(_qbeta_A(p))) / math.log(p["q"])
        return v > 0, f"Re(beta)={v:.6g}"
    return Constraint("Re(beta) > 0 with beta = 1-alpha1-beta1-2(n-1)tau-alpha", f)


def _selberg_unit() -> Constraint:
    def f(p):
        v = abs(_P(p) * _t(p) ** (2 * p["n"] - 2))
        return v > 1, f"{v:.6g}"
    return Constraint("|a1 a2 b1 b2 t^(2n-2)| > 1 (shifted sums stay convergent)", f)


def _mac_qalpha() -> Constraint:
    def f(p):
        v = abs(cpow(p["q"], p["alpha"]))
        return v < 1, f"|q^alpha|={v:.6g}"
    return Constraint("|q^alpha| < 1", f)


def _mac_qbeta() -> Constraint:
    def f(p):
        v = abs(balance_qbeta(_a_spec(p)))
        return v < 1, f"|q^beta|={v:.6g}"
    return Constraint("|q^beta| < 1 with a1 b1 t^(2n-2) q^(alpha+beta) = q", f)


def _coincident() -> Constraint:
    def f(p):
        ok = all(len(x) == p["n"] and any(abs(x[i] - x[j]) <= 1e-15 * abs(x[i])
                                          for i, j in itertools.combinations(range(p["n"]), 2))
                 for x in p["xs"])
        return ok, "points without a repeated coordinate"
    return Constraint("each point x has two equal coordinates", f)


# evaluation helpers ------------------------------------------------------


class _Sums:
    """Runs lattice sums and keeps the worst convergence data."""

    def __init__(self, opts: dict):
        self.max_radius = opts.get("max_radius")
        self.tail = 0.0
        self.radius = 0
        self.converged = True

    def note(self, r: SumResult) -> SumResult:
        self.tail = max(self.tail, r.tail_estimate)
        self.radius = max(self.radius, r.radius_used)
        self.converged = self.converged and r.converged
        return r

    def raw(self, spec, base, region, weight=None) -> SumResult:
        return self.note(jackson_sum(spec, base, region, SUM_TOL, self.max_radius,
                                     weight=weight))

    def __call__(self, spec, base, region, weight=None) -> complex:
        return self.raw(spec, base, region, weight).value

    def outcome(self, pairs, detail=None, rel=None) -> Outcome:
        lhs, rhs, err = _worst(pairs)
        if rel is not None:
            err = max(err, rel)
        return Outcome(lhs, rhs, err, self.tail, self.radius, self.converged, detail or {})


def _rel(lhs, rhs) -> float:
    d = abs(complex(lhs) - complex(rhs))
    m = abs(complex(rhs))
    return d / m if m > 0 else d


def _worst(pairs):
    best = None
    for lhs, rhs in pairs:
        e = _rel(lhs, rhs)
        if best is None or e > best[2] or math.isnan(e):
            best = (complex(lhs), complex(rhs), e)
    return best


def _spread(values) -> float:
    vals = [complex(v) for v in values]
    ref = max(abs(v) for v in vals) or 1.0
    return max((abs(u - v) / ref for u, v in itertools.combinations(vals, 2)), default=0.0)


def _a_spec(p, dual=False) -> WeightSpec:
    return WeightSpec.a_type(p["q"], p["n"], p["alpha"], p["a1"], p["b1"], tau=p["tau"],
                             dual=dual)


def _s_spec(p, dual=False) -> WeightSpec:
    return WeightSpec.selberg(p["q"], p["n"], p["a1"], p["a2"], p["b1"], p["b2"],
                              tau=p["tau"], dual=dual)


# recipes: A-type ---------------------------------------------------------


def _r_aomoto(p, opts):
    s, S = _a_spec(p), _Sums(opts)
    return S.outcome([(S(s, zeta(s), Region.fan(s.n)), cf.aomoto_truncated_rhs(s))])


def _r_bilateral_A(p, opts):
    s, S = _a_spec(p), _Sums(opts)
    pairs = [(S(s, x, Region.full(s.n)), cf.bilateral_A_rhs(s, x)) for x in p["xs"]]
    return S.outcome(pairs, {"points": len(pairs)})


def _r_equal_argument(p, opts):
    s, S = _a_spec(p), _Sums(opts)
    n = s.n
    pairs = [(S(s, [x[0]] * n, Region.full(n)) / math.factorial(n),
              cf.equal_argument_rhs(s, x[0])) for x in p["xs"]]
    return S.outcome(pairs, {"points": len(pairs)})


def _r_ahke(p, opts):
    s, S = _a_spec(p), _Sums(opts)
    n = s.n
    lhs = S(s, [s.a1] * n, Region.full(n)) / math.factorial(n)
    return S.outcome([(lhs, cf.ahke_rhs(s))])


def _vanishing(S, spec, xs):
    worst = None
    for x in xs:
        r = S.raw(spec, x, Region.full(spec.n))
        e = abs(r.value) / r.abs_sum if r.abs_sum > 0 else abs(r.value)
        if worst is None or e > worst[0]:
            worst = (e, r.value)
    return Outcome(worst[1], 0j, worst[0], S.tail, S.radius, S.converged,
                   {"relative_to": "absolute term mass"})


def _r_i_vanishing(p, opts):
    return _vanishing(_Sums(opts), _a_spec(p), p["xs"])


def _r_i_coincidence(p, opts):
    s, S = _a_spec(p), _Sums(opts)
    n, pairs = s.n, []
    for x in p["xs"]:
        lhs = S(s, geometric_block(x[0], s.t, n), Region.ordered(n))
        rhs = S(s, [x[0]] * n, Region.full(n)) / math.factorial(n)
        pairs.append((lhs, rhs))
    return S.outcome(pairs)


def _r_macdonald(p, opts):
    s, S = _a_spec(p), _Sums(opts)
    vals = [S.note(macdonald_constant_sum(s, x, SUM_TOL, max_radius=S.max_radius)).value
            for x in p["xs"]]
    rhs = cf.macdonald_rhs(s)
    spread = _spread(vals)
    return S.outcome([(v, rhs) for v in vals], {"base_spread": spread}, rel=spread)


def _r_contour(p, opts):
    s = _a_spec(p)
    lhs = contour_integral(s, int(p["nodes"]))
    return Outcome(lhs, cf.contour_rhs(s), _rel(lhs, cf.contour_rhs(s)),
                   detail={"nodes": int(p["nodes"])})


def _r_dual_A(p, opts):
    s, S = _a_spec(p), _Sums(opts)
    return S.outcome([(S(s.dual(), zeta_bar(s), Region.fan(s.n)), cf.dual_A_truncated_rhs(s))])


def _r_a_asymptotics(p, opts):
    s = _a_spec(p)
    # corrections are O(q^N); the default N pushes them below 1e-16
    N = int(p.get("N", math.ceil(37 / -math.log(s.q)) + 5))
    pairs = [(cf.asymptotic_ratio(s, N), 1), (cf.asymptotic_ratio(s, N, dual=True), 1)]
    lhs, rhs, err = _worst(pairs)
    return Outcome(lhs, rhs, err, detail={"N": N})


def _r_aomoto_recursion(p, opts):
    s, S = _a_spec(p), _Sums(opts)
    n, base, fan = s.n, zeta(s), Region.fan(s.n)
    prev = S(s, base, fan)
    pairs = [(S(s.shifted("alpha"), base, fan), prev * recursion_factor("alpha_step_A", s))]
    for i in range(1, n + 1):
        cur = S(s, base, fan, weight=lambda zs, i=i: elem_sym(i, zs))
        pairs.append((cur, prev * recursion_factor("aomoto_e", s, i)))
        prev = cur
    return S.outcome(pairs)


def _r_a_connection(p, opts):
    s, S = _a_spec(p), _Sums(opts)
    n, sd = s.n, s.dual()
    z, zb = zeta(s), zeta_bar(s)
    I_z = S(s, z, Region.fan(n))
    Ib_zb = S(sd, zb, Region.fan(n))
    pairs = []
    for x in p["xs"]:
        I_x = S(s, x, Region.full(n))
        hx = h_reg(s, x)
        pairs.append((I_x, I_z * hx / h_reg(s, z) * cf.connection_coeff("A_to_trunc", s, x)))
        pairs.append((I_x, Ib_zb * hx / h_reg(sd, zb) * cf.connection_coeff("A_to_dual", s, x)))
    return S.outcome(pairs)


def _reflect(S, s, pts):
    sd, pairs = s.dual(), []
    for x in pts:
        xi = inverse_point(x)
        pairs.append((S(sd, x, Region.full(s.n)) / h_reg(sd, x),
                      S(s, xi, Region.full(s.n)) / h_reg(s, xi)))
    return S.outcome(pairs)


def _r_reflect_A(p, opts):
    # _reflect compares spec.dual() at x with spec at 1/x, so pass the dual spec
    s, S = _a_spec(p, dual=True), _Sums(opts)
    return _reflect(S, s, p["xs"])


# recipes: Selberg --------------------------------------------------------


def _sum_i(S, s, x1, x2, coeff):
    n, t, total = s.n, s.t, 0j
    for i in range(n + 1):
        c = coeff(i)
        if c != 0:
            total += c * S(s, zeta_i(i, x1, x2, t, n), Region.ordered(n, i))
    return total


def _r_main1(p, opts):
    s, S = _s_spec(p), _Sums(opts)
    pairs, ratios = [], []
    for x1, x2 in p["pairs"]:
        lhs = _sum_i(S, s, x1, x2, lambda i: cf.selberg_lhs_coeff(i, x1, x2, s))
        pairs.append((lhs, cf.selberg_main_rhs(s, x1, x2)))
        ratios.append(lhs / cf.selberg_theta_product(s, x1, x2))
    spread = _spread(ratios)
    return S.outcome(pairs, {"constant_spread": spread}, rel=spread)


def _r_main1_integer(p, opts):
    s, S = _s_spec(p), _Sums(opts)
    pairs = [(_sum_i(S, s, x1, x2, lambda i: (-1) ** i), cf.selberg_integer_tau_rhs(s, x1, x2))
             for x1, x2 in p["pairs"]]
    return S.outcome(pairs)


def _r_j_coincidence(p, opts):
    s, S = _s_spec(p), _Sums(opts)
    n, pairs = s.n, []
    x1, x2 = p["pairs"][0]
    for i in range(n + 1):
        lhs = S(s, zeta_i(i, x1, x2, s.t, n), Region.ordered(n, i))
        rhs = S(s, [x1] * i + [x2] * (n - i), Region.full(n))
        pairs.append((lhs, rhs / (math.factorial(i) * math.factorial(n - i))))
    return S.outcome(pairs)


def _r_j_vanishing(p, opts):
    return _vanishing(_Sums(opts), _s_spec(p), p["xs"])


def _r_tvs(p, opts):
    s, S = _s_spec(p), _Sums(opts)
    lhs = _sum_i(S, s, s.a1, s.a2, lambda i: cf.selberg_lhs_coeff(i, s.a1, s.a2, s))
    return S.outcome([(lhs, cf.tvs_rhs(s))])


def _r_evans(p, opts):
    s, S = _s_spec(p), _Sums(opts)
    n, tau = s.n, cf.integer_tau(s)
    sign = (-1) ** (tau * math.comb(n, 2)) * s.q ** (-math.comb(tau, 2) * math.comb(n, 2))
    lhs = _sum_i(S, s, s.a1, s.a2, lambda i: (-1) ** i) / sign
    return S.outcome([(lhs, cf.askey_evans_rhs(s))])


def _r_main2(p, opts):
    s, S = _s_spec(p), _Sums(opts)
    n, rhs, vals = s.n, cf.selberg_C1(s), []
    for x1, x2 in p["pairs"]:
        total = 0j
        for i in range(n + 1):
            z = zeta_i(i, x1, x2, s.t, n)
            total += S(s, z, Region.ordered(n, i)) / h_reg(s, z) * H_coeff(i, x1, x2, s)
        vals.append(total)
    return S.outcome([(v, rhs) for v in vals])


def _r_kronecker(p, opts):
    s = _s_spec(p)
    n, t = s.n, s.t
    pairs = []
    for j in range(n + 1):
        x1, x2 = 1 / s.b1 * t ** (-(j - 1)), 1 / s.b2 * t ** (-(n - j - 1))
        for i in range(n + 1):
            pairs.append((H_coeff(i, x1, x2, s), 1.0 if i == j else 0.0))
    lhs, rhs, _ = _worst(pairs)
    err = max(abs(l - r) for l, r in pairs)
    return Outcome(lhs, rhs, err, detail={"relative_to": "unit"})


def _r_c1_barJ(p, opts):
    s, S = _s_spec(p, dual=True), _Sums(opts)
    n, rhs, vals = s.n, cf.selberg_C1(s), []
    for i in range(n + 1):
        z = zeta_i(i, s.b1, s.b2, s.t, n)
        vals.append(S(s, z, Region.fan(n, i)) / h_reg(s, z))
    spread = _spread(vals)
    return S.outcome([(v, rhs) for v in vals], {"index_spread": spread}, rel=spread)


def _r_j_to_i(p, opts):
    s, S = _s_spec(p, dual=True), _Sums(opts)
    n, zb = s.n, zeta_bar(s)
    sa = WeightSpec.a_type(s.q, n, s.alpha2 + s.beta2, s.a1, s.b1, tau=s.tau, dual=True)
    coeff = cf.connection_coeff("J_to_I", s)
    lhs = S(s, zb, Region.fan(n))
    return S.outcome([(lhs, S(sa, zb, Region.fan(n)) * coeff),
                      (lhs, cf.dual_A_truncated_rhs(sa) * coeff)])


def _r_qdiff(p, opts):
    s, S = _s_spec(p, dual=True), _Sums(opts)
    n, pairs = s.n, []
    for k in range(n + 1):
        base = zeta_i(k, s.b1, s.b2, s.t, n)
        J0 = S(s, base, Region.fan(n, k))
        for name, kind, j in (("a1", "Ta_total", 1), ("a2", "Ta_total", 2),
                              ("b1", "Tb_total", 1), ("b2", "Tb_total", 2)):
            sh = s.shifted(name)
            J1 = S(sh, zeta_i(k, sh.b1, sh.b2, sh.t, n), Region.fan(n, k))
            pairs.append((J1, recursion_factor(kind, s, j=j) * J0))
    return S.outcome(pairs)


def _r_reflect_S(p, opts):
    return _reflect(_Sums(opts), _s_spec(p, dual=True), p["xs"])


def _r_se_recursion(p, opts):
    s, S = _s_spec(p, dual=True), _Sums(opts)
    n, t, pairs = s.n, s.t, []
    for k in range(n + 1):
        base, fan = zeta_i(k, s.b1, s.b2, t, n), Region.fan(n, k)
        J0 = S(s, base, fan)
        for j, (a, b) in enumerate(((s.a1, s.b1), (s.a2, s.b2)), start=1):
            prev_a = prev_b = J0
            for i in range(1, n + 1):
                cur_a = S(s, base, fan, weight=lambda zs, i=i, a=a: e_shifted(i, a, t, zs))
                cur_b = S(s, base, fan, weight=lambda zs, i=i, b=b: e_shifted(i, 1 / b, 1 / t, zs))
                pairs.append((cur_a, prev_a * recursion_factor("a_shift", s, i, j)))
                pairs.append((cur_b, prev_b * recursion_factor("b_shift", s, i, j)))
                prev_a, prev_b = cur_a, cur_b
    return S.outcome(pairs)


def _r_nabla_zero(p, opts):
    s, S = _s_spec(p, dual=True), _Sums(opts)
    n, worst = s.n, None
    for k in range(n + 1):
        base, fan = zeta_i(k, s.b1, s.b2, s.t, n), Region.fan(n, k)
        for i in range(1, n + 1):
            r = S.raw(s, base, fan,
                      weight=lambda zs, i=i: appendix_sides(i, s, zs)[0] / vandermonde(zs))
            e = abs(r.value) / r.abs_sum if r.abs_sum > 0 else abs(r.value)
            if worst is None or e > worst[0]:
                worst = (e, r.value)
    return Outcome(worst[1], 0j, worst[0], S.tail, S.radius, S.converged,
                   {"relative_to": "absolute term mass"})


# recipes: polynomial identities -----------------------------------------


def _r_appendix(p, opts):
    s = _s_spec(p, dual=True)
    rng = np.random.default_rng(p["point_seed"])
    worst = None
    for i in range(1, s.n + 1):
        for _ in range(int(p.get("points", 50))):
            z = list(rng.normal(size=s.n) + 1j * rng.normal(size=s.n))
            e = check_appendix_identity(i, s, z)
            if worst is None or e > worst[0]:
                worst = (e, *appendix_sides(i, s, z))
    return Outcome(worst[1], worst[2], worst[0], detail={"relative_to": "max(|lhs|,|rhs|,1)"})


def _ks_scale(r, a, t, z) -> float:
    total = 0.0
    for idx in itertools.combinations(range(len(z)), r):
        total += math.prod(abs(z[i] - a * t ** (i - k)) for k, i in enumerate(idx))
    return total


def _r_knop_sahi(p, opts):
    n, a, t = p["n"], p["a1"], _t(p)
    rng = np.random.default_rng(p["point_seed"])
    worst = (0.0, 0j)
    for j in range(n):
        free = list(rng.normal(size=j) + 1j * rng.normal(size=j))
        z = free + [a * t**k for k in range(n - j)]
        for i in range(j + 1, n + 1):
            v = E_poly(i, a, t, z)
            scale = _ks_scale(i, a, t, z)
            e = abs(v) / scale if scale > 0 else abs(v)
            if e >= worst[0]:
                worst = (e, v)
    return Outcome(worst[1], 0j, worst[0], detail={"relative_to": "term scale"})


def _r_graded_limit(p, opts):
    s = _s_spec(p, dual=True)
    scale = float(p.get("scale", 1e6))
    worst = max(vanishing_asymptotic_check(i, j, s, scale)
                for i in range(s.n + 1) for j in range(s.n + 1))
    return Outcome(complex(worst), 0j, worst, detail={"scale": scale})


def _seeded(sampler):
    def run(p, rng):
        sampler(p, rng)
        p.setdefault("point_seed", int(rng.integers(2**31)))
    return run


# registry ----------------------------------------------------------------

_A_BIL = (_re_alpha_pos(), _qbeta_lt1())

_ENTRIES = [
    IdentityEntry("aomoto", "truncated A-type sum at zeta equals its product", 2, 3, "any",
                  _s_aomoto, _r_aomoto, (_re_alpha_pos(),)),
    IdentityEntry("aomoto_recursion", "e_i weights and alpha -> alpha+1 recursions at zeta",
                  2, 3, "any", _s_aomoto, _r_aomoto_recursion, (_re_alpha_pos(),)),
    IdentityEntry("a_asymptotics", "truncated A-type and dual products along alpha -> alpha+-N",
                  2, 3, "any", _s_dual_A, _r_a_asymptotics),
    IdentityEntry("bilateral_A", "bilateral A-type sum equals c0 times a theta ratio", 2, 3,
                  "generic", _s_bilateral_A, _r_bilateral_A, _A_BIL),
    IdentityEntry("equal_argument", "bilateral A-type sum at (x,...,x), tau in Z+", 2, 3,
                  "integer", _s_bilateral_A, _r_equal_argument, _A_BIL),
    IdentityEntry("ahke", "A-type sum at (a1,...,a1), tau in Z+", 2, 3, "integer",
                  _s_aomoto, _r_ahke, (_re_alpha_pos(),)),
    IdentityEntry("i_vanishing", "A-type sum vanishes at coincident coordinates", 2, 3,
                  "generic", lambda p, r: _s_bilateral_A(p, r, coincide=True), _r_i_vanishing,
                  _A_BIL + (_coincident(),), n_min=2),
    IdentityEntry("i_coincidence", "A-type sum at (x, xt, ...) equals sum at (x,...,x)/n!",
                  2, 3, "integer", _s_bilateral_A, _r_i_coincidence, _A_BIL, n_min=2),
    IdentityEntry("a_connection", "bilateral A-type sum from the truncated and dual sums",
                  2, 3, "generic", _s_bilateral_A, _r_a_connection, _A_BIL),
    IdentityEntry("reflect_A", "regularized A-type sum equals the dual one at 1/x", 2, 3,
                  "generic", _s_bilateral_A, _r_reflect_A, _A_BIL),
    IdentityEntry("dual_A", "truncated dual A-type sum at zeta_bar equals its product", 2, 3,
                  "any", _s_dual_A, _r_dual_A,
                  (_re_beta_pos(),)),
    IdentityEntry("macdonald", "balanced full-lattice sum is a constant product", 2, 3, "any",
                  _s_macdonald, _r_macdonald, (_mac_qalpha(), _mac_qbeta())),
    IdentityEntry("contour", "torus integral of the balanced weight", 1, 2, "any",
                  _s_contour, _r_contour, (_abs_lt1("a1"), _abs_lt1("b1"), _abs_lt1("t")),
                  tol=lambda p: 1e-6 if p["n"] == 2 else DEFAULT_TOL),
    IdentityEntry("main1", "bilateral Selberg combination equals C0 times a theta product",
                  2, 3, "generic", _s_selberg, _r_main1, (_selberg_region(),)),
    IdentityEntry("main1_integer", "alternating Selberg combination, tau in Z+", 2, 3,
                  "integer", lambda p, r: _s_selberg(p, r, margin=0.1), _r_main1_integer,
                  (_selberg_region(),)),
    IdentityEntry("j_coincidence", "Selberg sum at zeta_i equals the repeated-point sum",
                  2, 3, "integer", lambda p, r: _s_selberg(p, r, margin=0.1), _r_j_coincidence,
                  (_selberg_region(),)),
    IdentityEntry("j_vanishing", "Selberg sum vanishes at coincident coordinates", 2, 3,
                  "generic", lambda p, r: _s_selberg(p, r, coincide=True), _r_j_vanishing,
                  (_selberg_region(), _coincident()), n_min=2),
    IdentityEntry("tvs", "truncated Selberg combination at (a1, a2)", 2, 3, "any",
                  lambda p, r: _s_selberg(p, r, margin=0.4, points=False), _r_tvs),
    IdentityEntry("evans", "alternating truncated combination at (a1, a2), tau in Z+", 2, 3,
                  "integer", lambda p, r: _s_selberg(p, r, margin=0.4, points=False),
                  _r_evans),
    IdentityEntry("main2", "regularized Selberg combination with H_i equals C1", 2, 3,
                  "generic", _s_selberg, _r_main2, (_selberg_region(),)),
    IdentityEntry("kronecker", "H_i at the special points is the Kronecker delta", 2, 4,
                  "generic", lambda p, r: _s_selberg(p, r, points=False), _r_kronecker),
    IdentityEntry("c1_barJ", "regularized dual Selberg sums at zeta_i(b1,b2) all equal C1",
                  2, 3, "generic", _s_selberg, _r_c1_barJ, (_selberg_region(),)),
    IdentityEntry("j_to_i", "truncated dual Selberg sum from the dual A-type sum", 2, 3,
                  "any", lambda p, r: _s_selberg(p, r, points=False), _r_j_to_i,
                  (_selberg_region(),)),
    IdentityEntry("qdiff", "q-shifts of a_j and b_j on the truncated dual Selberg sums",
                  2, 3, "generic", lambda p, r: _s_selberg(p, r, margin=0.04, points=False),
                  _r_qdiff, (_selberg_unit(),)),
    IdentityEntry("reflect_S", "regularized dual Selberg sum equals the primal one at 1/x",
                  2, 3, "generic", lambda p, r: _s_selberg(p, r, xs=True), _r_reflect_S,
                  (_selberg_region(),)),
    IdentityEntry("se_recursion", "shifted-E weighted dual Selberg sums step by step",
                  2, 3, "generic", lambda p, r: _s_selberg(p, r, margin=0.04, points=False),
                  _r_se_recursion, (_selberg_unit(),)),
    IdentityEntry("nabla_zero", "summation by parts: sums of skew-symmetrized nabla vanish",
                  2, 3, "generic", lambda p, r: _s_selberg(p, r, margin=0.04, points=False),
                  _r_nabla_zero, (_selberg_unit(),)),
    IdentityEntry("appendix", "skew-symmetrized nabla identity at random points", 3, 4,
                  "any", _seeded(_s_poly), _r_appendix, tol=lambda p: 1e-9),
    IdentityEntry("knop_sahi", "E_i(a;t;zeta_j) = 0 for j < i", 4, 6, "any",
                  _seeded(_s_poly), _r_knop_sahi, tol=lambda p: 1e-12),
    IdentityEntry("graded_limit", "graded-point limits of E_i times the difference product",
                  3, 4, "any", _s_poly, _r_graded_limit, tol=lambda p: 1e-4),
]

REGISTRY: dict[str, IdentityEntry] = {e.id: e for e in _ENTRIES}
IDENTITY_IDS: tuple[str, ...] = tuple(sorted(REGISTRY))


def get(identity_id: str) -> IdentityEntry:
    try:
        return REGISTRY[identity_id]
    except KeyError:
        raise KeyError(f"unknown identity {identity_id!r}") from None


__all__ = ["Outcome", "Constraint", "IdentityEntry", "REGISTRY", "IDENTITY_IDS", "get",
           "DEFAULT_TOL", "SUM_TOL"]
