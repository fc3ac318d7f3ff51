"""Command line driver: ``qselberg eval|check|sweep|contour``.

Exit codes: 0 all pass, 1 any failure, 2 config/usage error, 3 a sum did not
converge, 4 parameters violate an identity's constraints.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable

import numpy as np

from . import closed_forms as cf
from .config import RunConfig, grid_points, load_config, normalize_params
from .errors import (
    BalanceViolated,
    ConfigError,
    ConstraintViolated,
    DimensionUnsupported,
    NotConverged,
    PoleOnContour,
    QSelbergError,
    TauIsPositiveInteger,
)
from .lattice_sum import Region, contour_integral, jackson_sum, macdonald_constant_sum
from .registry import IDENTITY_IDS, REGISTRY, SUM_TOL
from .weights import Family, WeightSpec, zeta, zeta_bar, zeta_i

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NOCONV, EXIT_CONSTRAINT = 0, 1, 2, 3, 4
PARAM_ORDER = ("q", "n", "tau", "alpha", "a1", "a2", "b1", "b2", "xs", "pairs", "nodes", "N",
               "points", "scale", "point_seed")
CSV_COLUMNS = ("id", "index", "status", "pass", "rel_err", "tol", "lhs_re", "lhs_im",
               "rhs_re", "rhs_im", "tail_estimate", "radius_used", "converged", "params")


# JSON helpers -------------------------------------------------------------


def jsonable(v):
    """Complex -> [re, im]; non-finite floats -> strings; numpy scalars -> Python."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [jsonable(v.real), jsonable(v.imag)]
    if isinstance(v, dict):
        return {k: jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    return v


def ordered_params(p: dict) -> dict:
    keys = [k for k in PARAM_ORDER if k in p] + sorted(k for k in p if k not in PARAM_ORDER)
    return {k: jsonable(p[k]) for k in keys}


def dumps(row: dict) -> str:
    return json.dumps(jsonable(row), ensure_ascii=False, allow_nan=False)


# rows ---------------------------------------------------------------------


def _seed_rng(seed: int, index: int, identity: str) -> np.random.Generator:
    return np.random.default_rng([seed, index, zlib.crc32(identity.encode())])


def evaluate_task(task: dict) -> dict:
    """Run one prepared identity check; safe to call in a worker process."""
    entry = REGISTRY[task["id"]]
    params, tol = task["params"], task["tol"]
    start = time.perf_counter()
    row = {"id": entry.id, "index": task["index"]}
    try:
        out = entry.run(params, {"max_radius": task["max_radius"]})
    except NotConverged as exc:
        row.update(status="NONCONVERGED", **{"pass": False}, error=str(exc))
    except QSelbergError as exc:
        row.update(status="FAIL", **{"pass": False}, error=f"{type(exc).__name__}: {exc}")
    else:
        ok = out.converged and out.rel_err <= tol
        status = "PASS" if ok else ("NONCONVERGED" if not out.converged else "FAIL")
        row.update(status=status, **{"pass": ok}, rel_err=out.rel_err, tol=tol,
                   lhs=out.lhs, rhs=out.rhs, tail_estimate=out.tail_estimate,
                   radius_used=out.radius_used, converged=out.converged)
        if out.detail:
            row["detail"] = out.detail
    row["params"] = ordered_params(params)
    if task.get("timing"):
        row["wall_time"] = time.perf_counter() - start
    return row


def run_tasks(tasks: list[dict], workers: int) -> list[dict]:
    if workers <= 1 or len(tasks) <= 1:
        return [evaluate_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate_task, tasks))


def skipped_row(identity: str, index: int, reason: str, params: dict) -> dict:
    return {"id": identity, "index": index, "status": "SKIPPED", "pass": None,
            "reason": reason, "params": ordered_params(params)}


def format_rows(rows: Iterable[dict], fmt: str) -> str:
    rows = list(rows)
    if fmt == "json":
        return "".join(dumps(r) + "\n" for r in rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        parts = []
        for key in ("lhs", "rhs"):
            z = r.get(key)
            parts += ["", ""] if z is None else [complex(z).real, complex(z).imag]
        w.writerow([r["id"], r["index"], r["status"], "" if r["pass"] is None else r["pass"],
                    r.get("rel_err", ""), r.get("tol", ""), *parts,
                    r.get("tail_estimate", ""), r.get("radius_used", ""),
                    r.get("converged", ""), json.dumps(r["params"], allow_nan=False)])
    return buf.getvalue()


def exit_code(rows: list[dict]) -> int:
    statuses = {r["status"] for r in rows}
    if "NONCONVERGED" in statuses:
        return EXIT_NOCONV
    if "FAIL" in statuses:
        return EXIT_FAIL
    return EXIT_OK


def summary(command: str, rows: list[dict]) -> str:
    count = {s: sum(r["status"] == s for r in rows)
             for s in ("PASS", "FAIL", "NONCONVERGED", "SKIPPED")}
    return (f"qselberg {command}: {len(rows)} rows, {count['PASS']} passed, {count['FAIL']} "
            f"failed, {count['NONCONVERGED']} not converged, {count['SKIPPED']} skipped")


# commands -----------------------------------------------------------------


def _tol(entry, params, cfg: RunConfig, args) -> float:
    if args.tol is not None:
        return args.tol
    if cfg.tol is not None:
        return cfg.tol
    return entry.default_tol(params)


def _radius(cfg: RunConfig, args):
    return args.max_radius if args.max_radius is not None else cfg.max_radius


def _seed(cfg: RunConfig, args) -> int:
    return args.seed if args.seed is not None else cfg.seed


def _task(entry, index, params, cfg, args) -> dict:
    return {"id": entry.id, "index": index, "params": params,
            "tol": _tol(entry, params, cfg, args), "max_radius": _radius(cfg, args),
            "timing": args.timing}


def cmd_check(cfg: RunConfig, args, ids=None) -> tuple[int, list[dict]]:
    ids = ids or cfg.identities or list(IDENTITY_IDS)
    seed, tasks, errors = _seed(cfg, args), [], []
    for identity in ids:
        entry = REGISTRY[identity]
        try:
            params = entry.prepare(cfg.params, _seed_rng(seed, 0, identity))
        except ConstraintViolated as exc:
            errors.append(str(exc))
            continue
        tasks.append(_task(entry, 0, params, cfg, args))
    if errors:
        for e in errors:
            print(f"constraint violated: {e}", file=sys.stderr)
        return EXIT_CONSTRAINT, []
    rows = run_tasks(tasks, args.workers)
    return exit_code(rows), rows


def cmd_sweep(cfg: RunConfig, args) -> tuple[int, list[dict]]:
    ids = cfg.identities or list(IDENTITY_IDS)
    seed = _seed(cfg, args)
    slots: list[dict | None] = []
    tasks = []
    for identity in sorted(ids):
        entry = REGISTRY[identity]
        for index, values in enumerate(grid_points(cfg)):
            fixed = normalize_params({**cfg.raw, **values})
            try:
                params = entry.prepare(fixed, _seed_rng(seed, index, identity))
            except ConstraintViolated as exc:
                slots.append(skipped_row(identity, index, str(exc), fixed))
                continue
            slots.append(None)
            tasks.append(_task(entry, index, params, cfg, args))
    done = iter(run_tasks(tasks, args.workers))
    rows = [s if s is not None else next(done) for s in slots]
    return exit_code(rows), rows


def cmd_contour(cfg: RunConfig, args) -> tuple[int, list[dict]]:
    return cmd_check(cfg, args, ids=["contour"])


# eval ---------------------------------------------------------------------

_A_FORMS = {
    "aomoto_truncated_rhs": cf.aomoto_truncated_rhs, "c0": cf.c0, "c1": cf.c1,
    "ahke_rhs": cf.ahke_rhs, "dual_A_truncated_rhs": cf.dual_A_truncated_rhs,
    "macdonald_rhs": cf.macdonald_rhs, "contour_rhs": cf.contour_rhs,
}
_A_X_FORMS = {"bilateral_A_rhs": cf.bilateral_A_rhs, "regularized_A_rhs": cf.regularized_A_rhs}
_S_FORMS = {
    "selberg_C0": cf.selberg_C0, "selberg_C1": cf.selberg_C1, "tvs_rhs": cf.tvs_rhs,
    "askey_evans_rhs": cf.askey_evans_rhs,
}
_S_X_FORMS = {"selberg_main_rhs": cf.selberg_main_rhs,
              "selberg_integer_tau_rhs": cf.selberg_integer_tau_rhs}
EVALUABLE = tuple(sorted([*_A_FORMS, *_A_X_FORMS, "equal_argument_rhs", *_S_FORMS,
                          *_S_X_FORMS, "jackson_sum", "macdonald_constant_sum",
                          "contour_integral"]))


def _need(p: dict, *names):
    for k in names:
        if k not in p:
            raise ConfigError(f"field '{k}': required for this evaluation")


def _spec(p: dict, family: str) -> WeightSpec:
    fam = Family(family)
    _need(p, "q", "n", "tau", "a1", "b1")
    if fam in (Family.A, Family.A_DUAL):
        _need(p, "alpha")
        return WeightSpec.a_type(p["q"], p["n"], p["alpha"], p["a1"], p["b1"], tau=p["tau"],
                                 dual=fam is Family.A_DUAL)
    _need(p, "a2", "b2")
    return WeightSpec.selberg(p["q"], p["n"], p["a1"], p["a2"], p["b1"], p["b2"],
                              tau=p["tau"], dual=fam is Family.SELBERG_DUAL)


def _sum_base(p: dict, ev: dict, spec: WeightSpec):
    base = ev.get("base", "x" if "xs" in p else "zeta")
    n = spec.n
    if base == "x":
        _need(p, "x")
        return p["xs"][0], Region.full(n)
    if base == "zeta":
        return zeta(spec), Region.fan(n)
    if base == "zeta_bar":
        return zeta_bar(spec), Region.fan(n)
    if base == "zeta_i":
        if "i" not in ev:
            raise ConfigError("field 'i': required for base 'zeta_i'")
        i = ev["i"]
        if i > n:
            raise ConfigError(f"field 'i': must be <= n={n}")
        if "pairs" in p:
            x1, x2 = p["pairs"][0]
            return zeta_i(i, x1, x2, spec.t, n), Region.ordered(n, i)
        return zeta_i(i, spec.b1, spec.b2, spec.t, n), Region.fan(n, i)
    raise ConfigError(f"field 'base': unknown base {base!r} (x, zeta, zeta_bar, zeta_i)")


def _region(ev: dict, default: Region, n: int) -> Region:
    name = ev.get("region")
    if name is None:
        return default
    i = ev.get("i", n)
    if i > n:
        raise ConfigError(f"field 'i': must be <= n={n}")
    try:
        return {"fan": Region.fan, "ordered": Region.ordered}[name](n, i) \
            if name != "full" else Region.full(n)
    except KeyError:
        raise ConfigError(f"field 'region': unknown region {name!r} (fan, full, ordered)")


def evaluate_quantity(cfg: RunConfig, args) -> dict:
    ev, p = cfg.evaluate, cfg.params
    name = ev.get("evaluate")
    if name is None:
        raise ConfigError("field 'evaluate': required by the eval command")
    if name not in EVALUABLE:
        raise ConfigError(f"field 'evaluate': unknown quantity {name!r}")
    out = {"quantity": name}
    if name in _A_FORMS:
        out["value"] = _A_FORMS[name](_spec(p, "A"))
    elif name in _A_X_FORMS:
        _need(p, "x")
        out["value"] = _A_X_FORMS[name](_spec(p, "A"), p["xs"][0])
    elif name == "equal_argument_rhs":
        _need(p, "x1")
        out["value"] = cf.equal_argument_rhs(_spec(p, "A"), p["pairs"][0][0])
    elif name in _S_FORMS:
        out["value"] = _S_FORMS[name](_spec(p, "Selberg"))
    elif name in _S_X_FORMS:
        _need(p, "pairs")
        x1, x2 = p["pairs"][0]
        out["value"] = _S_X_FORMS[name](_spec(p, "Selberg"), x1, x2)
    elif name == "contour_integral":
        _need(p, "nodes")
        out["value"] = contour_integral(_spec(p, "A"), p["nodes"])
    else:
        radius = _radius(cfg, args)
        if name == "macdonald_constant_sum":
            _need(p, "x")
            res = macdonald_constant_sum(_spec(p, "A"), p["xs"][0], SUM_TOL, max_radius=radius)
        else:
            family = ev.get("family", "A")
            try:
                spec = _spec(p, family)
            except ValueError:
                raise ConfigError(f"field 'family': unknown family {family!r}") from None
            base, region = _sum_base(p, ev, spec)
            res = jackson_sum(spec, base, _region(ev, region, spec.n), SUM_TOL, radius)
        out.update(value=res.value, tail_estimate=res.tail_estimate,
                   radius_used=res.radius_used, terms=res.terms, converged=res.converged)
    out["params"] = ordered_params(p)
    return out


def cmd_eval(cfg: RunConfig, args) -> tuple[int, list[dict]]:
    try:
        row = evaluate_quantity(cfg, args)
    except (ConstraintViolated, PoleOnContour, BalanceViolated, DimensionUnsupported,
            TauIsPositiveInteger) as exc:
        print(f"constraint violated: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT, []
    except ConfigError:
        raise
    except QSelbergError as exc:
        print(f"evaluation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL, []
    code = EXIT_NOCONV if row.get("converged") is False else EXIT_OK
    return code, [row]


# entry point --------------------------------------------------------------


def _workers(value) -> int:
    if value is not None:
        return value
    env = os.environ.get("QSELBERG_WORKERS")
    if env is None or env == "":
        return 1
    try:
        w = int(env)
    except ValueError:
        raise ConfigError(f"QSELBERG_WORKERS must be an integer, got {env!r}") from None
    if w < 1:
        raise ConfigError("QSELBERG_WORKERS must be >= 1")
    return w


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qselberg", description=(
        "Evaluate bilateral q-Selberg Jackson sums and check their closed forms."))
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "eval": "evaluate one sum or closed form named by the config field 'evaluate'",
        "check": "check identities at one sampled parameter point",
        "sweep": "check identities over the cartesian grid in the config field 'grid'",
        "contour": "compare the torus quadrature with its product value",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text, description=text)
        sp.add_argument("--config", required=True, help="JSON run configuration")
        sp.add_argument("--tol", type=float, help="relative tolerance for pass/fail")
        sp.add_argument("--max-radius", type=int, help="lattice shell cap for every sum")
        sp.add_argument("--workers", type=int, help="worker processes (env QSELBERG_WORKERS)")
        sp.add_argument("--seed", type=int, help="sampler seed (overrides the config)")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--timing", action="store_true", help="add wall_time to each row")
    return parser


def _write(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.tol is not None and not args.tol > 0:
            raise ConfigError("--tol must be positive")
        if args.max_radius is not None and args.max_radius < 4:
            raise ConfigError("--max-radius must be >= 4")
        if args.seed is not None and args.seed < 0:
            raise ConfigError("--seed must be >= 0")
        args.workers = _workers(args.workers)
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        cfg = load_config(args.config)
        command = {"eval": cmd_eval, "check": cmd_check, "sweep": cmd_sweep,
                   "contour": cmd_contour}[args.command]
        code, rows = command(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if rows:
        _write(format_rows(rows, args.format) if args.command != "eval"
               else _format_eval(rows[0], args.format), args.out)
    if args.command in ("check", "sweep", "contour") and (rows or code == EXIT_OK):
        print(summary(args.command, rows), file=sys.stderr)
    return code


def _format_eval(row: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(row) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    keys = ["quantity", "value_re", "value_im", "tail_estimate", "radius_used", "terms",
            "converged", "params"]
    w.writerow(keys)
    v = complex(row["value"])
    w.writerow([row["quantity"], v.real, v.imag, row.get("tail_estimate", ""),
                row.get("radius_used", ""), row.get("terms", ""), row.get("converged", ""),
                json.dumps(row["params"], allow_nan=False)])
    return buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
