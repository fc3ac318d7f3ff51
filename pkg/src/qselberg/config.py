"""Run-configuration parsing for the command line driver.

A config is a JSON object. Complex numbers are written as ``[re, im]`` (a
bare number is read as real). Every error names the offending field.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .qkernel import QContext, q_exponent
from .registry import REGISTRY

COMPLEX_FIELDS = ("tau", "t", "alpha", "a1", "a2", "b1", "b2", "x1", "x2")
PARAM_FIELDS = ("q", "n", "tau", "t", "alpha", "a1", "a2", "b1", "b2", "x", "x1", "x2",
                "nodes", "N", "points", "scale")
EVAL_FIELDS = ("evaluate", "family", "base", "region", "i")
RUN_FIELDS = ("tol", "max_radius", "seed", "identities", "grid")
KNOWN = set(PARAM_FIELDS) | set(EVAL_FIELDS) | set(RUN_FIELDS)


@dataclass
class RunConfig:
    raw: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    identities: list[str] | None = None
    grid: dict[str, list] = field(default_factory=dict)
    tol: float | None = None
    max_radius: int | None = None
    seed: int = 0
    evaluate: dict = field(default_factory=dict)


def parse_complex(value, name: str) -> complex:
    if isinstance(value, bool):
        raise ConfigError(f"field '{name}': expected a number or [re, im], got {value!r}")
    if isinstance(value, (int, float)):
        z = complex(value)
    elif (isinstance(value, list) and len(value) == 2
          and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        z = complex(value[0], value[1])
    else:
        raise ConfigError(f"field '{name}': expected a number or [re, im], got {value!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ConfigError(f"field '{name}': value must be finite")
    return z


def _int(value, name: str, lo: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"field '{name}': expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise ConfigError(f"field '{name}': must be >= {lo}, got {value}")
    return value


def _real(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{name}': expected a real number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"field '{name}': value must be finite")
    return float(value)


def _point(value, name: str) -> list[complex]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"field '{name}': expected a non-empty list of coordinates")
    pt = [parse_complex(v, f"{name}[{k}]") for k, v in enumerate(value)]
    if any(c == 0 for c in pt):
        raise ConfigError(f"field '{name}': coordinates must be nonzero")
    return pt


def parse_param(name: str, value):
    """Parse one parameter field."""
    if name == "q":
        q = _real(value, name)
        if not 0 < q < 1:
            raise ConfigError(f"field 'q': must lie in (0, 1), got {q}")
        return q
    if name in ("n", "nodes", "N", "points"):
        return _int(value, name, lo=1)
    if name == "scale":
        return _real(value, name)
    if name == "x":
        return _point(value, name)
    if name in COMPLEX_FIELDS:
        z = parse_complex(value, name)
        if name in ("a1", "a2", "b1", "b2", "x1", "x2", "t") and z == 0:
            raise ConfigError(f"field '{name}': must be nonzero")
        return z
    raise ConfigError(f"unknown field '{name}'")


def _simplify(z: complex):
    return z.real if isinstance(z, complex) and z.imag == 0 else z


def normalize_params(raw: dict) -> dict:
    """Resolve ``t`` into ``tau`` and ``x``/``x1``/``x2`` into point lists."""
    p = dict(raw)
    if "t" in p:
        if "tau" in p:
            raise ConfigError("fields 'tau' and 't': give only one of them")
        q = p.get("q", 0.3)
        p["tau"] = _simplify(q_exponent(p.pop("t"), QContext(q)))
    for k in ("tau", "alpha"):
        if k in p:
            p[k] = _simplify(p[k])
    if "x" in p:
        x = p.pop("x")
        if "n" in p and len(x) != p["n"]:
            raise ConfigError(f"field 'x': has {len(x)} coordinates but n={p['n']}")
        p.setdefault("n", len(x))
        p["xs"] = [x]
    if ("x1" in p) != ("x2" in p):
        raise ConfigError("fields 'x1'/'x2': give both or neither")
    if "x1" in p:
        p["pairs"] = [[p.pop("x1"), p.pop("x2")]]
    return p


def parse_config(data) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    for key in data:
        if key not in KNOWN:
            raise ConfigError(f"unknown field '{key}'")
    cfg = RunConfig()
    raw = {k: parse_param(k, data[k]) for k in PARAM_FIELDS if k in data}
    if "tol" in data:
        cfg.tol = _real(data["tol"], "tol")
        if cfg.tol <= 0:
            raise ConfigError("field 'tol': must be positive")
    if "max_radius" in data:
        cfg.max_radius = _int(data["max_radius"], "max_radius", lo=4)
    if "seed" in data:
        cfg.seed = _int(data["seed"], "seed", lo=0)
    if "identities" in data:
        ids = data["identities"]
        if not isinstance(ids, list) or not all(isinstance(i, str) for i in ids):
            raise ConfigError("field 'identities': expected a list of identity ids")
        if ids == ["all"]:
            ids = None
        else:
            for i in ids:
                if i not in REGISTRY:
                    raise ConfigError(f"field 'identities': unknown identity {i!r}")
        cfg.identities = ids
    if "grid" in data:
        grid = data["grid"]
        if not isinstance(grid, dict):
            raise ConfigError("field 'grid': expected an object of parameter lists")
        for key, values in grid.items():
            if key not in PARAM_FIELDS:
                raise ConfigError(f"field 'grid.{key}': not a parameter")
            if not isinstance(values, list) or not values:
                raise ConfigError(f"field 'grid.{key}': expected a non-empty list")
            cfg.grid[key] = [parse_param(key, v) for v in values]
    for key in EVAL_FIELDS:
        if key in data:
            v = data[key]
            if key == "i":
                v = _int(v, "i", lo=0)
            elif not isinstance(v, str):
                raise ConfigError(f"field '{key}': expected a string")
            cfg.evaluate[key] = v
    cfg.raw = raw
    cfg.params = normalize_params(raw)
    for values in grid_points(cfg):
        normalize_params({**raw, **values})
    return cfg


def grid_points(cfg: RunConfig) -> list[dict]:
    """Cartesian product of the grid in key order; a single empty point without a grid."""
    keys = list(cfg.grid)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(cfg.grid[k] for k in keys))]


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON (line {exc.lineno}: {exc.msg})") from None
    return parse_config(data)
