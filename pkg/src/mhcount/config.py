"""Strict JSON experiment configuration.

One JSON object per run. Unknown keys anywhere are errors, so a typo in an
experiment definition fails loudly instead of silently using a default.

Top-level keys (all optional, each subcommand reads what it needs)::

    spec       {"f": [[c0, c1, ...], ...], "k": [k1, ...], "a": int, "m": int}
    boxes      [{"u": int | [u1, ...], "h": int}, ...]       count
    u          int | [u1, ...]                              scan-density
    h_grid     [h, ...] strictly increasing                 scan-density
    strategy   "solve-last" | "full-enumeration"
    modulus    {"q": int | [[p, e], ...]}
               | {"Q": number | "square-free" | "prime-power", "r": int,
                  "mode": "coprime" | "three-mod-2k", "power": int}
    exponent   "square-free" | "prime-power" | "diagonal"
               reference growth exponent reported by scan-density
    r          int                   r used in the reference exponent
    suites     [name, ...]           verify
    perturb    [name, ...]           verify (only "postnikov" is perturbable)
    sizes      {suite: {option: value}}   verify
    charsum    {"op": name, ...}     charsum, see mhcount.experiments.CHARSUM_OPS
    budget, workers                  defaults for --budget / --workers
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .arith import FactoredModulus, PrimeMode
from .counting import Box, HypersurfaceSpec
from .polys import IntegerPolynomial

TOP_KEYS = {"spec", "boxes", "u", "h_grid", "strategy", "modulus", "exponent", "r", "suites",
            "perturb", "sizes", "charsum", "budget", "workers"}
# Q = 0.5 h^(4/9) with r primes; Q = floor(0.5 h^(1/3)) with one prime raised to r
Q_POLICIES = ("square-free", "prime-power")
# n - 4r/9, n - r/3, d(d+1)/2
EXPONENTS = ("square-free", "prime-power", "diagonal")


class ConfigError(ValueError):
    pass


@dataclass
class ModulusPolicy:
    q: FactoredModulus | None = None
    Q: float | str | None = None
    r: int = 1
    mode: PrimeMode = PrimeMode.COPRIME_TO_K_MINUS_ONE
    power: int = 1


@dataclass
class ExperimentConfig:
    spec: HypersurfaceSpec | None = None
    boxes: list[Box] = field(default_factory=list)
    u: int | tuple[int, ...] = 0
    h_grid: list[int] = field(default_factory=list)
    strategy: str = "solve-last"
    modulus: ModulusPolicy | None = None
    exponent: str | None = None
    r: int = 1
    suites: list[str] | None = None
    perturb: list[str] = field(default_factory=list)
    sizes: dict = field(default_factory=dict)
    charsum: dict | None = None
    budget: int | None = None
    workers: int | None = None


def _keys(obj: dict, allowed: set, where: str, required: set = frozenset()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    extra = set(obj) - allowed
    if extra:
        raise ConfigError(f"{where}: unknown keys {sorted(extra)}")
    missing = set(required) - set(obj)
    if missing:
        raise ConfigError(f"{where}: missing keys {sorted(missing)}")


def _int(v, where) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{where}: expected an integer, got {v!r}")
    return v


def parse_modulus_value(v, where="modulus.q") -> FactoredModulus:
    try:
        if isinstance(v, int) and not isinstance(v, bool):
            return FactoredModulus.from_int(v)
        if isinstance(v, list):
            factors = [(int(p), int(e)) for p, e in v]
            if len(factors) == 1:
                return FactoredModulus.prime_power(*factors[0])
            if any(e != 1 for _, e in factors):
                raise ValueError("mixed factorisations are not supported")
            return FactoredModulus.square_free(p for p, _ in factors)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}: expected an int or [[p, e], ...]")


def parse_poly(v, where) -> IntegerPolynomial:
    if not isinstance(v, list) or not v or not all(isinstance(c, int) and not isinstance(c, bool) for c in v):
        raise ConfigError(f"{where}: expected a nonempty list of integer coefficients")
    return IntegerPolynomial(v)


def parse_spec(obj) -> HypersurfaceSpec:
    _keys(obj, {"f", "k", "a", "m"}, "spec", {"f", "k", "a"})
    if not isinstance(obj["f"], list) or not isinstance(obj["k"], list):
        raise ConfigError("spec: f and k must be lists")
    fs = tuple(parse_poly(f, f"spec.f[{i}]") for i, f in enumerate(obj["f"]))
    ks = tuple(_int(k, "spec.k") for k in obj["k"])
    try:
        return HypersurfaceSpec(fs, ks, _int(obj["a"], "spec.a"), _int(obj.get("m", 1), "spec.m"))
    except ValueError as exc:
        raise ConfigError(f"spec: {exc}") from exc


def _parse_u(v, n, where):
    if isinstance(v, list):
        us = tuple(_int(x, where) for x in v)
        if len(us) != n:
            raise ConfigError(f"{where}: need {n} offsets")
        return us
    return (_int(v, where),) * n


def parse_box(obj, n: int, where: str) -> Box:
    _keys(obj, {"u", "h"}, where, {"h"})
    h = _int(obj["h"], f"{where}.h")
    if h < 0:
        raise ConfigError(f"{where}.h must be >= 0")
    return Box(_parse_u(obj.get("u", 0), n, f"{where}.u"), h)


def parse_modulus_policy(obj) -> ModulusPolicy:
    _keys(obj, {"q", "Q", "r", "mode", "power"}, "modulus")
    if ("q" in obj) == ("Q" in obj):
        raise ConfigError("modulus: give exactly one of q or Q")
    if "q" in obj:
        return ModulusPolicy(q=parse_modulus_value(obj["q"]))
    Q = obj["Q"]
    if not (isinstance(Q, (int, float)) and not isinstance(Q, bool)) and Q not in Q_POLICIES:
        raise ConfigError(f"modulus.Q: expected a number or one of {list(Q_POLICIES)}")
    try:
        mode = PrimeMode(obj.get("mode", "coprime"))
    except ValueError as exc:
        raise ConfigError(f"modulus.mode: {exc}") from exc
    r, power = _int(obj.get("r", 1), "modulus.r"), _int(obj.get("power", 1), "modulus.power")
    if r < 1 or power < 1 or (power > 1 and r != 1):
        raise ConfigError("modulus: need r >= 1, power >= 1, and r = 1 when power > 1")
    return ModulusPolicy(Q=Q, r=r, mode=mode, power=power)


def parse_config(obj: Any) -> ExperimentConfig:
    _keys(obj, TOP_KEYS, "config")
    cfg = ExperimentConfig()
    if "spec" in obj:
        cfg.spec = parse_spec(obj["spec"])
    n = cfg.spec.n if cfg.spec else None
    if "boxes" in obj:
        if n is None:
            raise ConfigError("boxes need a spec")
        if not isinstance(obj["boxes"], list):
            raise ConfigError("boxes: expected a list")
        cfg.boxes = [parse_box(b, n, f"boxes[{i}]") for i, b in enumerate(obj["boxes"])]
    if "u" in obj:
        if n is None:
            raise ConfigError("u needs a spec")
        cfg.u = _parse_u(obj["u"], n, "u")
    elif n is not None:
        cfg.u = (0,) * n
    if "h_grid" in obj:
        grid = obj["h_grid"]
        if not isinstance(grid, list):
            raise ConfigError("h_grid: expected a list")
        cfg.h_grid = [_int(h, "h_grid") for h in grid]
        if any(h < 0 for h in cfg.h_grid) or any(b <= a for a, b in zip(cfg.h_grid, cfg.h_grid[1:])):
            raise ConfigError("h_grid must be non-negative and strictly increasing")
    if "strategy" in obj:
        if obj["strategy"] not in ("solve-last", "full-enumeration"):
            raise ConfigError("strategy: expected 'solve-last' or 'full-enumeration'")
        cfg.strategy = obj["strategy"]
    if "modulus" in obj:
        cfg.modulus = parse_modulus_policy(obj["modulus"])
    if "exponent" in obj:
        if obj["exponent"] not in EXPONENTS:
            raise ConfigError(f"exponent: expected one of {list(EXPONENTS)}")
        cfg.exponent = obj["exponent"]
    if "r" in obj:
        cfg.r = _int(obj["r"], "r")
    if "suites" in obj:
        if not isinstance(obj["suites"], list):
            raise ConfigError("suites: expected a list")
        cfg.suites = [str(s) for s in obj["suites"]]
    if "perturb" in obj:
        if not isinstance(obj["perturb"], list):
            raise ConfigError("perturb: expected a list")
        cfg.perturb = [str(s) for s in obj["perturb"]]
    if "sizes" in obj:
        if not isinstance(obj["sizes"], dict):
            raise ConfigError("sizes: expected an object")
        cfg.sizes = obj["sizes"]
    if "charsum" in obj:
        if not isinstance(obj["charsum"], dict) or "op" not in obj["charsum"]:
            raise ConfigError("charsum: expected an object with an 'op' key")
        cfg.charsum = obj["charsum"]
    for key in ("budget", "workers"):
        if key in obj:
            v = _int(obj[key], key)
            if v < 1:
                raise ConfigError(f"{key} must be positive")
            setattr(cfg, key, v)
    return cfg


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config(obj)
