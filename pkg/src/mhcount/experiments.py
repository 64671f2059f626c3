"""Row builders behind the CLI subcommands.

Each builder turns an :class:`ExperimentConfig` into a list of dicts keyed by
the subcommand's fixed column names. Formatting and file output live in
:mod:`mhcount.cli`.
"""
from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import dataclass

from .arith import FactoredModulus, euler_phi
from .chars import build_character_table, is_primitive
from .config import ConfigError, ExperimentConfig, parse_modulus_value, parse_poly
from .counting import (DEFAULT_BUDGET, Box, HypersurfaceSpec, count_congruence, count_points,
                       divisor_pipeline_bound, select_modulus, value_set_size)
from .errors import BudgetExceeded, EmptySelection, InsufficientPrimes, MHCountError
from .expsums import (SumReport, gauss_sum, incomplete_mixed_sum, linear_quadratic_bound, mixed_sf_report,
                      pure_sum_report, ramanujan_sum, weil_report, wooley_report)
from .polys import RationalExpPolynomial
from .postnikov import prime_power_mixed_sum
from .suites import DEFAULT_SUITES, SUITES, run_suite

COUNT_COLUMNS = ["f", "k", "a", "m", "u", "h", "strategy", "n_star", "work", "flags", "elapsed_s"]
DENSITY_COLUMNS = ["f", "k", "a", "m", "u", "h", "n_star", "T", "q", "phi", "kept_fraction", "slope",
                   "exponent_ref", "value_set", "pipeline_bound", "flags", "elapsed_s"]
VERIFY_COLUMNS = ["suite", "cases", "failures", "worst", "status"]
CHARSUM_COLUMNS = ["op", "params", "re", "im", "magnitude", "bound", "ratio", "flags"]


@dataclass
class RunOptions:
    workers: int = 1
    budget: int = DEFAULT_BUDGET
    timing: bool = False


def _spec_cells(spec: HypersurfaceSpec) -> dict:
    return {"f": json.dumps([list(f.coeffs) for f in spec.f_list], separators=(",", ":")),
            "k": json.dumps(list(spec.k_list), separators=(",", ":")), "a": spec.a, "m": spec.m}


def _u_cell(us) -> str | int:
    return us[0] if len(set(us)) == 1 else json.dumps(list(us), separators=(",", ":"))


def _require_spec(cfg: ExperimentConfig) -> HypersurfaceSpec:
    if cfg.spec is None:
        raise ConfigError("config needs a spec")
    return cfg.spec


# -- count ---------------------------------------------------------------------

def count_rows(cfg: ExperimentConfig, opts: RunOptions) -> list[dict]:
    spec = _require_spec(cfg)
    rows = []
    for box in cfg.boxes:
        res = count_points(spec, box, cfg.strategy, opts.budget, opts.workers)
        rows.append({**_spec_cells(spec), "u": _u_cell(box.us), "h": box.h, "strategy": res.method.value,
                     "n_star": res.count, "work": res.params["work"], "flags": ";".join(res.flags),
                     "elapsed_s": res.elapsed if opts.timing else None})
    return rows


# -- scan-density --------------------------------------------------------------

def reference_exponent(kind: str | None, n: int, r: int, d: int | None) -> float | None:
    if kind == "square-free":
        return n - 4 * r / 9
    if kind == "prime-power":
        return n - r / 3
    if kind == "diagonal" and d is not None:
        return d * (d + 1) / 2
    return None


def _diagonal_degree(spec: HypersurfaceSpec) -> int | None:
    """d when the spec is x_1^d + ... + x_n^d = a x_1 ... x_n, else None."""
    f0 = spec.f_list[0]
    if f0.coeffs != (0,) * f0.degree + (1,) or f0.degree < 1:
        return None
    if any(f != f0 for f in spec.f_list) or any(k != 1 for k in spec.k_list) or spec.m != 1:
        return None
    return f0.degree


def _scan_Q(policy, h: int) -> float:
    if policy.Q == "square-free":
        return 0.5 * h ** (4 / 9)
    if policy.Q == "prime-power":
        return math.floor(0.5 * h ** (1 / 3))
    return float(policy.Q)


def _scan_modulus(cfg: ExperimentConfig, spec, h: int, solutions) -> tuple[FactoredModulus | None, float | None, list]:
    """The congruence modulus for one scan row, the kept fraction, and flags."""
    policy = cfg.modulus
    if policy.q is not None:
        return policy.q, None, []
    Q = _scan_Q(policy, h)
    if Q < 3:
        return None, None, ["Q-below-3"]
    nprimes, power = (1, policy.r) if policy.Q == "prime-power" else (policy.r, policy.power)
    S = [math.prod(sol) for sol in solutions]
    try:
        choice = select_modulus(S, Q, nprimes, spec.k_list, policy.mode)
    except EmptySelection:
        return None, None, ["no-admissible-prime"]
    except InsufficientPrimes:
        return None, None, ["too-few-primes"]
    q = choice.modulus
    if power > 1:
        q = FactoredModulus.prime_power(q.value, power)
    return q, choice.fraction, list(choice.flags)


def density_rows(cfg: ExperimentConfig, opts: RunOptions) -> list[dict]:
    spec = _require_spec(cfg)
    if not cfg.h_grid:
        raise ConfigError("scan-density needs a nonempty h_grid")
    us = cfg.u if isinstance(cfg.u, tuple) else (cfg.u,) * spec.n
    d = _diagonal_degree(spec)
    if cfg.modulus is not None and cfg.modulus.Q is not None:
        r = cfg.modulus.r
    else:
        r = cfg.r
    exponent = reference_exponent(cfg.exponent, spec.n, r, d)
    rows, prev = [], None
    for h in cfg.h_grid:
        t0 = time.perf_counter()
        box = Box(us, h)
        want_sols = cfg.modulus is not None and cfg.modulus.Q is not None
        res = count_points(spec, box, cfg.strategy, opts.budget, opts.workers, collect=want_sols)
        flags = list(res.flags)
        row = {**_spec_cells(spec), "u": _u_cell(us), "h": h, "n_star": res.count, "T": None, "q": None,
               "phi": None, "kept_fraction": None, "slope": None, "exponent_ref": exponent,
               "value_set": None, "pipeline_bound": None}
        if cfg.modulus is not None:
            q, kept, mflags = _scan_modulus(cfg, spec, h, res.solutions or [])
            flags += mflags
            if q is not None:
                T = count_congruence(spec, box, q, budget=opts.budget).count
                row.update(T=T, q=q.value, phi=euler_phi(q), kept_fraction=kept)
                if res.count > 2 * T:
                    flags.append("n-exceeds-2T")
        if cfg.exponent == "diagonal":
            if d is None or us[0] < 0 or len(set(us)) != 1 or spec.a < 1:
                flags.append("not-diagonal")
            else:
                row["value_set"] = value_set_size(d, spec.n, us[0], h, opts.budget)
                row["pipeline_bound"] = divisor_pipeline_bound(d, spec.n, spec.a, us[0], h, opts.budget)
        if prev is not None and prev[0] > 0 and prev[1] > 0 and h > 0 and res.count > 0:
            row["slope"] = math.log(res.count / prev[1]) / math.log(h / prev[0])
        prev = (h, res.count)
        row["flags"] = ";".join(flags)
        row["elapsed_s"] = time.perf_counter() - t0 if opts.timing else None
        rows.append(row)
    return rows


# -- verify --------------------------------------------------------------------

def verify_rows(cfg: ExperimentConfig, suites=None, perturb=()) -> list[dict]:
    names = list(suites) if suites is not None else (cfg.suites if cfg.suites is not None else DEFAULT_SUITES)
    if not names:
        raise ConfigError("suite selection is empty")
    unknown = [s for s in list(names) + list(perturb) + list(cfg.perturb) if s not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suites {unknown}; choose from {sorted(SUITES)}")
    perturbed = set(perturb) | set(cfg.perturb)
    rows = []
    for name in names:
        opts = dict(cfg.sizes.get(name, {}))
        try:
            res = run_suite(name, perturb=name in perturbed, **opts)
        except TypeError as exc:
            raise ConfigError(f"sizes.{name}: {exc}") from exc
        rows.append({"suite": name, "cases": res.cases, "failures": res.failures, "worst": float(res.worst),
                     "status": "pass" if res.ok else "fail"})
    return rows


# -- charsum -------------------------------------------------------------------

def _char(q, chi):
    table = build_character_table(q)
    return table.character(chi)


def _frac_poly(v, where):
    try:
        return RationalExpPolynomial.from_fractions(v)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _op_gauss(p):
    q = parse_modulus_value(p["q"], "q")
    chi = _char(q, p["chi"])
    lam = p["lam"]
    value = gauss_sum(chi, lam)
    g = math.gcd(lam, q.value)
    if chi.is_principal:
        return SumReport(value, float(euler_phi(g)), flags=("principal",))
    flags = [] if is_primitive(chi) else ["imprimitive"]
    if g != 1:
        flags.append("gcd-gt-1")
    return SumReport(value, math.sqrt(q.value), flags=tuple(flags))


def _op_ramanujan(p):
    q = p["q"]
    qv = q if isinstance(q, int) else parse_modulus_value(q, "q").value
    c = ramanujan_sum(qv, p["lam"])
    return SumReport(complex(c), float(euler_phi(math.gcd(p["lam"], qv))))


def _op_incomplete(p):
    q = parse_modulus_value(p["q"], "q")
    chi = _char(q, p["chi"])
    f = parse_poly(p["f"], "f")
    value = incomplete_mixed_sum(chi, p.get("k", 1), f, p["lam"], p.get("u", 0), p["h"])
    return SumReport(value, float(max(p["h"], 1)), flags=("trivial-bound",))


def _op_mixed_sf(p):
    q = parse_modulus_value(p["q"], "q")
    return mixed_sf_report(_char(q, p["chi"]), _frac_poly(p["F"], "F"), p.get("u", 0), p["h"], p.get("Q"))


def _op_prime_power(p):
    return prime_power_mixed_sum(p["p"], p["r"], parse_poly(p["f"], "f"), p["lam"], p["mu"], p.get("u", 0), p["h"])


def _op_pure(p):
    q = parse_modulus_value(p["q"], "q")
    roots = [tuple(int(x) for x in r) for r in p["roots"]]
    return pure_sum_report(_char(q, p["chi"]), roots, p.get("u", 0), p["h"])


def _op_wooley(p):
    return wooley_report(_frac_poly(p["G"], "G"), p["H"], p["j"])


def _op_weil(p):
    q = parse_modulus_value(p["p"], "p")
    return weil_report(_char(q, p["chi"]), p["lam"], parse_poly(p["F"], "F"), p.get("u", 0), p["h"])


def _op_linquad(p):
    return linear_quadratic_bound(parse_poly(p["G"], "G"), p["H"], p["q"])


# op name -> (evaluator, required params, optional params, sum-length param)
CHARSUM_OPS = {
    "gauss_sum": (_op_gauss, {"q", "chi", "lam"}, set(), "q"),
    "ramanujan_sum": (_op_ramanujan, {"q", "lam"}, set(), None),
    "incomplete_mixed_sum": (_op_incomplete, {"q", "chi", "f", "lam", "h"}, {"k", "u"}, "h"),
    "mixed_sf_report": (_op_mixed_sf, {"q", "chi", "F", "h"}, {"u", "Q"}, "h"),
    "prime_power_mixed_sum": (_op_prime_power, {"p", "r", "f", "lam", "mu", "h"}, {"u"}, "h"),
    "pure_sum_report": (_op_pure, {"q", "chi", "roots", "h"}, {"u"}, "h"),
    "wooley_report": (_op_wooley, {"G", "H", "j"}, set(), "H"),
    "weil_report": (_op_weil, {"p", "chi", "lam", "F", "h"}, {"u"}, "h"),
    "linear_quadratic_bound": (_op_linquad, {"G", "H", "q"}, set(), "H"),
}

CHAR_SWEEPS = ("all", "nonprincipal")


def _sweep_values(name, v):
    if isinstance(v, dict):
        if set(v) != {"range"} or len(v["range"]) != 2:
            raise ConfigError(f"sweep.{name}: expected a list or {{\"range\": [lo, hi]}}")
        lo, hi = v["range"]
        return list(range(lo, hi + 1))
    if not isinstance(v, list) or not v:
        raise ConfigError(f"sweep.{name}: expected a nonempty list")
    return v


def expand_charsum(section: dict) -> tuple[str, list[dict]]:
    """Resolve a charsum section into (op, list of concrete parameter dicts).

    ``params`` holds fixed values, ``sweep`` maps parameter names to value
    lists (or inclusive ranges) expanded as a cartesian product in key order.
    ``chi`` may be "all" or "nonprincipal" to run over the character group.
    """
    extra = set(section) - {"op", "params", "sweep"}
    if extra:
        raise ConfigError(f"charsum: unknown keys {sorted(extra)}")
    op = section["op"]
    if op not in CHARSUM_OPS:
        raise ConfigError(f"unknown charsum op {op!r}; choose from {sorted(CHARSUM_OPS)}")
    _, required, optional, _ = CHARSUM_OPS[op]
    fixed = section.get("params", {})
    sweep = section.get("sweep", {})
    if not isinstance(fixed, dict) or not isinstance(sweep, dict):
        raise ConfigError("charsum.params and charsum.sweep must be objects")
    names = set(fixed) | set(sweep)
    if set(fixed) & set(sweep):
        raise ConfigError(f"charsum: {sorted(set(fixed) & set(sweep))} both fixed and swept")
    if names - required - optional:
        raise ConfigError(f"charsum {op}: unknown params {sorted(names - required - optional)}")
    if required - names:
        raise ConfigError(f"charsum {op}: missing params {sorted(required - names)}")
    keys = sorted(sweep)
    out = []
    for combo in itertools.product(*(_sweep_values(k, sweep[k]) for k in keys)):
        p = dict(fixed, **dict(zip(keys, combo)))
        if p.get("chi") in CHAR_SWEEPS:
            table = build_character_table(parse_modulus_value(p.get("q", p.get("p")), "q"))
            for chi in table.characters():
                if p["chi"] == "nonprincipal" and chi.is_principal:
                    continue
                mu = chi.mu[0] if len(chi.mu) == 1 else list(chi.mu)
                out.append(dict(p, chi=mu))
        else:
            out.append(p)
    return op, out


def _report_cells(report: SumReport) -> dict:
    return {"re": report.value.real, "im": report.value.imag, "magnitude": report.magnitude,
            "bound": report.bound, "ratio": report.ratio, "flags": ";".join(report.flags)}


def charsum_rows(cfg: ExperimentConfig, opts: RunOptions) -> list[dict]:
    if cfg.charsum is None:
        raise ConfigError("config needs a charsum section")
    op, cases = expand_charsum(cfg.charsum)
    fn, _, _, length = CHARSUM_OPS[op]
    rows = []
    for p in cases:
        if length is not None:
            n = p[length] if isinstance(p[length], int) else parse_modulus_value(p[length], length).value
            if n > opts.budget:
                raise BudgetExceeded(f"{op} sums {n} terms, budget {opts.budget}")
        row = {"op": op, "params": json.dumps(p, sort_keys=True, separators=(",", ":"))}
        try:
            row.update(_report_cells(fn(p)))
        except MHCountError as exc:
            row.update(re=None, im=None, magnitude=None, bound=None, ratio=None,
                       flags=f"skipped:{type(exc).__name__}")
        except (ValueError, TypeError, KeyError) as exc:
            raise ConfigError(f"{op} with {row['params']}: {exc}") from exc
        rows.append(row)
    return rows
