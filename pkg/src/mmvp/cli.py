"""Command-line front end.

Subcommands: iterate, verify, field, adomian.  Exit codes: 0 pass, 1 tolerance
failure, 2 configuration error.

Nonlinearity text grammar (``adomian`` command, ``nonlinearity`` key)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | 'U' INT | NAME | '(' expr ')'

``Ud`` is the d-th derivative of U; other names are looked up in ``params``.
Division is only allowed by constants, and a constant term is rejected.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema

from . import closedform as cfm
from . import wavefield as wf
from .adomian import NonlinearitySpec, adomian_via_convolution, adomian_via_definition
from .exprcore import ExpPoly
from .vop import (EXPONENTIAL, POLYNOMIAL, ProblemSpec, SeriesSolution, decaying_seed,
                  fundamental_set, initial_value_seed, run_recursion, seed_from_constants)

log = logging.getLogger("mmvp")

OK, FAIL, CONFIG_ERROR = 0, 1, 2


class ConfigError(Exception):
    pass


_NUM = {"type": ["number", "string"]}

_PROBLEM = {
    "type": "object",
    "properties": {
        "mode": {"enum": [EXPONENTIAL, POLYNOMIAL]},
        "a1": _NUM, "a2": _NUM, "shift": _NUM,
    },
    "required": ["a1", "a2"],
    "additionalProperties": False,
}

_SEED = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["decaying", "initial", "constants"]},
        "c": _NUM, "toward": {"enum": ["+inf", "-inf"]},
        "v0": _NUM, "v1": _NUM,
        "c0": {"type": "array", "items": _NUM},
        "c1": {"type": "array", "items": _NUM},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

_CLOSED = {"type": "object"}

SCHEMAS = {
    "iterate": {
        "type": "object",
        "properties": {"problem": _PROBLEM, "seed": _SEED,
                       "kmax": {"type": "integer", "minimum": 0}},
        "required": ["problem", "seed"],
        "additionalProperties": False,
    },
    "adomian": {
        "type": "object",
        "properties": {
            "problem": _PROBLEM, "seed": _SEED,
            "nonlinearity": {"type": "string"},
            "params": {"type": "object", "additionalProperties": _NUM},
            "partials": {"type": "array"},
            "kmax": {"type": "integer", "minimum": 0},
        },
        "additionalProperties": False,
    },
    "verify": {
        "type": "object",
        "properties": {
            "closed_forms": {"type": "array", "items": _CLOSED, "minItems": 1},
            "xi_samples": {"type": "array", "items": {"type": "number"}, "minItems": 1},
            "shifts": {"type": "array", "items": {"type": "number"}},
            "series": {
                "type": "object",
                "properties": {"problem": _PROBLEM, "seed": _SEED,
                               "kmax": {"type": "integer", "minimum": 0},
                               "against": {"type": "integer", "minimum": 0},
                               "max_degree": {"type": "integer", "minimum": 0}},
                "required": ["problem", "seed"],
                "additionalProperties": False,
            },
            "tolerance": {"type": "number", "exclusiveMinimum": 0},
        },
        "required": ["closed_forms", "xi_samples"],
        "additionalProperties": False,
    },
    "field": {
        "type": "object",
        "properties": {
            "field": {"type": "object"},
            "residual_points": {"type": "integer", "minimum": 0},
            "min_order": {"type": "number"},
            "seed": {"type": "integer"},
        },
        "required": ["field"],
        "additionalProperties": False,
    },
}

# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

_CASES = {
    "case1": {"problem": {"mode": EXPONENTIAL, "a1": 1, "a2": -1},
              "seed": {"kind": "decaying", "c": 1, "toward": "+inf"}, "kmax": 5},
    "case2": {"problem": {"mode": EXPONENTIAL, "a1": 1, "a2": -1},
              "seed": {"kind": "decaying", "c": 1, "toward": "-inf"}, "kmax": 5},
    "case3": {"problem": {"mode": POLYNOMIAL, "a1": 1, "a2": 0, "shift": 0},
              "seed": {"kind": "initial", "v0": 0, "v1": 1}, "kmax": 4},
}


def _verify_presets() -> dict:
    hyper = [cfm.exp_rational(1, -1, 1).to_dict(), cfm.sech2(1, -1, 1).to_dict(),
             cfm.csch2(1, -1, 1).to_dict()]
    xs = [-3 + 0.25 * i for i in range(25)]
    th, k = Fraction(3, 10), Fraction(3, 5)
    v0, v1 = cfm.case3_parameter_map(1, 0, 0, th, k)
    ell = [cfm.elliptic_form(f, 1, 0, th, k).to_dict() for f in cfm.ELLIPTIC]
    return {
        "hyperbolic": {"closed_forms": hyper, "xi_samples": xs, "shifts": [-0.5, -1.0],
                       "series": {"problem": _CASES["case1"]["problem"],
                                  "seed": _CASES["case1"]["seed"], "kmax": 20}},
        "elliptic": {"closed_forms": ell, "xi_samples": xs,
                     "series": {"problem": {"mode": POLYNOMIAL, "a1": 1, "a2": 0, "shift": 0},
                                "seed": {"kind": "initial", "v0": str(v0), "v1": str(v1)},
                                "kmax": 4, "max_degree": 10}},
        "zero": {"closed_forms": [cfm.zero_solution().to_dict()], "xi_samples": xs},
    }


def preset_config(command: str, name: str) -> dict:
    if command in ("iterate", "adomian"):
        if name not in _CASES:
            raise ConfigError(f"unknown preset {name!r}; choose from {sorted(_CASES)}")
        return json.loads(json.dumps(_CASES[name]))
    if command == "verify":
        presets = _verify_presets()
        if name not in presets:
            raise ConfigError(f"unknown preset {name!r}; choose from {sorted(presets)}")
        return presets[name]
    if command == "field":
        try:
            return {"field": wf.preset(name).to_dict()}
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError(f"no presets for {command}")


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _frac(v) -> Fraction:
    try:
        return Fraction(str(v)) if not isinstance(v, str) else Fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not an exact number: {v!r}") from exc


def build_problem(d: dict) -> ProblemSpec:
    mode = d.get("mode", EXPONENTIAL)
    if mode == EXPONENTIAL:
        return ProblemSpec.thermophoretic(_frac(d["a1"]), _frac(d["a2"]))
    return ProblemSpec.shifted_polynomial(_frac(d["a1"]), _frac(d["a2"]), _frac(d.get("shift", 0)))


def build_seed(spec: ProblemSpec, d: dict) -> tuple[list[ExpPoly], dict]:
    kind = d["kind"]
    if kind == "decaying":
        c, toward = _frac(d.get("c", 1)), d.get("toward", "+inf")
        return [decaying_seed(spec, c, toward)], {"kind": kind, "c": str(c), "toward": toward}
    if kind == "initial":
        v0, v1 = _frac(d.get("v0", 0)), _frac(d.get("v1", 0))
        return [initial_value_seed(v0, v1)], {"kind": kind, "v0": str(v0), "v1": str(v1)}
    fs = fundamental_set(spec)
    seeds = [seed_from_constants(fs, [_frac(c) for c in d["c0"]])]
    info = {"kind": kind, "c0": [str(_frac(c)) for c in d["c0"]]}
    if "c1" in d:
        seeds.append(seed_from_constants(fs, [_frac(c) for c in d["c1"]]))
        info["c1"] = [str(_frac(c)) for c in d["c1"]]
    return seeds, info


def _series(cfg: dict, kmax: int | None = None) -> SeriesSolution:
    spec = build_problem(cfg["problem"])
    seeds, info = build_seed(spec, cfg["seed"])
    k = cfg.get("kmax", 8) if kmax is None else kmax
    return run_recursion(spec, seeds, k, info)


def _poly_coeffs(u: ExpPoly) -> list[dict]:
    return [{"m": m, "n": n, "coeff": str(u.coeff(m, n))} for m, n in u.keys()]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_iterate(cfg: dict, args) -> tuple[int, dict]:
    sol = _series(cfg, args.kmax)
    report = {"command": "iterate", "series": sol.to_dict(),
              "coefficients": [_poly_coeffs(u) for u in sol.iterates]}
    if sol.resonances:
        log.warning("resonant terms kept in iterates %s", sorted(sol.resonances))
    try:
        gt = cfm.detect_general_term(sol)
        report["general_term"] = {"A": str(gt.A), "q": str(gt.q), "base_rate": gt.base_rate}
    except (cfm.PatternMismatch, ValueError) as exc:
        report["general_term"] = None
        report["general_term_note"] = str(exc)
    return OK, report


def cmd_adomian(cfg: dict, args) -> tuple[int, dict]:
    kmax = args.kmax if args.kmax is not None else cfg.get("kmax", 3)
    if "partials" in cfg:
        partials = [ExpPoly.from_dict(p) for p in cfg["partials"]]
    elif "problem" in cfg and "seed" in cfg:
        partials = _series(cfg, kmax).iterates
    else:
        raise ConfigError("adomian needs either 'partials' or 'problem' + 'seed'")
    if "nonlinearity" in cfg:
        spec = NonlinearitySpec.parse(cfg["nonlinearity"], cfg.get("params", {}))
    elif "problem" in cfg:
        spec = build_problem(cfg["problem"]).nonlinearity
    else:
        raise ConfigError("adomian needs a 'nonlinearity' or a 'problem'")
    by_def = adomian_via_definition(spec, partials, kmax)
    try:
        by_conv = adomian_via_convolution(spec, partials, kmax)
        agree = by_def.polys == by_conv.polys
    except NotImplementedError:
        agree = None
    report = {"command": "adomian", "nonlinearity": str(spec),
              "polys": [p.to_dict() for p in by_def.polys],
              "coefficients": [_poly_coeffs(p) for p in by_def.polys],
              "paths_agree": agree}
    return (FAIL if agree is False else OK), report


def cmd_verify(cfg: dict, args) -> tuple[int, dict]:
    forms = [cfm.ClosedForm.from_dict(d) for d in cfg["closed_forms"]]
    xs = cfg["xi_samples"]
    override = args.tolerance if args.tolerance is not None else cfg.get("tolerance")
    failed = False
    checks = []

    def tol(kind, elliptic):
        if override is not None:
            return override
        return {"residual": 1e-8 if elliptic else 1e-10,
                "equivalence": 1e-10 if elliptic else 1e-12,
                "series": 1e-12, "maclaurin": 1e-9}[kind]

    def record(name, value, limit, **extra):
        nonlocal failed
        ok = value is not None and value < limit
        failed |= not ok
        checks.append({"check": name, "value": value, "tolerance": limit, "pass": ok, **extra})

    for i, cf in enumerate(forms):
        ell = cf.family in cfm.ELLIPTIC
        try:
            record("ode_residual", cfm.ode_residual(cf, xs), tol("residual", ell),
                   form=i, family=cf.family)
        except (cfm.PoleError, cfm.ValidityError) as exc:
            record("ode_residual", None, tol("residual", ell), form=i, family=cf.family,
                   error=str(exc))
    for i in range(len(forms)):
        for j in range(i + 1, len(forms)):
            ell = forms[i].family in cfm.ELLIPTIC or forms[j].family in cfm.ELLIPTIC
            try:
                diff = cfm.equivalence_check(forms[i], forms[j], xs)
                record("equivalence", diff, tol("equivalence", ell), pair=[i, j])
            except (cfm.PoleError, cfm.ValidityError) as exc:
                record("equivalence", None, tol("equivalence", ell), pair=[i, j], error=str(exc))
    for lam in cfg.get("shifts", []):
        for i, cf in enumerate(forms):
            ell = cf.family in cfm.ELLIPTIC
            try:
                shifted = cfm.lambda_shift(cf, lam)
                record("lambda_shift_residual", cfm.ode_residual(shifted, xs),
                       tol("residual", ell), form=i, shift=lam)
            except (cfm.PoleError, cfm.ValidityError) as exc:
                checks.append({"check": "lambda_shift_residual", "form": i, "shift": lam,
                               "pass": None, "skipped": str(exc)})
    if "series" in cfg:
        sc = cfg["series"]
        sol = _series(sc)
        if sol.spec.mode == POLYNOMIAL:
            deg = sc.get("max_degree", 2 * (len(sol.iterates) - 1) + 2)
            for i, cf in enumerate(forms):
                if cf.family in cfm.ELLIPTIC:
                    record("maclaurin_match", cfm.maclaurin_match(sol, cf, deg),
                           tol("maclaurin", True), form=i, max_degree=deg)
        else:
            n = sc.get("against", len(sol.iterates) - 1)
            for i, cf in enumerate(forms):
                try:
                    diff = max(abs(cfm.partial_sum_value(sol, n, x) - cf.solution(x))
                               for x in xs if x >= 0)
                    record("series_vs_closed_form", diff, tol("series", False), form=i, terms=n)
                except (cfm.PoleError, cfm.ValidityError) as exc:
                    record("series_vs_closed_form", None, tol("series", False), form=i,
                           error=str(exc))
    report = {"command": "verify", "pass": not failed, "checks": checks,
              "closed_forms": [cf.to_dict() for cf in forms]}
    return (FAIL if failed else OK), report


def _fmt(v: float) -> str:
    return format(v, ".17g")


def cmd_field(cfg: dict, args) -> tuple[int, dict]:
    fc = wf.FieldConfig.from_dict(cfg["field"])
    grid = wf.field_sample(fc)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    stem = f"field_{fc.name}_{fc.grid.column}"
    csv_path = out / f"{stem}.csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["axis1", "axis2", "u"])
        for a, t, u in grid.rows():
            w.writerow([_fmt(a), _fmt(t), _fmt(u)])
    n_pts = cfg.get("residual_points", 10)
    min_order = args.tolerance if args.tolerance is not None else cfg.get("min_order", 1.9)
    study = None
    status = OK
    if n_pts:
        pts = wf.interior_points(fc, n_pts, cfg.get("seed", 0))
        study = wf.residual_study(fc, pts)
        if not study["min_order"] >= min_order:
            status = FAIL
    summary = {
        "command": "field", "config": fc.to_dict(), "csv": csv_path.name,
        "axes": {"axis1": fc.grid.axis, "axis2": "t", "fixed": fc.grid.fixed,
                 "fixed_axis": "y" if fc.grid.axis == "x" else "x"},
        "u_range": [float(grid.u.min()), float(grid.u.max())],
        "residual": study, "min_order_required": min_order, "pass": status == OK,
    }
    (out / f"{stem}.json").write_text(_dumps(summary))
    return status, summary


COMMANDS = {"iterate": cmd_iterate, "verify": cmd_verify, "field": cmd_field,
            "adomian": cmd_adomian}


def _clean(obj):
    if isinstance(obj, float):
        if math.isinf(obj) or math.isnan(obj):
            return str(obj)
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def _dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmvp", description=(
        "Exact series and closed-form solutions of the reduced thermophoretic equation."))
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("iterate", "run the iterative scheme and fit the general term"),
                       ("verify", "check closed forms: residuals, recasts, shifts, series"),
                       ("field", "sample u(x, y, t) on a grid and check the PDE residual"),
                       ("adomian", "dump Adomian polynomials A_0..A_k")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", type=Path)
        p.add_argument("--preset")
        p.add_argument("--out")
        p.add_argument("--kmax", type=int)
        p.add_argument("--tolerance", type=float)
    return parser


def load_config(command: str, args) -> dict:
    if args.config and args.preset:
        raise ConfigError("give either --config or --preset, not both")
    if args.config:
        try:
            cfg = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    elif args.preset:
        cfg = preset_config(command, args.preset)
    else:
        raise ConfigError("one of --config or --preset is required")
    try:
        jsonschema.validate(cfg, SCHEMAS[command])
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid config: {exc.message}") from exc
    if args.kmax is not None and args.kmax < 0:
        raise ConfigError("--kmax must be nonnegative")
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.command, args)
        status, report = COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    except (ValueError, KeyError, TypeError, cfm.ValidityError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    except (cfm.PoleError, NotImplementedError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return FAIL
    text = _dumps(report)
    if args.command == "field":
        sys.stdout.write(_dumps({k: report[k] for k in ("csv", "pass", "u_range")}))
    elif args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{args.command}.json").write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
