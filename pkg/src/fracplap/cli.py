"""Command-line frontend: ``python -m fracplap <command> [flags]``.

Every command writes one report. JSON reports have the top-level keys
params, config, rows and summary, with keys sorted and floats written with
17 significant digits. CSV is available for the row-shaped commands.

Exit codes: 0 ok, 1 failed verification, 2 usage or domain error,
3 non-convergence, 4 IO error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DivisionByNearZero, DomainError, NonConvergence
from .model import Params, Profile
from .quad import QuadConfig

__all__ = ["main", "dumps", "parse_number", "parse_grid"]

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NONCONV, EXIT_IO = 0, 1, 2, 3, 4

COMMANDS = ("eval", "sweep", "identity", "closedform", "singfit", "scaling", "hopf", "lsp",
            "compare-methods", "verify")
ROW_COMMANDS = ("eval", "sweep", "closedform", "singfit")
CSV_COLUMNS = ("x", "value", "err_est", "n_evals", "status")

DEFAULTS = {
    "n": 1, "s": 0.5, "p": 2.0, "c_norm": 1.0, "x": None, "r0": None, "rho": None,
    "t": None, "grid": None, "abs_tol": QuadConfig.abs_tol, "rel_tol": QuadConfig.rel_tol,
    "jobs": 1, "format": None, "out": None, "method": "auto", "j_max": 14,
    "criteria": None,
}


class UsageError(Exception):
    pass


def parse_number(text) -> float:
    """A decimal or a simple fraction such as "1/3"."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    try:
        return float(Fraction(str(text).strip()))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None


def parse_grid(text) -> list[float]:
    """"start:stop:count" (inclusive endpoints) or a JSON-style list of numbers."""
    if isinstance(text, (list, tuple)):
        return [parse_number(v) for v in text]
    parts = str(text).split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be start:stop:count, got {text!r}")
    start, stop = parse_number(parts[0]), parse_number(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise UsageError(f"grid count must be an integer, got {parts[2]!r}") from None
    if count < 0:
        raise UsageError("grid count must be >= 0")
    return [float(v) for v in np.linspace(start, stop, count)]


def _float_text(v: float) -> str:
    return format(v, ".17g") if math.isfinite(v) else "null"


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float_text(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: "
                 f"{_encode(obj[k], indent, level + 1)}" for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON with sorted keys, '.17g' floats and null for non-finite numbers."""
    return _encode(obj, indent, 0) + "\n"


def _csv_text(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_float_text(r[c]) if isinstance(r[c], float) else r[c]
                    for c in CSV_COLUMNS])
    return buf.getvalue()


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("parameters")
    g.add_argument("--n", type=int, help="dimension (default 1)")
    g.add_argument("--s", help="order s in (0, 1); fractions like 1/3 accepted")
    g.add_argument("--p", help="exponent p >= 2")
    g.add_argument("--c-norm", dest="c_norm", help="normalization constant (default 1)")
    g.add_argument("--x", help="evaluation point (a radius when n >= 2)")
    g.add_argument("--r0", help="evaluation radius for n >= 2")
    g.add_argument("--rho", help="radius of the scaled bump (eval/sweep) or barrier radius")
    g.add_argument("--t", help="cusp exponent for lsp")
    g.add_argument("--grid", help="start:stop:count, endpoints included")
    g.add_argument("--method", choices=("auto", "direct", "decomposed"),
                   help="1D evaluator (default auto)")
    g.add_argument("--j-max", dest="j_max", type=int, help="finest level for singfit")
    g.add_argument("--criteria", help="comma-separated criterion numbers for verify")
    q = common.add_argument_group("quadrature and output")
    q.add_argument("--abs-tol", dest="abs_tol")
    q.add_argument("--rel-tol", dest="rel_tol")
    q.add_argument("--jobs", type=int, help="worker processes for sweeps")
    q.add_argument("--format", choices=("json", "csv"))
    q.add_argument("--out", help="output file (default stdout)")
    q.add_argument("--config", help="JSON file of defaults; flags override it")
    ap = argparse.ArgumentParser(prog="fracplap", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return ap


def _settings(args) -> dict:
    merged = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                conf = json.load(fh)
        except OSError as exc:
            raise OSError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config is not valid JSON: {exc}") from None
        if not isinstance(conf, dict):
            raise UsageError("config must be a JSON object")
        unknown = set(conf) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        merged.update(conf)
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    for key in ("s", "p", "c_norm", "abs_tol", "rel_tol"):
        merged[key] = parse_number(merged[key])
    for key in ("x", "r0", "rho", "t"):
        if merged[key] is not None:
            merged[key] = parse_number(merged[key])
    if merged["grid"] is not None:
        merged["grid"] = parse_grid(merged["grid"])
    if int(merged["jobs"]) < 1:
        raise UsageError("--jobs must be >= 1")
    return merged


def _profile(st) -> Profile:
    if st["rho"] is not None:
        return Profile.scaled_bump(st["s"], st["rho"])
    return Profile.bump(st["s"])


def _point(st) -> float:
    x = st["r0"] if st["r0"] is not None else st["x"]
    if x is None:
        raise UsageError("--x (or --r0) is required")
    return x


def _row_dict(r) -> dict:
    return {"x": r.x, "value": r.value, "err_est": r.err_est, "n_evals": r.n_evals,
            "status": r.status}


def _check_inside(xs, u: Profile):
    for x in xs:
        if not abs(x) < u.support_radius:
            raise DomainError("x outside open support")


def cmd_eval(st, params, cfg):
    from .analysis import raise_for_rows, sweep_rows
    u = _profile(st)
    xs = [_point(st)] if st["grid"] is None else st["grid"]
    _check_inside(xs, u)
    rows = sweep_rows(u, xs, params, cfg, int(st["jobs"]), st["method"])
    raise_for_rows(rows)
    return [_row_dict(r) for r in rows], {"profile": u.kind}


def cmd_sweep(st, params, cfg):
    from .analysis import sweep_rows
    if st["grid"] is None:
        raise UsageError("--grid is required")
    u = _profile(st)
    _check_inside(st["grid"], u)
    rows = sweep_rows(u, st["grid"], params, cfg, int(st["jobs"]), st["method"])
    ok = [r.value for r in rows if r.status == "ok"]
    summary = {"profile": u.kind, "n_ok": len(ok), "n_failed": len(rows) - len(ok),
               "max_abs": max((abs(v) for v in ok), default=math.nan)}
    if len(ok) < len(rows):
        summary["failed"] = True
    return [_row_dict(r) for r in rows], summary


def cmd_identity(st, params, cfg):
    from .analysis import identity_residual
    rep = identity_residual(params.s, params.p, cfg)
    rows = [{"eps": e, "h1": a, "h2": b, "h3": c}
            for e, a, b, c in zip(rep.eps_sequence, rep.h1, rep.h2, rep.h3)]
    return rows, {"residual": rep.residual, "err_est": rep.err_est,
                  "h3_limit": rep.h3_limit}


def cmd_closedform(st, params, cfg):
    from .analysis import closed_form_half, closed_form_range
    p = params.p
    if p not in (2.0, 4.0, 6.0, 8.0):
        raise DomainError(f"closed forms exist for p in (2, 4, 6, 8), got {p!r}")
    xs = st["grid"] if st["grid"] is not None else [_point(st)]
    rows = [{"x": x, "value": closed_form_half(int(p), x, params.c_norm), "err_est": 0.0,
             "n_evals": 0, "status": "ok"} for x in xs]
    lo, hi = closed_form_range(int(p), params.c_norm)
    return rows, {"range_low": lo, "range_high": hi}


def cmd_singfit(st, params, cfg):
    from .analysis import singular_fit
    fit = singular_fit(params, cfg, int(st["j_max"]), jobs=int(st["jobs"]))
    rows = [{"x": x, "value": v, "err_est": math.nan, "n_evals": 0, "status": "ok"}
            for x, v in zip(fit.xs, fit.values)]
    return rows, {"a": fit.a, "b": fit.b, "relative_b": fit.relative_b,
                  "residual": fit.residual, "dropped": list(fit.dropped)}


def cmd_scaling(st, params, cfg):
    from .analysis import scaling_check
    rho = st["rho"] if st["rho"] is not None else 2.0
    x = _point(st)
    pt = x if params.n == 1 else tuple([x] + [0.0] * (params.n - 1))
    return [], {"rho": rho, "x": x, "relative_error": scaling_check(rho, pt, params, cfg)}


def cmd_hopf(st, params, cfg):
    from .analysis import hopf_report
    rep = hopf_report(params, st["rho"] if st["rho"] is not None else 0.1, cfg)
    rows = [{"delta": d, "ratio": r} for d, r in rep.ratio_trace]
    summary = {"rho": rep.rho, "c0": rep.c0, "c_d": rep.c_d, "c_rho": rep.c_rho,
               "eps_max": rep.eps_max, "lower_bound": rep.lower_bound,
               "scaling_errs": list(rep.scaling_errs),
               "trace_above_bound": rep.trace_above_bound}
    return rows, summary


def cmd_lsp(st, params, cfg):
    from .analysis import lsp_tail, lsp_window
    if st["t"] is None:
        raise UsageError("--t is required")
    res = lsp_tail(st["t"], params, cfg)
    lo, hi = lsp_window(params)
    return [], {"t": res.t_exp, "finite": res.finite, "value": res.value,
                "err_est": res.err_est, "kernel_part": res.kernel_part,
                "window_low": lo, "window_high": hi}


def cmd_compare(st, params, cfg):
    xs = st["grid"] if st["grid"] is not None else [_point(st)]
    rows = []
    if params.n == 1:
        from .oplap1d import eval_decomposed_1d, eval_direct_1d
        u = Profile.bump(params.s)
        for x in xs:
            if not 0.0 < x < 1.0:
                raise DomainError("compare-methods needs 0 < x < 1")
            a = eval_direct_1d(u, x, params, cfg)
            b = eval_decomposed_1d(params.s, x, params, cfg)
            rows.append((x, "direct", a, "decomposed", b))
    elif params.n == 2:
        from .oplapnd import eval_cartesian_2d, eval_radial_nd
        u = Profile.bump(params.s)
        oracle = QuadConfig(abs_tol=max(cfg.abs_tol, 1e-8), rel_tol=max(cfg.rel_tol, 1e-4))
        for x in xs:
            _check_inside([x], u)
            a = eval_radial_nd(u, abs(x), params, cfg)
            b = eval_cartesian_2d(u, (x, 0.0), params, oracle)
            rows.append((x, "radial", a, "cartesian", b))
    else:
        raise DomainError("compare-methods supports n = 1 and n = 2")
    out = [{"x": x, "method_a": na, "value_a": a.value, "err_a": a.err_est,
            "method_b": nb, "value_b": b.value, "err_b": b.err_est,
            "agree": bool(abs(a.value - b.value) <= a.err_est + b.err_est)}
           for x, na, a, nb, b in rows]
    return out, {"all_agree": all(r["agree"] for r in out)}


def cmd_verify(st, params, cfg):
    from .acceptance import run_all
    numbers = None
    if st["criteria"]:
        try:
            numbers = [int(v) for v in str(st["criteria"]).split(",")]
        except ValueError:
            raise UsageError("--criteria must be comma-separated integers") from None
    results = run_all(numbers)
    criteria = []
    for c in results:
        w = c.worst()
        criteria.append({
            "number": c.number, "name": c.name, "pass": c.passed,
            "expected": None if w is None else _jsonable(w.expected),
            "got": None if w is None else w.got,
            "tol": None if w is None else w.tol,
            "check": None if w is None else w.name,
            # wall time stays in the table so the report bytes are reproducible
            "budget_s": c.budget_s, "within_budget": c.within_budget, "error": c.error,
        })
    return [], {"criteria": criteria, "passed": all(c.passed for c in results),
                "_table": "\n".join(c.summary_line() for c in results)}


def _jsonable(v):
    return v if isinstance(v, (bool, int, float, str)) or v is None else str(v)


HANDLERS = {
    "eval": cmd_eval, "sweep": cmd_sweep, "identity": cmd_identity,
    "closedform": cmd_closedform, "singfit": cmd_singfit, "scaling": cmd_scaling,
    "hopf": cmd_hopf, "lsp": cmd_lsp, "compare-methods": cmd_compare, "verify": cmd_verify,
}


def _write(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    command = args.command
    try:
        st = _settings(args)
        fmt = st["format"] or "json"
        if fmt == "csv" and command not in ROW_COMMANDS:
            raise UsageError(f"csv output is available for {', '.join(ROW_COMMANDS)}")
        params = Params(int(st["n"]), st["s"], st["p"], st["c_norm"])
        cfg = QuadConfig(abs_tol=st["abs_tol"], rel_tol=st["rel_tol"])
        rows, summary = HANDLERS[command](st, params, cfg)
    except (UsageError, DomainError, DivisionByNearZero) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergence as exc:
        print(f"error: no convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    table = summary.pop("_table", None)
    failed = summary.pop("failed", False)
    if fmt == "csv":
        text = _csv_text(rows)
    else:
        text = dumps({
            "params": dataclasses.asdict(params),
            "config": dataclasses.asdict(cfg),
            "rows": rows,
            "summary": summary,
        })
    try:
        if table is not None and st["format"] is None and st["out"] is None:
            _write(table + "\n", None)
        else:
            if table is not None:
                print(table, file=sys.stderr)
            _write(text, st["out"])
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if command == "verify":
        return EXIT_OK if summary["passed"] else EXIT_FAILED
    return EXIT_NONCONV if failed else EXIT_OK
