"""Experiment runner: deterministic CSV/JSON artifacts from JSON configs.

Exit codes: 0 success, 2 config/schema violation (with field diagnostics),
3 numerical non-convergence or refinement instability (with a worst-cell
report).  Identical configs produce byte-identical CSV outputs.
"""
import argparse
import json
import math
import os
import sys

import numpy as np

from .errors import ConvergenceError, DomainError
from .operators import (apply_operator, check_nondegeneracy, check_support,
                        kernel_from_name)
from .psi import bgls_norm, fundamental_function, psi_from_name
from .quad import function_from_name
from . import sharpness
from .sharpness import (lp_curve, theorem1_scan, theorem2_scan,
                        theorem3_scan, theorem4_scan, verify_witness,
                        write_summary_json, write_sweep_csv)

_AMPLITUDES = ("exact_indicator", "bump")
_TOP_KEYS = {"schema", "theorem", "kernel", "f", "psi", "zeta", "psi_list",
             "f_list", "lambda_grid", "p_grid", "q_max", "tol_abs",
             "tol_rel", "x_points", "max_panels", "out", "threads",
             "refine", "stability"}


def _is_num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def validate_config(cfg):
    """Schema check; returns a list of 'field: problem' diagnostics."""
    if not isinstance(cfg, dict):
        return ["config: must be a JSON object"]
    errs = []

    def bad(path, msg):
        errs.append("%s: %s" % (path, msg))

    if cfg.get("schema") != 1:
        bad("schema", "required and must equal 1")
    for k in sorted(cfg):
        if k not in _TOP_KEYS:
            bad(k, "unknown field")
    if "theorem" in cfg and cfg["theorem"] not in (1, 2, 3, 4):
        bad("theorem", "must be 1, 2, 3 or 4")
    ker = cfg.get("kernel")
    if ker is not None:
        if not isinstance(ker, dict):
            bad("kernel", "must be an object")
        else:
            for k in sorted(ker):
                if k not in ("name", "amplitude", "coef"):
                    bad("kernel.%s" % k, "unknown field")
            if "name" in ker and not isinstance(ker["name"], str):
                bad("kernel.name", "must be a string")
            if ("amplitude" in ker
                    and ker["amplitude"] not in _AMPLITUDES):
                bad("kernel.amplitude",
                    "must be one of %s" % (_AMPLITUDES,))
            if "coef" in ker:
                c = ker["coef"]
                rows_ok = (isinstance(c, list) and c
                           and all(isinstance(r, list) and len(r) == len(c)
                                   and all(_is_num(v) for v in r)
                                   for r in c))
                if not rows_ok:
                    bad("kernel.coef", "must be a square numeric matrix")
    for key in ("f", "psi", "zeta", "out"):
        if key in cfg and not isinstance(cfg[key], str):
            bad(key, "must be a string")
    for key in ("psi_list", "f_list"):
        if key in cfg:
            v = cfg[key]
            if not (isinstance(v, list) and v
                    and all(isinstance(s, str) for s in v)):
                bad(key, "must be a nonempty array of names")
    if "lambda_grid" in cfg:
        g = cfg["lambda_grid"]
        if not (isinstance(g, list) and g):
            bad("lambda_grid", "must be a nonempty array")
        else:
            for i, v in enumerate(g):
                if not _is_num(v) or v < 1:
                    bad("lambda_grid[%d]" % i, "must be a number >= 1")
    if "p_grid" in cfg:
        g = cfg["p_grid"]
        if not (isinstance(g, list) and g):
            bad("p_grid", "must be a nonempty array")
        else:
            for i, v in enumerate(g):
                if not _is_num(v) or not 1.0 < v < 2.0:
                    bad("p_grid[%d]" % i, "must be a number in (1, 2)")
    if "q_max" in cfg and (not _is_num(cfg["q_max"]) or cfg["q_max"] <= 2):
        bad("q_max", "must be a number > 2")
    for key in ("tol_abs", "tol_rel", "stability"):
        if key in cfg and (not _is_num(cfg[key]) or cfg[key] <= 0):
            bad(key, "must be a positive number")
    for key, lo in (("x_points", 8), ("max_panels", 8), ("threads", 1),
                    ("refine", 0)):
        if key in cfg and (not _is_int(cfg[key]) or cfg[key] < lo):
            bad(key, "must be an integer >= %d" % lo)
    return errs


def _load_config(path):
    """Parsed config or a diagnostics list on failure."""
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as e:
        return None, ["config: %s" % e]
    except json.JSONDecodeError as e:
        return None, ["config line %d column %d: %s"
                      % (e.lineno, e.colno, e.msg)]
    return cfg, validate_config(cfg)


def _setting(args, cfg, key, default):
    v = getattr(args, key, None)
    if v is not None:
        return v
    if key in cfg:
        return cfg[key]
    return default


def _threads(args, cfg):
    if args.threads is not None:
        return args.threads
    env = os.environ.get("BGLS_OSC_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return cfg.get("threads", 1)


def _kernel(cfg):
    ker = cfg.get("kernel", {})
    name = ker.get("name", "fourier")
    coef = ker.get("coef")
    if coef is not None:
        coef = np.array(coef, dtype=float)
    return kernel_from_name(name, amplitude=ker.get("amplitude",
                                                    "exact_indicator"),
                            coef=coef)


def _fmt(v):
    return "%.17g" % float(v)


def _ensure_out(path):
    if path and path != ".":
        os.makedirs(path, exist_ok=True)
    return path or "."


def cmd_verify_witness(args, cfg):
    worst, rows = verify_witness()
    for r in rows:
        print("p=%s  quadrature=%s  closed_form=%s  rel_err=%.3e"
              % (_fmt(r["p"]), _fmt(r["quadrature"]),
                 _fmt(r["closed_form"]), r["rel_err"]))
    print("max relative error = %.3e" % worst)
    if worst > 1e-6:
        print("witness mismatch exceeds 1e-6 at some p", file=sys.stderr)
        return 3
    return 0


def _scan_kwargs(args, cfg):
    return {
        "tol": _setting(args, cfg, "tol_rel", 1e-7),
        "tol_abs": _setting(args, cfg, "tol_abs", 1e-10),
        "x_points": cfg.get("x_points", 512),
        "max_panels": cfg.get("max_panels", 1 << 17),
        "refine": int(_setting(args, cfg, "refine", 2)),
        "threads": int(_threads(args, cfg)),
    }


def cmd_scan(args, cfg):
    theorem = args.theorem if args.theorem is not None else cfg.get("theorem")
    if theorem not in (1, 2, 3, 4):
        print("theorem: must be 1, 2, 3 or 4 (flag --theorem or config)",
              file=sys.stderr)
        return 2
    kernel = _kernel(cfg)
    kw = _scan_kwargs(args, cfg)
    q_max = float(_setting(args, cfg, "q_max", 64.0))
    lam_grid = cfg.get("lambda_grid")
    if theorem == 1:
        psis = [psi_from_name(s) for s in cfg.get("psi_list", ["psi0"])]
        fs = [function_from_name(s) for s in cfg.get("f_list", ["f0"])]
        report = theorem1_scan(kernel, lambda_grid=lam_grid, psi_list=psis,
                               f_list=fs, q_max=q_max, **kw)
        headline = ("empirical_sup", report.empirical_sup)
    elif theorem == 2:
        report = theorem2_scan(kernel, lambda_grid=lam_grid,
                               psi=psi_from_name(cfg.get("psi", "psi0")),
                               zeta=psi_from_name(cfg.get("zeta", "zeta0")),
                               f=function_from_name(cfg.get("f", "f0")),
                               q_max=q_max, **kw)
        headline = ("max_ratio", report.empirical_sup)
    elif theorem == 3:
        inf_w, report = theorem3_scan(kernel, lambda_grid=lam_grid,
                                      p_grid=cfg.get("p_grid"),
                                      f=function_from_name(
                                          cfg.get("f", "f0")), **kw)
        headline = ("inf_W", inf_w)
    else:
        inf_z, report = theorem4_scan(kernel, lambda_grid=lam_grid,
                                      q_max=q_max, **kw)
        headline = ("inf_Z", inf_z)
    stability = float(cfg.get("stability", 0.05))
    report.notes["stability_threshold"] = stability
    out = _ensure_out(_setting(args, cfg, "out", "."))
    csv_path = os.path.join(out, "scan_theorem%d.csv" % theorem)
    json_path = os.path.join(out, "summary_theorem%d.json" % theorem)
    write_sweep_csv(report, csv_path)
    write_summary_json(report, json_path)
    print("theorem %d: %s = %s  refinement_delta = %s"
          % (theorem, headline[0], _fmt(headline[1]),
             "n/a" if report.refinement_delta is None
             else _fmt(report.refinement_delta)))
    print("wrote %s" % csv_path)
    print("wrote %s" % json_path)
    if not report.all_converged():
        lam, label = report.worst_cell()
        print("non-converged cell: lambda=%s %s" % (_fmt(lam), label),
              file=sys.stderr)
        return 3
    if (report.refinement_delta is not None
            and report.refinement_delta > stability):
        print("refinement_delta %s exceeds stability threshold %s"
              % (_fmt(report.refinement_delta), _fmt(stability)),
              file=sys.stderr)
        return 3
    return 0


def cmd_bgls_norm(args, cfg):
    psi = psi_from_name(args.psi)
    f = function_from_name(args.f)
    hi = psi.b if psi.cap is None else min(psi.b, psi.cap)
    curve = lp_curve(f, psi.a, hi)
    r = bgls_norm(curve, psi)
    print(_fmt(r.value))
    if not r.stable:
        print("warning: sup changed %.3g under grid doubling"
              % r.refinement_delta, file=sys.stderr)
    return 0


def cmd_fundamental(args, cfg):
    psi = psi_from_name(args.psi)
    r = fundamental_function(psi, args.delta)
    print(_fmt(r.value))
    return 0


def cmd_apply(args, cfg):
    kernel = _kernel(cfg)
    f = function_from_name(args.f)
    fld = apply_operator(kernel, args.lam, f,
                         tol_abs=_setting(args, cfg, "tol_abs", 1e-10),
                         tol_rel=_setting(args, cfg, "tol_rel", 1e-8),
                         x_points=cfg.get("x_points", 512),
                         max_panels=cfg.get("max_panels", 1 << 17))
    lines = ["x,re,im,abs,err"]
    for i in range(fld.x.size):
        v = fld.values[i]
        lines.append(",".join([_fmt(fld.x[i]), _fmt(v.real), _fmt(v.imag),
                               _fmt(abs(v)), _fmt(fld.per_point_error[i])]))
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        out = _ensure_out(args.out)
        path = os.path.join(out, "field_lambda%s_%s.csv"
                            % (_fmt(args.lam), f.name))
        with open(path, "w", newline="") as fh:
            fh.write(text)
        print("wrote %s" % path)
    if not fld.converged:
        x, err = fld.worst_point
        print("non-converged point: x=%s err=%.3e" % (_fmt(x), err),
              file=sys.stderr)
        return 3
    return 0


def cmd_check_kernel(args, cfg):
    kernel = _kernel(cfg)
    rc = 0
    if check_support(kernel):
        print("support: ok (amplitude vanishes outside |x|^2+|y|^2 <= %s)"
              % _fmt(kernel.support_radius))
    else:
        print("support: violated")
        rc = 3
    det = check_nondegeneracy(kernel)
    print("nondegeneracy: min |det d2 phase/dx dy| = %s" % _fmt(det))
    if det <= 1e-12:
        print("kernel is degenerate on the sampled grid", file=sys.stderr)
        rc = 3
    return rc


def build_parser():
    ap = argparse.ArgumentParser(
        prog="bgls-osc",
        description="Oscillatory-operator norm experiments: witness checks, "
                    "theorem scans, and field dumps with reproducible "
                    "CSV/JSON output.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", metavar="PATH",
                       help="JSON run configuration (schema 1)")
        p.add_argument("--out", metavar="DIR", default=None,
                       help="output directory")
        p.add_argument("--threads", type=int, default=None,
                       help="sweep workers (env BGLS_OSC_THREADS)")
        p.add_argument("--tol-abs", dest="tol_abs", type=float, default=None)
        p.add_argument("--tol-rel", dest="tol_rel", type=float, default=None)
        p.add_argument("--qmax", dest="q_max", type=float, default=None)
        p.add_argument("--refine", type=int, default=None,
                       help="grid refinement factor; <= 1 disables the "
                            "refinement pass")

    p = sub.add_parser("verify-witness",
                       help="closed-form vs quadrature |f0|_p")
    common(p)
    p.set_defaults(func=cmd_verify_witness)

    p = sub.add_parser("scan", help="run a theorem sweep, emit CSV + JSON")
    common(p)
    p.add_argument("--theorem", type=int, choices=(1, 2, 3, 4), default=None)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bgls-norm", help="norm of a profile against a weight")
    common(p)
    p.add_argument("--psi", default="psi0")
    p.add_argument("--f", default="f0")
    p.set_defaults(func=cmd_bgls_norm)

    p = sub.add_parser("fundamental", help="fundamental function of a weight")
    common(p)
    p.add_argument("--psi", default="psi0")
    p.add_argument("--delta", type=float, required=True)
    p.set_defaults(func=cmd_fundamental)

    p = sub.add_parser("apply", help="dump u(x) = (T_lam f)(x) samples")
    common(p)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--f", default="f0")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("check-kernel", help="support + non-degeneracy checks")
    common(p)
    p.set_defaults(func=cmd_check_kernel)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    cfg = {}
    if args.config:
        cfg, errs = _load_config(args.config)
        if errs:
            for e in errs:
                print("config error: %s" % e, file=sys.stderr)
            return 2
    try:
        return args.func(args, cfg)
    except DomainError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except ConvergenceError as e:
        print("non-convergence: %s" % e, file=sys.stderr)
        return 3
    except BrokenPipeError:
        # reader closed the pipe (e.g. | head); exit quietly
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
