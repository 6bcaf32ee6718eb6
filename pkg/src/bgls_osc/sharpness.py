"""Theorem-level experiments on the decay estimate.

W is the scale-normalized ratio |T_lam f|_q * lam^(d/q) / |f|_p with
q = p/(p-1); Z is the norm ratio ||T_lam f||_G(psi_lam) / ||f||_G(psi)
with psi_lam the dual-exponent transform of psi.  The four scans sweep
these over lambda/exponent grids: the upper-bound sweeps track the
empirical sup (finite, refinement-stable), the witness scans with
(f0, psi0) track the empirical inf (positive, refinement-stable).
"""
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError
from .operators import apply_operator, field_lq_curve, field_lq_norm
from .psi import (LpCurve, PsiFunction, SupResult, bgls_norm,
                  conjugate_exponent, fundamental_function, psi0_weight,
                  psi_product, transform_psi_lambda, zeta0_weight)
from .quad import FunctionSpec, lp_norm, witness_f0

DEFAULT_LAMBDA_GRID = (2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0,
                       512.0, 1024.0)
DEFAULT_P_GRID = (1.1, 1.25, 1.5, 1.75, 1.9, 1.95, 1.99)
THEOREM1_LAMBDAS = (4.0, 16.0, 64.0, 256.0, 1024.0)
THEOREM2_LAMBDAS = (4.0, 64.0)
THEOREM3_LAMBDAS = (64.0, 256.0, 1024.0)
THEOREM3_PS = (1.9, 1.95, 1.99)
THEOREM4_LAMBDAS = (2.0, 8.0, 32.0, 128.0, 512.0)


@dataclass
class Witness:
    """The sharpness pair: f0(y) = |y|^(-1/2) on 0 < |y| <= 1 and
    psi0(p) = [4/(2-p)]^(1/p) on (1, 2), with |f0|_p = psi0(p) exactly."""
    f0: FunctionSpec
    psi0: PsiFunction
    lp_curve: LpCurve


def make_witness():
    return Witness(
        f0=witness_f0(),
        psi0=psi0_weight(),
        lp_curve=LpCurve(1.0, 2.0,
                         lambda p: (4.0 / (2.0 - p)) ** (1.0 / p),
                         provenance="closed_form"))


def lp_curve(f, a, b, tol_abs=1e-12, tol_rel=1e-10):
    """p -> |f|_p as a memoized curve; exact closed forms are preferred."""
    if f.lp_closed_form is not None:
        return LpCurve(float(a), float(b), f.lp_closed_form,
                       provenance="closed_form")
    return LpCurve(float(a), float(b),
                   lambda p: lp_norm(f, p, tol_abs=tol_abs, tol_rel=tol_rel),
                   provenance="quadrature")


def _effective_hi(psi):
    hi = psi.b
    if psi.cap is not None:
        hi = min(hi, psi.cap)
    return hi


def _pmap(fn, items, threads):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=int(threads)) as ex:
        return list(ex.map(fn, items))


@dataclass
class WResult:
    """One W cell; value = u_norm * lam^(d/q) / f_norm."""
    value: float
    lam: float
    p: float
    q: float
    u_norm: float
    f_norm: float
    converged: bool

    def __float__(self):
        return self.value


def W_functional(kernel, lam, f, p, tol=1e-7, tol_abs=1e-10, x_points=512,
                 max_panels=1 << 17, field=None):
    """W(lam, f, p) = |T_lam f|_q * lam^(d/q) / |f|_p with q = p/(p-1).

    A precomputed field for (kernel, lam, f) may be passed to share the
    expensive operator evaluation across many p.  Convergence of the field
    and of the q-norm quadrature is propagated, never asserted.
    """
    lam = float(lam)
    p = float(p)
    if not 1.0 < p < 2.0:
        raise DomainError("W is defined for p in (1, 2), got %g" % p)
    q = conjugate_exponent(p)
    if f.lp_closed_form is not None:
        f_norm = float(f.lp_closed_form(p))
    else:
        f_norm = lp_norm(f, p)
    if f_norm == 0.0:
        raise DomainError("W requires a nonzero profile f")
    if not math.isfinite(f_norm):
        raise DomainError("|f|_p diverges at p=%g" % p)
    if field is None:
        field = apply_operator(kernel, lam, f, tol_abs=tol_abs, tol_rel=tol,
                               max_panels=max_panels, x_points=x_points)
    r = field_lq_norm(field, q, tol_abs=tol_abs, tol_rel=tol,
                      max_panels=max_panels)
    value = r.value * lam ** (kernel.dim / q) / f_norm
    return WResult(value=value, lam=lam, p=p, q=q, u_norm=r.value,
                   f_norm=f_norm, converged=field.converged and r.converged)


@dataclass
class ZResult:
    """One Z cell; value = numerator / denominator."""
    value: float
    lam: float
    numerator: float
    denominator: float
    q_argmax: float
    converged: bool
    stable: bool
    num_sup: SupResult
    den_sup: SupResult

    def __float__(self):
        return self.value


def Z_functional(kernel, lam, psi, f, q_max=64.0, tol=1e-7, tol_abs=1e-10,
                 density=1, x_points=512, max_panels=1 << 17, field=None,
                 f_curve=None):
    """Z(lam, psi, f) = ||T_lam f||_G(psi_lam) / ||f||_G(psi).

    The numerator takes the supremum of |u|_q / psi_lam(q) over the dual
    interval (capped at q_max when it is unbounded); the denominator is the
    norm of f against psi.  A zero or infinite denominator is a domain
    error: the ratio only measures profiles living in G(psi).
    """
    lam = float(lam)
    if f_curve is None:
        f_curve = lp_curve(f, psi.a, _effective_hi(psi))
    den = bgls_norm(f_curve, psi, density=density)
    if den.value == 0.0:
        raise DomainError("Z requires a nonzero profile f")
    if math.isinf(den.value):
        raise DomainError("f has infinite norm against psi")
    psi_lam = transform_psi_lambda(psi, lam, kernel.dim, q_max=q_max)
    if field is None:
        field = apply_operator(kernel, lam, f, tol_abs=tol_abs, tol_rel=tol,
                               max_panels=max_panels, x_points=x_points)
    hi = _effective_hi(psi_lam)
    u_curve, flags = field_lq_curve(field, q_lo=psi_lam.a, q_hi=hi,
                                    tol_abs=tol_abs, tol_rel=tol,
                                    max_panels=max_panels)
    num = bgls_norm(u_curve, psi_lam, density=density)
    value = num.value / den.value
    converged = (field.converged and bool(flags) and all(flags)
                 and math.isfinite(value))
    return ZResult(value=value, lam=lam, numerator=num.value,
                   denominator=den.value, q_argmax=num.argmax,
                   converged=converged, stable=num.stable and den.stable,
                   num_sup=num, den_sup=den)


@dataclass
class Theorem2Result:
    """Factorized-bound cell: ratio = lhs / rhs where
    lhs = lam^d * ||u||_G(nu_star) and rhs = phi(G(zeta), lam^d) * ||f||_G(psi)."""
    ratio: float
    lam: float
    lhs: float
    rhs: float
    q_argmax: float
    fundamental: float
    f_norm: float
    converged: bool

    def __float__(self):
        return self.ratio


def theorem2_check(kernel, lam, psi, zeta, f, q_max=64.0, tol=1e-7,
                   tol_abs=1e-10, density=1, x_points=512,
                   max_panels=1 << 17, field=None, f_curve=None):
    """Ratio of the factorized bound; bounded uniformly in lam, not <= 1.

    nu = psi*zeta and nu_star is its dual reparametrization, capped at
    q_max when unbounded.  The ratio carries the implicit constant of the
    underlying decay estimate, so boundedness and refinement stability are
    the checkable properties.
    """
    lam = float(lam)
    if lam < 1.0:
        raise DomainError("theorem2_check requires lam >= 1")
    nu, nu_star = psi_product(psi, zeta)
    if math.isinf(nu_star.b):
        nu_star = nu_star.with_cap(q_max)
    if f_curve is None:
        f_curve = lp_curve(f, psi.a, _effective_hi(psi))
    den = bgls_norm(f_curve, psi, density=density)
    if den.value == 0.0:
        raise DomainError("theorem2_check requires a nonzero profile f")
    if math.isinf(den.value):
        raise DomainError("f has infinite norm against psi")
    if field is None:
        field = apply_operator(kernel, lam, f, tol_abs=tol_abs, tol_rel=tol,
                               max_panels=max_panels, x_points=x_points)
    hi = _effective_hi(nu_star)
    u_curve, flags = field_lq_curve(field, q_lo=nu_star.a, q_hi=hi,
                                    tol_abs=tol_abs, tol_rel=tol,
                                    max_panels=max_panels)
    num = bgls_norm(u_curve, nu_star, density=density)
    delta = lam ** kernel.dim
    fund = fundamental_function(zeta, delta, density=density)
    lhs = delta * num.value
    rhs = fund.value * den.value
    ratio = lhs / rhs
    converged = (field.converged and bool(flags) and all(flags)
                 and math.isfinite(ratio))
    return Theorem2Result(ratio=ratio, lam=lam, lhs=lhs, rhs=rhs,
                          q_argmax=num.argmax, fundamental=fund.value,
                          f_norm=den.value, converged=converged)


@dataclass
class SweepReport:
    """Grid sweep outcome plus the empirical constants it estimates.

    W_values is lambda x p (lower-bound scan); Z_values is lambda x pairs
    for the upper-bound sweep, a vector for the single-pair scans.
    refinement_delta is the relative change of the headline statistic when
    every grid is refined (sup-scan density and x-grid multiplied, *
    quadrature tolerances tightened tenfold).
    """
    theorem: int
    lambda_grid: np.ndarray
    p_grid: np.ndarray
    W_values: np.ndarray
    Z_values: np.ndarray
    q_values: np.ndarray
    converged: np.ndarray
    empirical_sup: float = None
    empirical_inf_W: float = None
    empirical_inf_Z: float = None
    refinement_delta: float = None
    pair_names: tuple = ()
    notes: dict = field(default_factory=dict)

    def to_csv_text(self):
        """Fixed header, 17-significant-digit floats, deterministic bytes."""
        rows = [_CSV_HEADER]
        lam = np.atleast_1d(self.lambda_grid)
        if self.theorem == 3:
            for i in range(lam.size):
                for j in range(self.p_grid.size):
                    rows.append(_csv_row(
                        lam[i], self.p_grid[j], self.q_values[i, j],
                        self.W_values[i, j], None, self.converged[i, j]))
        elif self.theorem == 1:
            z = np.atleast_2d(self.Z_values)
            qv = np.atleast_2d(self.q_values)
            cv = np.atleast_2d(self.converged)
            for i in range(lam.size):
                for j in range(z.shape[1]):
                    rows.append(_csv_row(lam[i], None, qv[i, j], None,
                                         z[i, j], cv[i, j]))
        else:
            for i in range(lam.size):
                rows.append(_csv_row(lam[i], None, self.q_values[i], None,
                                     self.Z_values[i], self.converged[i]))
        return "\n".join(rows) + "\n"

    def summary_dict(self):
        grids = {"lambda": [float(v) for v in np.atleast_1d(self.lambda_grid)],
                 "p": [float(v) for v in np.atleast_1d(self.p_grid)],
                 "pairs": list(self.pair_names)}
        return {"schema": 1,
                "theorem": int(self.theorem),
                "empirical_sup": _jnum(self.empirical_sup),
                "inf_W": _jnum(self.empirical_inf_W),
                "inf_Z": _jnum(self.empirical_inf_Z),
                "refinement_delta": _jnum(self.refinement_delta),
                "grids": grids,
                "notes": self.notes}

    def all_converged(self):
        return bool(np.all(self.converged))

    def worst_cell(self):
        """(lam, label) of the first non-converged cell, or None."""
        conv = np.asarray(self.converged)
        lam = np.atleast_1d(self.lambda_grid)
        if conv.ndim <= 1:
            bad = np.nonzero(~np.atleast_1d(conv))[0]
            if bad.size == 0:
                return None
            return (float(lam[int(bad[0])]), "")
        bad = np.nonzero(~conv)
        if bad[0].size == 0:
            return None
        i, j = int(bad[0][0]), int(bad[1][0])
        if self.theorem == 3:
            return (float(lam[i]), "p=%.17g" % self.p_grid[j])
        if self.theorem == 1 and self.pair_names:
            return (float(lam[i]), self.pair_names[j])
        return (float(lam[i]), "")


_CSV_HEADER = "lambda,p,q,W,Z,converged"


def _fmt(v):
    if v is None:
        return ""
    v = float(v)
    if math.isnan(v):
        return ""
    return "%.17g" % v


def _csv_row(lam, p, q, w, z, conv):
    return ",".join([_fmt(lam), _fmt(p), _fmt(q), _fmt(w), _fmt(z),
                     "true" if conv else "false"])


def _jnum(v):
    return None if v is None else float(v)


def write_sweep_csv(report, path):
    with open(path, "w", newline="") as fh:
        fh.write(report.to_csv_text())


def write_summary_json(report, path):
    text = json.dumps(report.summary_dict(), sort_keys=True, indent=2)
    with open(path, "w", newline="") as fh:
        fh.write(text + "\n")


def _sweep_stats(values, conv):
    ok = np.asarray(conv, dtype=bool)
    if not ok.any():
        raise ConvergenceError("no cell of the sweep converged")
    vals = np.asarray(values, dtype=float)[ok]
    return float(np.max(vals)), float(np.min(vals))


def _rel_change(a, b):
    return abs(b - a) / max(abs(a), abs(b), 1e-300)


def theorem1_scan(kernel, lambda_grid=None, psi_list=None, f_list=None,
                  q_max=64.0, tol=1e-7, tol_abs=1e-10, x_points=512,
                  max_panels=1 << 17, refine=2, threads=1):
    """Upper-bound sweep: Z over lambda_grid x zip(psi_list, f_list).

    empirical_sup is the max over converged cells; non-converged cells are
    excluded from the statistics and listed in notes["excluded"].  With
    refine > 1 the sweep repeats with all grids refined and the relative
    change of the sup is reported as refinement_delta.
    """
    if lambda_grid is None:
        lambda_grid = THEOREM1_LAMBDAS
    if psi_list is None:
        psi_list = [psi0_weight()]
    if f_list is None:
        f_list = [witness_f0()]
    if len(psi_list) != len(f_list):
        raise DomainError("psi_list and f_list must pair up")
    lams = [float(v) for v in lambda_grid]
    if not lams or not psi_list:
        raise DomainError("empty sweep grids")
    pairs = list(zip(psi_list, f_list))
    curves = [lp_curve(f, psi.a, _effective_hi(psi)) for psi, f in pairs]

    def run_pass(density, xp, tr, ta):
        z = np.zeros((len(lams), len(pairs)))
        qa = np.zeros_like(z)
        conv = np.zeros(z.shape, dtype=bool)

        def one(il):
            lam = lams[il]
            fields = {}
            out = []
            for j, (psi, f) in enumerate(pairs):
                fld = fields.get(id(f))
                if fld is None:
                    fld = apply_operator(kernel, lam, f, tol_abs=ta,
                                         tol_rel=tr, max_panels=max_panels,
                                         x_points=xp)
                    fields[id(f)] = fld
                out.append(Z_functional(kernel, lam, psi, f, q_max=q_max,
                                        tol=tr, tol_abs=ta, density=density,
                                        max_panels=max_panels, field=fld,
                                        f_curve=curves[j]))
            return out

        for il, row in enumerate(_pmap(one, range(len(lams)), threads)):
            for j, zr in enumerate(row):
                z[il, j] = zr.value
                qa[il, j] = zr.q_argmax
                conv[il, j] = zr.converged
        return z, qa, conv

    z1, q1, c1 = run_pass(1, x_points, tol, tol_abs)
    sup1, inf1 = _sweep_stats(z1, c1)
    delta = None
    notes = {"q_max": float(q_max),
             "excluded": [[lams[i], pairs[j][0].name + "|" + pairs[j][1].name]
                          for i, j in zip(*np.nonzero(~c1))]}
    if refine and refine > 1:
        r = int(refine)
        z2, _, c2 = run_pass(r, x_points * r, 0.1 * tol, 0.1 * tol_abs)
        sup2, _ = _sweep_stats(z2, c2)
        delta = _rel_change(sup1, sup2)
        notes["refined_sup"] = sup2
    return SweepReport(
        theorem=1, lambda_grid=np.array(lams), p_grid=np.array([]),
        W_values=np.zeros((0, 0)), Z_values=z1, q_values=q1, converged=c1,
        empirical_sup=sup1, empirical_inf_Z=inf1, refinement_delta=delta,
        pair_names=tuple("%s|%s" % (psi.name, f.name) for psi, f in pairs),
        notes=notes)


def theorem2_scan(kernel, lambda_grid=None, psi=None, zeta=None, f=None,
                  q_max=64.0, tol=1e-7, tol_abs=1e-10, x_points=512,
                  max_panels=1 << 17, refine=2, threads=1):
    """Factorized-bound sweep: the ratio of theorem2_check over lambda_grid.

    The Z column of the emitted CSV holds the ratio.  empirical_sup is the
    max ratio; refinement_delta tracks it under grid refinement.
    """
    if lambda_grid is None:
        lambda_grid = THEOREM2_LAMBDAS
    if psi is None:
        psi = psi0_weight()
    if zeta is None:
        zeta = zeta0_weight()
    if f is None:
        f = witness_f0()
    lams = [float(v) for v in lambda_grid]
    if not lams:
        raise DomainError("empty sweep grids")
    f_curve = lp_curve(f, psi.a, _effective_hi(psi))

    def run_pass(density, xp, tr, ta):
        def one(lam):
            return theorem2_check(kernel, lam, psi, zeta, f, q_max=q_max,
                                  tol=tr, tol_abs=ta, density=density,
                                  x_points=xp, max_panels=max_panels,
                                  f_curve=f_curve)
        cells = _pmap(one, lams, threads)
        ratios = np.array([c.ratio for c in cells])
        qa = np.array([c.q_argmax for c in cells])
        conv = np.array([c.converged for c in cells])
        return ratios, qa, conv

    r1, q1, c1 = run_pass(1, x_points, tol, tol_abs)
    sup1, inf1 = _sweep_stats(r1, c1)
    delta = None
    notes = {"q_max": float(q_max),
             "z_column": "factorized-bound ratio lhs/rhs",
             "pair": "%s,%s|%s" % (psi.name, zeta.name, f.name)}
    if refine and refine > 1:
        r = int(refine)
        r2, _, c2 = run_pass(r, x_points * r, 0.1 * tol, 0.1 * tol_abs)
        sup2, _ = _sweep_stats(r2, c2)
        delta = _rel_change(sup1, sup2)
        notes["refined_sup"] = sup2
    return SweepReport(
        theorem=2, lambda_grid=np.array(lams), p_grid=np.array([]),
        W_values=np.zeros((0, 0)), Z_values=r1, q_values=q1, converged=c1,
        empirical_sup=sup1, empirical_inf_Z=inf1, refinement_delta=delta,
        pair_names=("%s*%s|%s" % (psi.name, zeta.name, f.name),),
        notes=notes)


def theorem3_scan(kernel, lambda_grid=None, p_grid=None, tol=1e-7,
                  tol_abs=1e-10, x_points=512, max_panels=1 << 17, refine=2,
                  threads=1, f=None):
    """Lower-bound corner scan: W(lam, f0, p) over large lam, p near 2.

    Returns (inf_W, report) where inf_W is the minimum over converged
    cells; positivity of the floor is the sharpness surrogate.  One field
    per lambda is shared across the whole p row.
    """
    if lambda_grid is None:
        lambda_grid = THEOREM3_LAMBDAS
    if p_grid is None:
        p_grid = THEOREM3_PS
    if f is None:
        f = witness_f0()
    lams = [float(v) for v in lambda_grid]
    ps = [float(v) for v in p_grid]
    if not lams or not ps:
        raise DomainError("empty sweep grids")
    for p in ps:
        if not 1.0 < p < 2.0:
            raise DomainError("p grid must lie in (1, 2), got %g" % p)

    def run_pass(xp, tr, ta):
        w = np.zeros((len(lams), len(ps)))
        conv = np.zeros(w.shape, dtype=bool)

        def one(il):
            lam = lams[il]
            fld = apply_operator(kernel, lam, f, tol_abs=ta, tol_rel=tr,
                                 max_panels=max_panels, x_points=xp)
            return [W_functional(kernel, lam, f, p, tol=tr, tol_abs=ta,
                                 max_panels=max_panels, field=fld)
                    for p in ps]

        for il, row in enumerate(_pmap(one, range(len(lams)), threads)):
            for j, wr in enumerate(row):
                w[il, j] = wr.value
                conv[il, j] = wr.converged
        return w, conv

    w1, c1 = run_pass(x_points, tol, tol_abs)
    sup1, inf1 = _sweep_stats(w1, c1)
    delta = None
    notes = {"profile": f.name,
             "excluded": [[lams[i], ps[j]]
                          for i, j in zip(*np.nonzero(~c1))]}
    if refine and refine > 1:
        r = int(refine)
        w2, c2 = run_pass(x_points * r, 0.1 * tol, 0.1 * tol_abs)
        _, inf2 = _sweep_stats(w2, c2)
        delta = _rel_change(inf1, inf2)
        notes["refined_inf_W"] = inf2
    qv = np.array([[p / (p - 1.0) for p in ps]] * len(lams))
    report = SweepReport(
        theorem=3, lambda_grid=np.array(lams), p_grid=np.array(ps),
        W_values=w1, Z_values=np.array([]), q_values=qv, converged=c1,
        empirical_sup=sup1, empirical_inf_W=inf1, refinement_delta=delta,
        pair_names=(f.name,), notes=notes)
    return inf1, report


def theorem4_scan(kernel, lambda_grid=None, q_max=64.0, tol=1e-7,
                  tol_abs=1e-10, x_points=512, max_panels=1 << 17, refine=2,
                  threads=1):
    """Witness-pair scan: Z(lam, psi0, f0) over lambda_grid.

    Returns (inf_Z, report); a positive refinement-stable floor is the
    desk surrogate of the liminf lower bound.
    """
    if lambda_grid is None:
        lambda_grid = THEOREM4_LAMBDAS
    lams = [float(v) for v in lambda_grid]
    if not lams:
        raise DomainError("empty sweep grids")
    wit = make_witness()

    def run_pass(density, xp, tr, ta):
        def one(lam):
            return Z_functional(kernel, lam, wit.psi0, wit.f0, q_max=q_max,
                                tol=tr, tol_abs=ta, density=density,
                                x_points=xp, max_panels=max_panels,
                                f_curve=wit.lp_curve)
        cells = _pmap(one, lams, threads)
        z = np.array([c.value for c in cells])
        qa = np.array([c.q_argmax for c in cells])
        conv = np.array([c.converged for c in cells])
        return z, qa, conv

    z1, q1, c1 = run_pass(1, x_points, tol, tol_abs)
    sup1, inf1 = _sweep_stats(z1, c1)
    delta = None
    notes = {"q_max": float(q_max), "pair": "psi0|f0",
             "Z_by_lambda": [[lams[i], float(z1[i])]
                             for i in range(len(lams))]}
    if refine and refine > 1:
        r = int(refine)
        z2, _, c2 = run_pass(r, x_points * r, 0.1 * tol, 0.1 * tol_abs)
        _, inf2 = _sweep_stats(z2, c2)
        delta = _rel_change(inf1, inf2)
        notes["refined_inf_Z"] = inf2
    report = SweepReport(
        theorem=4, lambda_grid=np.array(lams), p_grid=np.array([]),
        W_values=np.zeros((0, 0)), Z_values=z1, q_values=q1, converged=c1,
        empirical_sup=sup1, empirical_inf_Z=inf1, refinement_delta=delta,
        pair_names=("psi0|f0",), notes=notes)
    return inf1, report


@dataclass
class DecayProfile:
    """Scaling check of the pointwise-decay building block.

    Each record holds |u|_r over [1/lam, 1], the compensated value
    scaled = |u|_r * lam^(1/r) * (r-2)^(1/r), and the floor prediction
    norm >= floor_c * (2 * (lam^-1 - lam^(-r/2)) / (r-2))^(1/r) with
    floor_c the measured min of |u(x)| * (lam*x)^(1/2) on the grid.
    """
    records: list
    band_ratio: float
    floors: dict
    converged: bool


def decay_scaling_profile(kernel, f=None, lambdas=(16.0, 256.0),
                          rs=(3.0, 4.0, 6.0), tol=1e-7, tol_abs=1e-10,
                          x_points=512, max_panels=1 << 17):
    """Compensated L_r decay of u = T_lam f on [1/lam, 1].

    The lam^(-1/2) pointwise decay makes |u|_r * lam^(1/r) * (r-2)^(1/r)
    roughly constant over moderate r and large lam; the profile reports
    the measured band and the envelope-based lower bound for each cell.
    """
    if f is None:
        f = witness_f0()
    records = []
    floors = {}
    ok = True
    for lam in lambdas:
        lam = float(lam)
        fld = apply_operator(kernel, lam, f, tol_abs=tol_abs, tol_rel=tol,
                             max_panels=max_panels, x_points=x_points)
        ok = ok and fld.converged
        lo = 1.0 / lam
        m = (fld.x >= lo * (1.0 - 1e-12)) & (fld.x <= 1.0)
        xs = fld.x[m]
        mag = np.abs(fld.values[m])
        floor_c = float(np.min(mag * np.sqrt(lam * xs)))
        floors[lam] = floor_c
        for r in rs:
            r = float(r)
            nr = field_lq_norm(fld, r, x_domain=(lo, 1.0), tol_abs=tol_abs,
                               tol_rel=tol, max_panels=max_panels)
            ok = ok and nr.converged
            scaled = nr.value * lam ** (1.0 / r) * (r - 2.0) ** (1.0 / r)
            env = 2.0 * (lam ** -1.0 - lam ** (-0.5 * r)) / (r - 2.0)
            records.append({"lam": lam, "r": r, "norm": nr.value,
                            "scaled": scaled, "floor_c": floor_c,
                            "predicted_lower": floor_c * env ** (1.0 / r),
                            "converged": nr.converged})
    scaled_vals = [rec["scaled"] for rec in records]
    band = max(scaled_vals) / min(scaled_vals)
    return DecayProfile(records=records, band_ratio=float(band),
                        floors=floors, converged=ok)


def conjugate_ratio(p):
    """(2-p)^(1/p) / (q-2)^(1/q) at q = p/(p-1), evaluated directly."""
    p = float(p)
    if not 1.0 < p < 2.0:
        raise DomainError("ratio is defined for p in (1, 2)")
    q = conjugate_exponent(p)
    return (2.0 - p) ** (1.0 / p) / (q - 2.0) ** (1.0 / q)


def conjugate_ratio_reduced(p):
    """Closed form of conjugate_ratio: (2-p)^((2-p)/p) * (p-1)^((p-1)/p).

    Substituting q - 2 = (2-p)/(p-1) and 1/q = (p-1)/p collapses the
    ratio to a function of p alone; it equals 1 at both endpoints and
    dips to its minimum near p = 1.38.
    """
    p = float(p)
    if not 1.0 < p < 2.0:
        raise DomainError("ratio is defined for p in (1, 2)")
    return (2.0 - p) ** ((2.0 - p) / p) * (p - 1.0) ** ((p - 1.0) / p)


def endpoint_gap_identity(p):
    """Both sides of ((q-2)/(2-p))^(1/q) = (p-1)^(1/p-1), q = p/(p-1).

    Exact because (q-2)/(2-p) = 1/(p-1) and -1/q = 1/p - 1; returned as a
    pair so callers can assert the match numerically.
    """
    p = float(p)
    if not 1.0 < p < 2.0:
        raise DomainError("identity holds for p in (1, 2)")
    q = conjugate_exponent(p)
    lhs = ((q - 2.0) / (2.0 - p)) ** (1.0 / q)
    rhs = (p - 1.0) ** (1.0 / p - 1.0)
    return lhs, rhs


def verify_witness(p_grid=(1.01, 1.25, 1.5, 1.75, 1.99), tol_abs=1e-12,
                   tol_rel=1e-10):
    """Quadrature |f0|_p against the closed form [4/(2-p)]^(1/p).

    Returns (max_rel_err, rows); rows carry per-p values for reporting.
    """
    f0 = witness_f0()
    closed = f0.lp_closed_form
    rows = []
    worst = 0.0
    for p in p_grid:
        p = float(p)
        num = lp_norm(f0, p, tol_abs=tol_abs, tol_rel=tol_rel)
        ref = float(closed(p))
        rel = abs(num - ref) / ref
        worst = max(worst, rel)
        rows.append({"p": p, "quadrature": num, "closed_form": ref,
                     "rel_err": rel})
    return worst, rows
