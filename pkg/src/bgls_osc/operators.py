"""Phase/amplitude kernels, the oscillating operator, and field norms.

A kernel is the pair (phase, amplitude) on the standard box; applying the
operator at parameter lam produces a SampledField: u values on an x-grid
plus a batched evaluator for off-grid points.  L_q norms of fields are
taken with half-period Gauss-Kronrod panels on |u|^2 (smooth in x, unlike
|u| which has corners at zeros); panel nodes are cached per refinement
level so that scanning many q values against one field costs one batched
field evaluation per level.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _backend
from ._backend import _GK_WG7, _GK_WK, _GK_X, MIN_PANELS, bump
from .errors import ConvergenceError, DomainError
from .quad import QuadResult, integrate_box, integrate_panelized


@dataclass
class PhaseAmplitudeKernel:
    """The pair (phase, amplitude) defining the operator.

    phase(x, y) and amplitude(x, y) take x scalar (d=1) or shape-(d,) and
    y an ndarray of matching points (any shape in d=1, (n, d) otherwise),
    returning values shaped like y's point set.  support_radius is the
    constant C of the admissibility condition: amplitude(x, y) = 0
    whenever |x|^2 + |y|^2 >= C.  bilinear_coef, when set, marks
    phase = x . (A y) and enables the compiled fast path in d = 1.
    """
    name: str
    dim: int
    phase: Callable
    amplitude: Callable
    support_radius: float
    amplitude_kind: str = "exact_indicator"
    bilinear_coef: Optional[np.ndarray] = None
    backend_amp_code: Optional[int] = None
    y_half: float = 1.0
    x_section: tuple = (-1.0, 1.0)

    def __post_init__(self):
        if self.dim < 1 or self.dim > 3:
            raise DomainError("kernel dimension must be 1, 2, or 3")
        if self.amplitude_kind not in ("exact_indicator", "smooth_bump"):
            raise DomainError("amplitude_kind must be exact_indicator or "
                              "smooth_bump")
        if not self.support_radius > 0:
            raise DomainError("support_radius must be positive")

    def phase_dy_bound(self, x):
        """Bound on |grad_y phase| over the y-box at this x."""
        if self.bilinear_coef is not None:
            v = np.atleast_1d(np.asarray(x, dtype=float))
            g = self.bilinear_coef.T @ v
            return float(np.linalg.norm(g)) + 1e-300
        # probe with central differences on a coarse y sweep
        if self.dim != 1:
            raise DomainError("phase_dy_bound probe implemented for d=1 only")
        ys = np.linspace(-self.y_half, self.y_half, 65)
        h = 1e-6
        d = np.abs(self.phase(x, ys + h) - self.phase(x, ys - h)) / (2 * h)
        return 1.5 * float(np.max(d)) + 1e-300


def _amp_indicator(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if y.ndim >= 2 and y.shape[-1] == x.size and x.ndim == 1:
        ok_x = np.all(np.abs(x) <= 1.0)
        ok_y = np.all(np.abs(y) <= 1.0, axis=-1)
        return (ok_x & ok_y).astype(float)
    return ((np.abs(np.asarray(x)) <= 1.0) & (np.abs(y) <= 1.0)).astype(float)


def _amp_bump(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if y.ndim >= 2 and x.ndim == 1 and y.shape[-1] == x.size:
        bx = float(np.prod(bump(x)))
        by = np.prod(bump(y), axis=-1)
        return bx * by
    return bump(x) * bump(y)


def bilinear_kernel(coef, amplitude="exact_indicator", name=None):
    """Kernel with phase x . (A y) and product amplitude on the box."""
    coef = np.atleast_2d(np.asarray(coef, dtype=float))
    if coef.shape[0] != coef.shape[1]:
        raise DomainError("bilinear coefficient matrix must be square")
    d = coef.shape[0]

    if d == 1:
        c = float(coef[0, 0])

        def phase(x, y):
            return c * np.asarray(x, dtype=float) * np.asarray(y, dtype=float)
    else:
        def phase(x, y):
            x = np.asarray(x, dtype=float)
            y = np.asarray(y, dtype=float)
            return y @ (coef.T @ x)

    amp = _amp_indicator if amplitude == "exact_indicator" else _amp_bump
    amp_code = (_backend.AMP_INDICATOR if amplitude == "exact_indicator"
                else _backend.AMP_BUMP)
    return PhaseAmplitudeKernel(
        name=name or ("custom-d%d" % d),
        dim=d, phase=phase, amplitude=amp,
        support_radius=2.0 * d + 1.0,
        amplitude_kind=amplitude,
        bilinear_coef=coef,
        backend_amp_code=amp_code)


def fourier_kernel(dim=1, amplitude="exact_indicator"):
    """phase = x . y on the standard box."""
    k = bilinear_kernel(np.eye(dim), amplitude=amplitude)
    k.name = "fourier" if dim == 1 else "fourier-d%d" % dim
    return k


def kernel_from_name(name, amplitude="exact_indicator", coef=None):
    """Catalog: fourier, fourier-d2, custom (needs coef)."""
    if name == "fourier":
        return fourier_kernel(1, amplitude)
    if name == "fourier-d2":
        return fourier_kernel(2, amplitude)
    if name == "custom":
        if coef is None:
            raise DomainError("custom kernel requires a coefficient matrix")
        return bilinear_kernel(coef, amplitude=amplitude)
    raise DomainError("unknown kernel %r (fourier, fourier-d2, custom)" % name)


def check_support(kernel, n_samples=512):
    """Sample outside |x|^2 + |y|^2 >= C and verify the amplitude vanishes.

    Also confirms the amplitude is not identically zero inside the box.
    Deterministic: fixed-seed direction sampling plus axis points.
    """
    d = kernel.dim
    C = kernel.support_radius
    rng = np.random.default_rng(20240517)
    dirs = rng.standard_normal((n_samples, 2 * d))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    eye = np.eye(2 * d)
    dirs = np.vstack([dirs, eye, -eye])
    worst = 0.0
    for r2 in (1.0, 1.5, 4.0):
        radius = math.sqrt(r2 * C)
        pts = dirs * radius
        for row in pts:
            x = row[:d]
            y = row[d:]
            if d == 1:
                v = kernel.amplitude(float(x[0]), np.array([float(y[0])]))
            else:
                v = kernel.amplitude(x, y[None, :])
            worst = max(worst, abs(float(np.asarray(v).ravel()[0])))
    if worst > 1e-12:
        return False
    # not identically zero inside
    inner = rng.uniform(-0.7, 0.7, size=(64, 2 * d))
    peak = 0.0
    for row in inner:
        x = row[:d]
        y = row[d:]
        if d == 1:
            v = kernel.amplitude(float(x[0]), np.array([float(y[0])]))
        else:
            v = kernel.amplitude(x, y[None, :])
        peak = max(peak, abs(float(np.asarray(v).ravel()[0])))
    return peak > 0.0


def check_nondegeneracy(kernel, sample_grid=None, h=None):
    """min over samples of |det d2(phase)/dx_i dy_j| by central differences.

    The default sample grid is a small tensor grid strictly inside the
    amplitude box; h defaults to 1e-4 * C.
    """
    d = kernel.dim
    if h is None:
        h = 1e-4 * kernel.support_radius
    if sample_grid is None:
        axis = np.linspace(-0.8, 0.8, 5 if d == 1 else 3)
        from itertools import product
        sample_grid = [(np.array(px), np.array(py))
                       for px in product(axis, repeat=d)
                       for py in product(axis, repeat=d)]
    best = math.inf
    for x0, y0 in sample_grid:
        x0 = np.atleast_1d(np.asarray(x0, dtype=float))
        y0 = np.atleast_1d(np.asarray(y0, dtype=float))
        M = np.empty((d, d))
        for i in range(d):
            for j in range(d):
                xp = x0.copy(); xp[i] += h
                xm = x0.copy(); xm[i] -= h
                yp = y0.copy(); yp[j] += h
                ym = y0.copy(); ym[j] -= h
                if d == 1:
                    vals = [kernel.phase(float(a[0]), float(b[0]))
                            for a, b in ((xp, yp), (xp, ym), (xm, yp), (xm, ym))]
                else:
                    vals = [float(np.asarray(kernel.phase(a, b[None, :])).ravel()[0])
                            for a, b in ((xp, yp), (xp, ym), (xm, yp), (xm, ym))]
                M[i, j] = (vals[0] - vals[1] - vals[2] + vals[3]) / (4.0 * h * h)
        best = min(best, abs(float(np.linalg.det(M))))
    return best


@dataclass
class SampledField:
    """u = T_lam f sampled on a grid, with a batched off-grid evaluator."""
    x: np.ndarray
    values: np.ndarray
    per_point_error: np.ndarray
    lam: float
    converged: bool = True
    worst_point: Optional[tuple] = None
    domain: tuple = (-1.0, 1.0)
    evaluator: Optional[Callable] = None
    panels_total: int = 0
    freq_hint: Optional[float] = None  # bound on d(phase*lam)/dx; lam if unset
    _levels: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_callable(cls, fn, x, lam=1.0, domain=None):
        x = np.asarray(x, dtype=float)
        vals = np.asarray(fn(x), dtype=complex)
        if domain is None:
            domain = (float(x.min()), float(x.max()))
        return cls(x=x, values=vals, per_point_error=np.zeros(x.size),
                   lam=float(lam), domain=domain,
                   evaluator=lambda xs: np.asarray(fn(np.asarray(xs, float)),
                                                   dtype=complex))

    def abs2_at(self, xs):
        """|u|^2 at arbitrary points via the evaluator."""
        if self.evaluator is None:
            raise DomainError("field has no evaluator for off-grid points")
        u = np.asarray(self.evaluator(np.asarray(xs, dtype=float)))
        return (u.real ** 2 + u.imag ** 2).astype(float)


def default_x_grid(lam, n=512):
    """Log-spaced points on [1/lam, 1], mirrored, plus the origin."""
    lam = float(lam)
    lo = min(0.5, 1.0 / lam)
    pos = np.geomspace(lo, 1.0, int(n))
    return np.concatenate([-pos[::-1], [0.0], pos])


def _fast_path_ok(kernel, f):
    return (kernel.dim == 1
            and kernel.bilinear_coef is not None
            and kernel.backend_amp_code is not None
            and kernel.y_half == 1.0
            and f.backend_code is not None
            and f.support_radius == 1.0
            and f.dim == 1)


def _point_generic_1d(kernel, lam, f, x, tol_abs, tol_rel, max_panels):
    """One u(x) by the generic (callable) path; returns (value, err, n, ok)."""
    lim = min(kernel.y_half, f.support_radius)
    fy = f.eval
    amp = kernel.amplitude
    ph = kernel.phase
    dy = kernel.phase_dy_bound(x)
    if f.singularity == "inv_sqrt_at_origin":
        if f.smooth_factor is None:
            raise DomainError("singular profile lacks smooth_factor")
        g = f.smooth_factor
        rt = math.sqrt(lim)
        total = 0.0 + 0.0j
        err = 0.0
        n_used = 0
        ok = True
        for sgn in (1.0, -1.0):
            def integrand(t, sgn=sgn):
                y = sgn * t * t
                return (2.0 * g(y) * amp(x, y)
                        * np.exp(1j * lam * ph(x, y)))
            r = integrate_panelized(integrand, 0.0, rt,
                                    freq=2.0 * rt * lam * dy,
                                    tol_abs=0.5 * tol_abs, tol_rel=tol_rel,
                                    max_panels=max_panels)
            total += r.value
            err += r.abs_error_estimate
            n_used += r.panels_used
            ok = ok and r.converged
        return total, err, n_used, ok

    def integrand(y):
        return amp(x, y) * fy(y) * np.exp(1j * lam * ph(x, y))

    r = integrate_panelized(integrand, -lim, lim, freq=lam * dy,
                            tol_abs=tol_abs, tol_rel=tol_rel,
                            max_panels=max_panels)
    return r.value, r.abs_error_estimate, r.panels_used, r.converged


def _point_generic_nd(kernel, lam, f, x, tol_abs, tol_rel):
    lim = min(kernel.y_half, f.support_radius)
    amp = kernel.amplitude
    ph = kernel.phase
    fy = f.eval

    def integrand(pts):
        return amp(x, pts) * fy(pts) * np.exp(1j * lam * ph(x, pts))

    r = integrate_box(integrand, [(-lim, lim)] * kernel.dim,
                      tol_abs=tol_abs, tol_rel=tol_rel)
    return r.value, r.abs_error_estimate, 0, r.converged


def apply_operator(kernel, lam, f, x_grid=None, tol_abs=1e-10, tol_rel=1e-8,
                   max_panels=1 << 17, x_points=512):
    """u(x) = integral exp(i lam phase(x, y)) amplitude(x, y) f(y) dy.

    Oscillatory panels never span more than a half-period; profiles tagged
    inv_sqrt_at_origin are integrated through the exact y = +-t^2
    substitution.  Returns a SampledField carrying per-point error
    estimates and a batched evaluator for off-grid re-evaluation.
    """
    lam = float(lam)
    if lam < 1.0:
        raise DomainError("operator requires lam >= 1")
    if f.dim != kernel.dim:
        raise DomainError("dimension mismatch: f is d=%d, kernel is d=%d"
                          % (f.dim, kernel.dim))
    if kernel.dim == 1:
        if x_grid is None:
            x_grid = default_x_grid(lam, x_points)
        x_grid = np.asarray(x_grid, dtype=float)
        if _fast_path_ok(kernel, f):
            c = float(kernel.bilinear_coef[0, 0])
            code = int(f.backend_code)
            scale = float(f.backend_scale)
            acode = int(kernel.backend_amp_code)

            def evaluator(xs):
                re, im, _, _, _ = _backend.field_bilinear(
                    np.atleast_1d(xs), lam, c, code, scale, acode,
                    tol_abs, tol_rel, max_panels)
                return re + 1j * im

            re, im, err, n_pan, ok = _backend.field_bilinear(
                x_grid, lam, c, code, scale, acode,
                tol_abs, tol_rel, max_panels)
            vals = re + 1j * im
            err = np.asarray(err, dtype=float)
            ok_all = bool(np.all(ok))
            worst = int(np.argmax(err))
            return SampledField(
                x=x_grid, values=vals, per_point_error=err, lam=lam,
                converged=ok_all,
                worst_point=(float(x_grid[worst]), float(err[worst])),
                domain=kernel.x_section, evaluator=evaluator,
                panels_total=int(np.sum(n_pan)),
                freq_hint=lam * abs(c) * kernel.y_half)

        def evaluator(xs):
            xs = np.atleast_1d(np.asarray(xs, dtype=float))
            out = np.empty(xs.size, dtype=complex)
            for i, xi in enumerate(xs):
                v, _, _, _ = _point_generic_1d(kernel, lam, f, float(xi),
                                               tol_abs, tol_rel, max_panels)
                out[i] = v
            return out

        vals = np.empty(x_grid.size, dtype=complex)
        errs = np.empty(x_grid.size, dtype=float)
        panels = 0
        ok_all = True
        for i, xi in enumerate(x_grid):
            v, e, n, ok = _point_generic_1d(kernel, lam, f, float(xi),
                                            tol_abs, tol_rel, max_panels)
            vals[i] = v
            errs[i] = e
            panels += n
            ok_all = ok_all and ok
        worst = int(np.argmax(errs))
        # x-frequency bound probed at the widest |y| the box allows
        ys = np.array([-kernel.y_half, kernel.y_half])
        hx = 1e-6
        dx = max(float(np.max(np.abs(
            np.asarray(kernel.phase(xx + hx, ys))
            - np.asarray(kernel.phase(xx - hx, ys))))) / (2 * hx)
            for xx in (-0.9, 0.0, 0.9))
        return SampledField(
            x=x_grid, values=vals, per_point_error=errs, lam=lam,
            converged=ok_all,
            worst_point=(float(x_grid[worst]), float(errs[worst])),
            domain=kernel.x_section, evaluator=evaluator,
            panels_total=panels, freq_hint=lam * 1.5 * dx)

    # d >= 2: tensor grids, test scale
    if x_grid is None:
        axis = np.linspace(-1.0, 1.0, 9)
        from itertools import product
        x_grid = np.array(list(product(axis, repeat=kernel.dim)))
    x_grid = np.asarray(x_grid, dtype=float)
    vals = np.empty(x_grid.shape[0], dtype=complex)
    errs = np.zeros(x_grid.shape[0], dtype=float)
    ok_all = True
    for i in range(x_grid.shape[0]):
        v, e, _, ok = _point_generic_nd(kernel, lam, f, x_grid[i],
                                        tol_abs, tol_rel)
        vals[i] = v
        errs[i] = e
        ok_all = ok_all and ok

    def evaluator(xs):
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        out = np.empty(xs.shape[0], dtype=complex)
        for i in range(xs.shape[0]):
            out[i] = _point_generic_nd(kernel, lam, f, xs[i],
                                       tol_abs, tol_rel)[0]
        return out

    return SampledField(x=x_grid, values=vals, per_point_error=errs,
                        lam=lam, converged=ok_all,
                        domain=kernel.x_section, evaluator=evaluator)


def field_lq_norm(field, q, x_domain=None, tol_abs=1e-10, tol_rel=1e-7,
                  max_panels=1 << 17):
    """(integral over x_domain of |u|^q)^(1/q) for q >= 2.

    Integrates (|u|^2 / M^2)^(q/2) with half-period GK panels and doubling
    refinement; |u|^2 is smooth in x (|u| is not, at zeros of u), and the
    peak scaling M keeps large q away from underflow.  tol_rel is relative
    error on the returned norm; tol_abs is absolute on the scaled integral.
    Per-level node evaluations are cached on the field, so sweeping many q
    against one field costs one batched evaluation per refinement level.
    """
    q = float(q)
    if q < 2.0 - 1e-12:
        raise DomainError("field_lq_norm requires q >= 2")
    if not math.isfinite(q):
        raise DomainError("field_lq_norm requires finite q")
    if x_domain is None:
        x_domain = field.domain
    lo, hi = float(x_domain[0]), float(x_domain[1])
    if not lo < hi:
        raise DomainError("invalid x-domain (%g, %g)" % (lo, hi))

    # frequency bound: fields oscillate in x at the scale of lam times the
    # phase's x-derivative bound; lam itself when no hint was recorded.
    freq = field.freq_hint if field.freq_hint is not None else field.lam
    n0 = max(MIN_PANELS, int(math.ceil((hi - lo) * freq / math.pi)))
    n0 = min(n0, max_panels)

    mask = (field.x >= lo) & (field.x <= hi) if field.x.ndim == 1 else None
    m_grid = 0.0
    if mask is not None and np.any(mask):
        v = field.values[mask]
        m_grid = float(np.max(v.real ** 2 + v.imag ** 2))

    def level_abs2(n):
        key = (lo, hi, n)
        cached = field._levels.get(key)
        if cached is None:
            edges = np.linspace(lo, hi, n + 1)
            c = 0.5 * (edges[:-1] + edges[1:])
            h = 0.5 * (hi - lo) / n
            xs = (c[:, None] + h * _GK_X[None, :]).ravel()
            cached = field.abs2_at(xs).reshape(n, 15)
            field._levels[key] = cached
        return cached

    a2 = level_abs2(n0)
    M2 = max(m_grid, float(np.max(a2)))
    if M2 == 0.0:
        return QuadResult(0.0, 0.0, n0, True)

    # the norm is M * val^(1/q), so a relative error tol_rel on the norm
    # allows q * tol_rel relative error on the scaled integral val
    n = n0
    while True:
        a2 = level_abs2(n)
        h = 0.5 * (hi - lo) / n
        phi = (a2 / M2) ** (0.5 * q)
        k = (phi @ _GK_WK) * h
        g = (phi[:, 1::2] @ _GK_WG7) * h
        val = float(np.add.reduce(k))
        err = float(np.add.reduce(np.abs(k - g)))
        if err <= max(tol_abs, q * tol_rel * val) or 2 * n > max_panels:
            break
        n *= 2
    conv = err <= max(tol_abs, q * tol_rel * val)
    norm = math.sqrt(M2) * val ** (1.0 / q)
    nerr = 0.0 if val == 0.0 else norm * err / (q * val)
    return QuadResult(norm, nerr, n, conv)


def field_lq_curve(field, q_lo=2.0, q_hi=64.0, x_domain=None,
                   tol_abs=1e-10, tol_rel=1e-7, max_panels=1 << 17):
    """LpCurve of q -> |u|_q plus a convergence flag list (closure-shared)."""
    from .psi import LpCurve
    flags = []

    def ev(qq):
        r = field_lq_norm(field, qq, x_domain=x_domain, tol_abs=tol_abs,
                          tol_rel=tol_rel, max_panels=max_panels)
        flags.append(r.converged)
        return r.value

    return LpCurve(q_lo, q_hi, ev, provenance="quadrature"), flags
