"""Backend selection for the hot oscillatory-field kernels.

Evaluating u(x) = integral of exp(i*lam*c*x*y) * A(x, y) * f(y) dy over the
standard box dominates the runtime of every parameter sweep, so the bilinear
d=1 case is compiled with numba when available.  A pure-numpy twin implements
the identical panel decomposition (same panel counts, same doubling schedule,
same per-side tolerances), so the two backends agree to roughly 1e-13
relative and can be swapped freely.

Selection is controlled by the BGLS_OSC_BACKEND environment variable:

    numpy        force the pure-numpy path
    numba        require numba (an ImportError surfaces on first use)
    auto/unset   numba when importable, numpy otherwise

Profiles and amplitudes are selected by small integer codes so the compiled
kernel never touches a Python callable.  Anything not expressible this way
(custom callables, d >= 2, non-bilinear phases) goes through the generic
quadrature path in ``operators`` instead.
"""

import math
import os

import numpy as np

# 15-point Kronrod extension of 7-point Gauss, nodes ascending on [-1, 1].
# The embedded Gauss rule lives on nodes 1, 3, ..., 13.
_GK_X = np.array([
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
])

_GK_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
])

_GK_WG7 = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
])

# Integer codes understood by the compiled kernel.
F_CONST = 0       # f(y) = 1 on [-1, 1]
F_INV_SQRT = 1    # f(y) = |y|^(-1/2) on 0 < |y| <= 1

AMP_INDICATOR = 0  # amplitude = 1 on the closed box
AMP_BUMP = 1       # amplitude = B(x) * B(y), B(s) = exp(1 - 1/(1 - s^2))

MIN_PANELS = 8


def bump(s):
    """Smooth bump B(s) = exp(1 - 1/(1 - s^2)) on (-1, 1), zero outside."""
    s = np.asarray(s, dtype=float)
    scalar = s.ndim == 0
    s = np.atleast_1d(s)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    sm = s[m]
    out[m] = np.exp(1.0 - 1.0 / (1.0 - sm * sm))
    return float(out[0]) if scalar else out


def backend_name():
    """Resolve the active backend from BGLS_OSC_BACKEND."""
    mode = os.environ.get("BGLS_OSC_BACKEND", "auto").strip().lower()
    if mode == "numpy":
        return "numpy"
    if mode == "numba":
        return "numba"
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


def _field_bilinear_scalar(x, lam, coef, f_code, f_scale, amp_code,
                           tol_abs, tol_rel, max_panels, gx, wk, wg):
    """Scalar-loop field evaluation; compiled with numba on the fast path.

    For each grid point x_j this integrates the oscillatory profile with
    Gauss-Kronrod 7-15 panels sized to the local half-period, doubling the
    panel count until err <= max(tol_abs, tol_rel * |value|).  The
    inverse-square-root profile substitutes y = +-t^2, which turns each
    half-line integral into a smooth one with frequency bound 2*|omega|.
    """
    n_x = x.shape[0]
    out_re = np.zeros(n_x)
    out_im = np.zeros(n_x)
    out_err = np.zeros(n_x)
    out_n = np.zeros(n_x, np.int64)
    out_ok = np.ones(n_x, np.bool_)
    for j in range(n_x):
        xj = x[j]
        if amp_code == AMP_BUMP:
            if abs(xj) >= 1.0:
                continue
            ax = math.exp(1.0 - 1.0 / (1.0 - xj * xj))
        else:
            if abs(xj) > 1.0:
                continue
            ax = 1.0
        omega = lam * coef * xj
        n_sides = 1 if f_code == F_CONST else 2
        tol_side = tol_abs / n_sides
        for sd in range(n_sides):
            if f_code == F_CONST:
                lo = -1.0
                hi = 1.0
                sgn = 0.0
            else:
                lo = 0.0
                hi = 1.0
                sgn = 1.0 if sd == 0 else -1.0
            n0 = int(math.ceil(2.0 * abs(omega) / math.pi))
            n = n0 if n0 > MIN_PANELS else MIN_PANELS
            if n > max_panels:
                n = max_panels
            while True:
                width = (hi - lo) / n
                h = 0.5 * width
                vr = 0.0
                vi = 0.0
                e = 0.0
                for k in range(n):
                    c = lo + (k + 0.5) * width
                    kr = 0.0
                    ki = 0.0
                    gr = 0.0
                    gi = 0.0
                    for m in range(15):
                        t = c + h * gx[m]
                        if f_code == F_CONST:
                            y = t
                            fac = 1.0
                        else:
                            y = sgn * t * t
                            fac = 2.0
                        if amp_code == AMP_BUMP:
                            if abs(y) >= 1.0:
                                amp = 0.0
                            else:
                                amp = math.exp(1.0 - 1.0 / (1.0 - y * y))
                        else:
                            amp = 1.0
                        a = ax * amp * f_scale * fac
                        th = omega * y
                        fr = a * math.cos(th)
                        fi = a * math.sin(th)
                        kr += wk[m] * fr
                        ki += wk[m] * fi
                        if m % 2 == 1:
                            gr += wg[(m - 1) // 2] * fr
                            gi += wg[(m - 1) // 2] * fi
                    kr *= h
                    ki *= h
                    gr *= h
                    gi *= h
                    vr += kr
                    vi += ki
                    e += math.hypot(kr - gr, ki - gi)
                bound = tol_rel * math.hypot(vr, vi)
                if bound < tol_side:
                    bound = tol_side
                if e <= bound or 2 * n > max_panels:
                    out_re[j] += vr
                    out_im[j] += vi
                    out_err[j] += e
                    out_n[j] += n
                    if e > bound:
                        out_ok[j] = False
                    break
                n *= 2
    return out_re, out_im, out_err, out_n, out_ok


def _field_bilinear_numpy(x, lam, coef, f_code, f_scale, amp_code,
                          tol_abs, tol_rel, max_panels):
    """Vectorized twin of _field_bilinear_scalar (identical panel logic)."""
    x = np.asarray(x, dtype=float)
    n_x = x.shape[0]
    out_re = np.zeros(n_x)
    out_im = np.zeros(n_x)
    out_err = np.zeros(n_x)
    out_n = np.zeros(n_x, np.int64)
    out_ok = np.ones(n_x, np.bool_)
    for j in range(n_x):
        xj = x[j]
        if amp_code == AMP_BUMP:
            if abs(xj) >= 1.0:
                continue
            ax = math.exp(1.0 - 1.0 / (1.0 - xj * xj))
        else:
            if abs(xj) > 1.0:
                continue
            ax = 1.0
        omega = lam * coef * xj
        n_sides = 1 if f_code == F_CONST else 2
        tol_side = tol_abs / n_sides
        for sd in range(n_sides):
            if f_code == F_CONST:
                lo, hi, sgn = -1.0, 1.0, 0.0
            else:
                lo, hi, sgn = 0.0, 1.0, 1.0 if sd == 0 else -1.0
            n = max(MIN_PANELS, int(math.ceil(2.0 * abs(omega) / math.pi)))
            n = min(n, max_panels)
            while True:
                edges = np.linspace(lo, hi, n + 1)
                c = 0.5 * (edges[:-1] + edges[1:])
                h = 0.5 * (hi - lo) / n
                t = c[:, None] + h * _GK_X[None, :]
                if f_code == F_CONST:
                    y = t
                    fac = 1.0
                else:
                    y = sgn * t * t
                    fac = 2.0
                if amp_code == AMP_BUMP:
                    a = ax * f_scale * fac * bump(y)
                else:
                    a = np.full_like(y, ax * f_scale * fac)
                th = omega * y
                fv_re = a * np.cos(th)
                fv_im = a * np.sin(th)
                k_re = (fv_re @ _GK_WK) * h
                k_im = (fv_im @ _GK_WK) * h
                g_re = (fv_re[:, 1::2] @ _GK_WG7) * h
                g_im = (fv_im[:, 1::2] @ _GK_WG7) * h
                vr = float(np.add.reduce(k_re))
                vi = float(np.add.reduce(k_im))
                e = float(np.add.reduce(np.hypot(k_re - g_re, k_im - g_im)))
                bound = max(tol_side, tol_rel * math.hypot(vr, vi))
                if e <= bound or 2 * n > max_panels:
                    out_re[j] += vr
                    out_im[j] += vi
                    out_err[j] += e
                    out_n[j] += n
                    if e > bound:
                        out_ok[j] = False
                    break
                n *= 2
    return out_re, out_im, out_err, out_n, out_ok


_numba_fn = None


def _get_numba_fn():
    global _numba_fn
    if _numba_fn is None:
        from numba import njit
        _numba_fn = njit(cache=True)(_field_bilinear_scalar)
    return _numba_fn


def field_bilinear(x, lam, coef, f_code, f_scale, amp_code,
                   tol_abs=1e-10, tol_rel=1e-8, max_panels=1 << 17):
    """Evaluate the bilinear-phase field on a grid with the active backend.

    Returns (re, im, err, panels, ok) arrays of len(x).
    """
    x = np.ascontiguousarray(x, dtype=float)
    args = (x, float(lam), float(coef), int(f_code), float(f_scale),
            int(amp_code), float(tol_abs), float(tol_rel), int(max_panels))
    if backend_name() == "numba":
        fn = _get_numba_fn()
        return fn(*args, _GK_X, _GK_WK, _GK_WG7)
    return _field_bilinear_numpy(*args)
