"""Quadrature engines, singular substitutions, Lp norms, Fresnel integrals.

Everything here is deterministic: fixed node sets, fixed summation order
(pairwise reduction within a panel sweep, position-sorted reduction across
adaptive segments), no randomness.  Repeated runs with the same inputs give
bit-identical results.
"""

import cmath
import heapq
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._backend import _GK_WG7, _GK_WK, _GK_X, MIN_PANELS
from .errors import ConvergenceError, DomainError

SQRT_HALF_PI = math.sqrt(0.5 * math.pi)

# Crossover between direct quadrature of I(L) and the asymptotic tail.
FRESNEL_SWITCH = 50.0


@dataclass
class QuadResult:
    value: complex  # float for real integrands
    abs_error_estimate: float
    panels_used: int
    converged: bool


def _gk_eval(g, lo, hi):
    """One Gauss-Kronrod 7-15 panel: returns (value, error_estimate)."""
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    y = c + h * _GK_X
    fx = np.asarray(g(y))
    if np.any(np.isnan(fx)):
        raise DomainError("integrand returned NaN on [%g, %g]" % (lo, hi))
    k = h * (fx @ _GK_WK)
    ga = h * (fx[1::2] @ _GK_WG7)
    return k, float(abs(k - ga))


def integrate_adaptive(g, lo, hi, tol_abs=1e-10, tol_rel=1e-8,
                       max_panels=100_000, raise_on_fail=False):
    """Globally adaptive GK 7-15 bisection of [lo, hi].

    g must accept a float ndarray and return values of matching shape
    (real or complex).  Refinement always splits the segment with the
    largest error estimate; ties break on insertion order, so the
    subdivision sequence is deterministic.
    """
    lo = float(lo)
    hi = float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise DomainError("invalid interval [%r, %r]" % (lo, hi))
    val, err = _gk_eval(g, lo, hi)
    count = 0
    segs = [(-err, count, lo, hi, val, err)]
    total_val = val
    total_err = err
    n_panels = 1
    while total_err > max(tol_abs, tol_rel * abs(total_val)):
        if n_panels >= max_panels:
            if raise_on_fail:
                raise ConvergenceError(
                    "adaptive quadrature used %d panels without reaching "
                    "tolerance (err=%.3e)" % (n_panels, total_err))
            break
        neg_err, _, a, b, v, e = heapq.heappop(segs)
        m = 0.5 * (a + b)
        v1, e1 = _gk_eval(g, a, m)
        v2, e2 = _gk_eval(g, m, b)
        count += 1
        heapq.heappush(segs, (-e1, count, a, m, v1, e1))
        count += 1
        heapq.heappush(segs, (-e2, count, m, b, v2, e2))
        total_val = total_val - v + v1 + v2
        total_err = total_err - e + e1 + e2
        n_panels += 1
    # Deterministic final assembly independent of heap ordering.
    ordered = sorted(segs, key=lambda s: s[2])
    total_val = np.add.reduce(np.array([s[4] for s in ordered]))
    total_err = float(np.add.reduce(np.array([s[5] for s in ordered])))
    converged = total_err <= max(tol_abs, tol_rel * abs(total_val))
    if isinstance(total_val, np.generic):
        total_val = total_val.item()
    return QuadResult(total_val, total_err, n_panels, converged)


def integrate_panelized(g, lo, hi, freq, tol_abs=1e-10, tol_rel=1e-8,
                        max_panels=1 << 17):
    """Uniform GK panels sized to the half-period of an oscillatory integrand.

    freq bounds |d(phase)/dy| on [lo, hi]; the initial panel count is
    ceil((hi - lo) * freq / pi) so no panel spans more than a half-period,
    then the count doubles until err <= max(tol_abs, tol_rel * |value|).
    """
    lo = float(lo)
    hi = float(hi)
    if not lo < hi:
        raise DomainError("invalid interval [%r, %r]" % (lo, hi))
    n = max(MIN_PANELS, int(math.ceil((hi - lo) * freq / math.pi)))
    n = min(n, max_panels)
    while True:
        edges = np.linspace(lo, hi, n + 1)
        c = 0.5 * (edges[:-1] + edges[1:])
        h = 0.5 * (hi - lo) / n
        y = c[:, None] + h * _GK_X[None, :]
        fx = np.asarray(g(y))
        if np.any(np.isnan(fx)):
            raise DomainError("integrand returned NaN")
        k = (fx @ _GK_WK) * h
        ga = (fx[:, 1::2] @ _GK_WG7) * h
        val = np.add.reduce(k)
        err = float(np.add.reduce(np.abs(k - ga)))
        if err <= max(tol_abs, tol_rel * abs(val)) or 2 * n > max_panels:
            if isinstance(val, np.generic):
                val = val.item()
            return QuadResult(val, err, n, err <= max(tol_abs, tol_rel * abs(val)))
        n *= 2


def integrate_sqrt_singular(g, hi=1.0, tol_abs=1e-12, tol_rel=1e-10,
                            max_panels=100_000):
    """integral_0^hi y^(-1/2) g(y) dy via the exact substitution y = hi*t^2.

    The substituted integrand 2*sqrt(hi)*g(hi*t^2) is smooth whenever g is,
    so the singularity costs nothing.
    """
    if hi <= 0:
        raise DomainError("upper limit must be positive")
    rt = math.sqrt(hi)

    def sub(t):
        return 2.0 * rt * np.asarray(g(hi * t * t))

    return integrate_adaptive(sub, 0.0, 1.0, tol_abs=tol_abs,
                              tol_rel=tol_rel, max_panels=max_panels)


def integrate_box(g, lims, tol_abs=1e-9, tol_rel=1e-8, max_panels=4000):
    """Iterated adaptive integration over a box in up to 3 dimensions.

    g takes an (n, d) array of points and returns an (n,) array.  Intended
    for test-scale work in d >= 2; the d = 1 oscillatory machinery does not
    go through here.
    """
    d = len(lims)
    if d < 1 or d > 3:
        raise DomainError("integrate_box supports 1 <= d <= 3")
    flags = [True]

    def level(k, fixed):
        # integrate over coordinate k with coordinates k+1.. fixed
        a, b = lims[k]
        if k == 0:
            def g1(ys):
                pts = np.empty((ys.size, d))
                pts[:, 0] = ys
                for i, v in enumerate(fixed):
                    pts[:, 1 + i] = v
                return g(pts)
            r = integrate_adaptive(g1, a, b, tol_abs=tol_abs,
                                   tol_rel=tol_rel, max_panels=max_panels)
            flags[0] = flags[0] and r.converged
            return r.value

        def gk(ys):
            out = np.empty(ys.size, dtype=complex)
            for i, v in enumerate(np.asarray(ys, float).ravel()):
                out[i] = level(k - 1, (v,) + fixed)
            return out.reshape(np.shape(ys))

        r = integrate_adaptive(gk, a, b, tol_abs=tol_abs,
                               tol_rel=tol_rel, max_panels=max_panels)
        flags[0] = flags[0] and r.converged
        return r.value

    val = level(d - 1, ())
    if abs(np.imag(val)) < 1e-300:
        val = float(np.real(val))
    return QuadResult(val, 0.0, 0, flags[0])


def fresnel_I(lam, tol_abs=1e-12):
    """I(L) = integral_0^L z^(-1/2) cos z dz, stable for any L > 0.

    For L <= FRESNEL_SWITCH the substitution z = t^2 gives
    I = 2 * integral_0^sqrt(L) cos(t^2) dt, handled by adaptive quadrature.
    Beyond the switch, I = sqrt(pi/2) - Re T with
    T = integral_L^inf z^(-1/2) e^(iz) dz expanded by repeated integration
    by parts, T(s) = i L^(-s) e^(iL) - i s T(s+1).  The expansion is
    asymptotic: terms are added while the remainder bound
    |d_k| L^(1/2-k) / (k - 1/2) keeps shrinking, which at L >= 50 reaches
    ~1e-23, far below tol_abs.
    """
    lam = float(lam)
    if lam <= 0:
        raise DomainError("fresnel_I requires a positive argument")
    if lam <= FRESNEL_SWITCH:
        r = integrate_adaptive(lambda t: 2.0 * np.cos(t * t),
                               0.0, math.sqrt(lam),
                               tol_abs=min(tol_abs, 1e-13), tol_rel=1e-13)
        return float(np.real(r.value))
    pref = 1j * cmath.exp(1j * lam)
    d = 1.0 + 0.0j
    total = 0.0 + 0.0j
    best = math.inf
    k = 0
    while True:
        if k >= 1:
            rem = abs(d) * lam ** (0.5 - k) / (k - 0.5)
            if rem <= tol_abs or rem >= best:
                break
            best = rem
        total += d * pref * lam ** (-(0.5 + k))
        d *= -1j * (0.5 + k)
        k += 1
    return SQRT_HALF_PI - total.real


@dataclass
class FunctionSpec:
    """A concrete input profile f for the operator and norm machinery.

    eval accepts float ndarrays of shape (n,) in d=1 or (n, d) otherwise
    and returns matching (n,) values.  Profiles with an inverse-square-root
    singularity at the origin carry the inv_sqrt_at_origin tag and smooth_factor g
    with f(y) = |y|^(-1/2) g(y), so integrals can substitute the singularity
    away instead of sampling it.  backend_code/backend_scale mark profiles
    the compiled field kernel understands natively.
    """
    name: str
    dim: int
    support_radius: float
    eval: Callable
    singularity: str = "none"
    smooth_factor: Optional[Callable] = None
    lp_closed_form: Optional[Callable] = None
    backend_code: Optional[int] = None
    backend_scale: float = 1.0

    def __call__(self, y):
        return self.eval(y)

    def scaled(self, c):
        """The profile c*f; scaling by c > 0 keeps the fast-path code."""
        c = float(c)
        if not c > 0:
            raise DomainError("scale factor must be positive")
        base_eval = self.eval
        base_g = self.smooth_factor
        base_cf = self.lp_closed_form
        return FunctionSpec(
            name="%g*%s" % (c, self.name),
            dim=self.dim,
            support_radius=self.support_radius,
            eval=lambda y: c * base_eval(y),
            singularity=self.singularity,
            smooth_factor=(None if base_g is None else
                           (lambda y: c * base_g(y))),
            lp_closed_form=(None if base_cf is None else
                            (lambda p: c * base_cf(p))),
            backend_code=self.backend_code,
            backend_scale=self.backend_scale * c,
        )


def witness_f0():
    """f(y) = |y|^(-1/2) on 0 < |y| <= 1, zero elsewhere.

    ||f||_p^p = 4/(2-p) for 1 <= p < 2; the norm diverges for p >= 2.
    """
    def ev(y):
        y = np.asarray(y, dtype=float)
        a = np.abs(y)
        out = np.zeros_like(a)
        m = (a > 0) & (a <= 1.0)
        out[m] = 1.0 / np.sqrt(a[m])
        return out

    def g(y):
        y = np.asarray(y, dtype=float)
        return (np.abs(y) <= 1.0).astype(float)

    return FunctionSpec(
        name="f0", dim=1, support_radius=1.0, eval=ev,
        singularity="inv_sqrt_at_origin", smooth_factor=g,
        lp_closed_form=lambda p: (4.0 / (2.0 - p)) ** (1.0 / p),
        backend_code=1)


def const_one():
    """f = 1 on [-1, 1]; ||f||_p = 2^(1/p)."""
    def ev(y):
        y = np.asarray(y, dtype=float)
        return (np.abs(y) <= 1.0).astype(float)

    return FunctionSpec(
        name="one", dim=1, support_radius=1.0, eval=ev,
        lp_closed_form=lambda p: 2.0 ** (1.0 / p),
        backend_code=0)


def bump_profile():
    """Smooth bump exp(1 - 1/(1 - y^2)) supported on (-1, 1)."""
    from ._backend import bump

    return FunctionSpec(
        name="bump", dim=1, support_radius=1.0, eval=bump)


_F_CATALOG = {"f0": witness_f0, "one": const_one, "bump": bump_profile}


def function_from_name(name):
    try:
        return _F_CATALOG[name]()
    except KeyError:
        raise DomainError("unknown profile %r (choose from %s)"
                          % (name, sorted(_F_CATALOG))) from None


def lp_norm(f, p, tol_abs=1e-12, tol_rel=1e-10, max_panels=100_000):
    """||f||_p over the support of f.

    Singular d=1 profiles substitute y = R*t^m with m = ceil(2/(2-p)),
    which maps |y|^(-p/2) |g|^p dy to R^(1-p/2) m t^alpha |g(R t^m)|^p dt
    with alpha = m(1 - p/2) - 1 in [0, 1/2); the substituted integrand is
    bounded, so no node ever samples the singularity.  p >= 2 diverges for
    such profiles and raises.
    """
    p = float(p)
    if p < 1.0:
        raise DomainError("lp_norm requires p >= 1")
    R = f.support_radius
    if f.singularity == "inv_sqrt_at_origin":
        if f.dim != 1:
            raise DomainError("singular profiles supported in d=1 only")
        if p >= 2.0:
            raise DomainError(
                "||f||_p diverges for p >= 2 for an inverse-square-root "
                "singularity")
        if f.smooth_factor is None:
            raise DomainError("singular profile lacks smooth_factor")
        g = f.smooth_factor
        m = int(math.ceil(2.0 / (2.0 - p)))
        alpha = m * (1.0 - 0.5 * p) - 1.0

        def make_side(sgn):
            def integrand(t):
                t = np.asarray(t, dtype=float)
                y = sgn * R * t ** m
                return t ** alpha * np.abs(g(y)) ** p
            return integrand

        acc = 0.0
        for sgn in (1.0, -1.0):
            r = integrate_adaptive(make_side(sgn), 0.0, 1.0,
                                   tol_abs=tol_abs, tol_rel=tol_rel,
                                   max_panels=max_panels)
            acc += float(np.real(r.value))
        return (R ** (1.0 - 0.5 * p) * m * acc) ** (1.0 / p)
    if f.dim == 1:
        r = integrate_adaptive(lambda y: np.abs(f.eval(y)) ** p, -R, R,
                               tol_abs=tol_abs, tol_rel=tol_rel,
                               max_panels=max_panels)
        return float(np.real(r.value)) ** (1.0 / p)
    lims = [(-R, R)] * f.dim
    r = integrate_box(lambda pts: np.abs(f.eval(pts)) ** p, lims,
                      tol_abs=tol_abs, tol_rel=tol_rel)
    return float(np.real(r.value)) ** (1.0 / p)
