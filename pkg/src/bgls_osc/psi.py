"""Weight functions on exponent intervals and the norms built from them.

A PsiFunction is a positive weight psi(p) on an open exponent interval
(a, b).  The norm of interest is the supremum over p of |f|_p / psi(p),
computed here by a geometric endpoint-refining grid plus golden-section
polish.  The degenerate single-exponent weight (kind="dirac") is kept as a
structural tag so the convention C/inf = 0 never meets floating-point
infinities.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import DomainError

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_SCAN_LEVELS = 40  # deepest endpoint offset is (b - a) * 2**-40


@dataclass
class PsiFunction:
    """Weight psi on (a, b); kind is "continuous" or "dirac".

    For kind="dirac" the weight is `weight` at p = atom and +inf elsewhere,
    encoding the single-exponent degenerate space.  `cap` records an
    evaluation ceiling for weights whose domain is unbounded above (it does
    not shrink the mathematical domain).  endpoint_limits, when omitted, is
    estimated by evaluation just inside the endpoints.
    """
    name: str
    a: float
    b: float
    eval: Optional[Callable] = None
    kind: str = "continuous"
    atom: Optional[float] = None
    weight: float = 1.0
    cap: Optional[float] = None
    endpoint_limits: Optional[tuple] = None

    def __post_init__(self):
        if not self.a >= 1.0:
            raise DomainError("psi lower endpoint must satisfy a >= 1")
        if not self.b > self.a:
            raise DomainError("psi requires a < b")
        if self.kind == "dirac":
            if self.atom is None or not self.a < self.atom < self.b:
                raise DomainError("dirac atom must lie inside (a, b)")
            if not self.weight > 0:
                raise DomainError("dirac weight must be positive")
        elif self.kind == "continuous":
            if self.eval is None:
                raise DomainError("continuous psi requires an eval callable")
        else:
            raise DomainError("unknown psi kind %r" % (self.kind,))

    def __call__(self, p):
        p = float(p)
        if not self.a < p < self.b:
            raise DomainError(
                "p=%g outside the domain (%g, %g) of %s"
                % (p, self.a, self.b, self.name))
        if self.kind == "dirac":
            return self.weight if p == self.atom else math.inf
        v = float(self.eval(p))
        if not v > 0:
            raise DomainError("%s(p=%g) = %r is not positive" % (self.name, p, v))
        return v

    def scaled(self, c):
        c = float(c)
        if not c > 0:
            raise DomainError("weight scale must be positive")
        if self.kind == "dirac":
            return PsiFunction(name="%g*%s" % (c, self.name), a=self.a,
                               b=self.b, kind="dirac", atom=self.atom,
                               weight=c * self.weight, cap=self.cap)
        base = self.eval
        return PsiFunction(name="%g*%s" % (c, self.name), a=self.a, b=self.b,
                           eval=lambda p: c * base(p), cap=self.cap)

    def with_cap(self, cap):
        return PsiFunction(name=self.name, a=self.a, b=self.b, eval=self.eval,
                           kind=self.kind, atom=self.atom, weight=self.weight,
                           cap=float(cap), endpoint_limits=self.endpoint_limits)

    def limits(self):
        """Endpoint limits (at a+0, at b-0), estimated if not declared."""
        if self.endpoint_limits is not None:
            return self.endpoint_limits
        if self.kind == "dirac":
            return (math.inf, math.inf)
        hi = self.b if math.isfinite(self.b) else (self.cap or 64.0)
        span = hi - self.a
        lo_lim = self(self.a + span * 2.0 ** -40)
        hi_lim = self(hi - span * 2.0 ** -40) if math.isfinite(self.b) else self(hi)
        return (lo_lim, hi_lim)


@dataclass
class LpCurve:
    """p -> |f|_p on an exponent interval, closed-form or quadrature-backed."""
    a: float
    b: float
    eval: Callable = None
    provenance: str = "closed_form"
    _memo: dict = field(default_factory=dict, repr=False)

    def __call__(self, p):
        p = float(p)
        v = self._memo.get(p)
        if v is None:
            v = float(self.eval(p))
            if v < 0:
                raise DomainError("Lp curve returned a negative value at p=%g" % p)
            self._memo[p] = v
        return v

    def scaled(self, c):
        c = float(c)
        if not c > 0:
            raise DomainError("curve scale must be positive")
        base = self.eval
        return LpCurve(self.a, self.b, lambda p: c * base(p), self.provenance)


@dataclass
class SupResult:
    """Outcome of a supremum scan over an exponent interval."""
    value: float
    argmax: float
    attained: str  # interior | endpoint_lo | endpoint_hi | atom | divergent
    refinement_delta: float
    stable: bool
    evaluations: int


def conjugate_exponent(p):
    """q = p/(p - 1); involution on (1, inf) with fixed point 2."""
    p = float(p)
    if p <= 1.0:
        raise DomainError("conjugate exponent requires p > 1")
    return p / (p - 1.0)


def _scan_points(lo, hi, density):
    """Geometric endpoint-offset grid: offsets (hi-lo)*2^(-k/density)."""
    span = hi - lo
    ks = range(density, _SCAN_LEVELS * density + 1)
    pts = set()
    for k in ks:
        off = span * 2.0 ** (-k / density)
        pts.add(lo + off)
        pts.add(hi - off)
    return sorted(p for p in pts if lo < p < hi)


def _golden_polish(fn, memo, x_lo, x_mid, x_hi, iters=80):
    """Golden-section maximization inside the bracket (x_lo, x_hi)."""
    def f(x):
        v = memo.get(x)
        if v is None:
            v = fn(x)
            memo[x] = v
        return v

    a, b = x_lo, x_hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        if b - a <= abs(x_mid) * 1e-14 + 1e-300:
            break
    if fc >= fd:
        return c, fc
    return d, fd


def sup_over_interval(fn, lo, hi, density=1, check_refinement=True,
                      stability_tol=0.005):
    """Supremum of fn over the open interval (lo, hi).

    The grid clusters geometrically at both endpoints (the weights in use
    are smooth inside and only blow up or vanish at endpoints), then a
    golden-section pass refines around the discrete argmax when it is
    interior.  With check_refinement the scan is repeated at doubled grid
    density and the relative change is reported; stable means the change
    stayed below stability_tol.
    """
    lo = float(lo)
    hi = float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise DomainError("invalid supremum interval (%r, %r)" % (lo, hi))
    memo = {}

    def f(x):
        v = memo.get(x)
        if v is None:
            v = fn(x)
            if isinstance(v, float) and math.isnan(v):
                raise DomainError("ratio returned NaN at p=%g" % x)
            memo[x] = v
        return v

    def one_pass(dens):
        pts = _scan_points(lo, hi, dens)
        vals = [f(x) for x in pts]
        i = max(range(len(pts)), key=lambda k: vals[k])
        best_x, best_v = pts[i], vals[i]
        if math.isinf(best_v):
            return best_x, best_v, "divergent"
        if i == 0:
            return best_x, best_v, "endpoint_lo"
        if i == len(pts) - 1:
            return best_x, best_v, "endpoint_hi"
        gx, gv = _golden_polish(f, memo, pts[i - 1], best_x, pts[i + 1])
        if gv > best_v:
            best_x, best_v = gx, gv
        return best_x, best_v, "interior"

    x1, v1, where1 = one_pass(density)
    if math.isinf(v1):
        return SupResult(v1, x1, "divergent", 0.0, False, len(memo))
    if not check_refinement:
        return SupResult(v1, x1, where1, 0.0, True, len(memo))
    x2, v2, where2 = one_pass(2 * density)
    if math.isinf(v2):
        return SupResult(v2, x2, "divergent", math.inf, False, len(memo))
    ref = max(abs(v1), abs(v2), 1e-300)
    delta = abs(v2 - v1) / ref
    return SupResult(max(v1, v2), x2 if v2 >= v1 else x1,
                     where2, delta, delta < stability_tol, len(memo))


def bgls_norm(curve, psi, density=1, check_refinement=True):
    """sup over p in (a, b) of curve(p)/psi(p); curve(atom) for dirac kind.

    Returns a SupResult; the norm itself is its .value.  Non-finite curve
    values inside the interval propagate as an infinite result flagged
    "divergent" rather than raising.
    """
    if psi.kind == "dirac":
        v = curve(psi.atom) / psi.weight
        return SupResult(v, psi.atom, "atom", 0.0, True, 1)
    hi = psi.b
    if psi.cap is not None:
        hi = min(hi, psi.cap)
    if not hi > psi.a:
        raise DomainError("effective exponent interval (%g, %g) is empty"
                          % (psi.a, hi))
    if curve.a - 1e-12 > psi.a or curve.b + 1e-12 < hi:
        raise DomainError(
            "curve domain (%g, %g) does not cover psi domain (%g, %g)"
            % (curve.a, curve.b, psi.a, hi))
    return sup_over_interval(lambda p: curve(p) / psi(p), psi.a, hi,
                             density=density, check_refinement=check_refinement)


def fundamental_function(psi, delta, density=1, check_refinement=False):
    """sup over p in (a, b) of delta^(1/p)/psi(p); delta^(1/atom) for dirac.

    Nondecreasing in delta.  Returns a SupResult.
    """
    delta = float(delta)
    if not delta > 0:
        raise DomainError("fundamental function requires delta > 0")
    if psi.kind == "dirac":
        v = delta ** (1.0 / psi.atom) / psi.weight
        return SupResult(v, psi.atom, "atom", 0.0, True, 1)
    hi = psi.b
    if psi.cap is not None:
        hi = min(hi, psi.cap)
    if not hi > psi.a:
        raise DomainError("effective exponent interval (%g, %g) is empty"
                          % (psi.a, hi))
    return sup_over_interval(lambda p: delta ** (1.0 / p) / psi(p),
                             psi.a, hi, density=density,
                             check_refinement=check_refinement)


def transform_psi_lambda(psi, lam, d, q_max=64.0):
    """The lam-weighted dual-exponent reparametrization of psi.

    psi on (a, b) with 1 <= a < b <= 2 becomes
    psi_lam(q) = lam^(-d/q) * psi(q/(q-1)) on (b/(b-1), a/(a-1)); when
    a = 1 the upper endpoint is +inf and q_max is recorded as the
    evaluation cap.  Dirac weights map to dirac weights at the conjugate
    atom with the lam^(-d/q) factor folded into the weight.
    """
    lam = float(lam)
    if lam < 1.0:
        raise DomainError("transform requires lam >= 1")
    d = int(d)
    if d < 1:
        raise DomainError("dimension must be >= 1")
    if psi.b > 2.0 + 1e-12:
        raise DomainError("transform requires psi domain inside (1, 2]")
    q_lo = psi.b / (psi.b - 1.0)
    q_hi = math.inf if psi.a <= 1.0 else psi.a / (psi.a - 1.0)
    name = "%s^(lam=%g)" % (psi.name, lam)
    if psi.kind == "dirac":
        q_atom = conjugate_exponent(psi.atom)
        w = psi.weight * lam ** (-d / q_atom)
        return PsiFunction(name=name, a=q_lo, b=q_hi, kind="dirac",
                           atom=q_atom, weight=w,
                           cap=q_max if math.isinf(q_hi) else None)
    base = psi

    def ev(q):
        return lam ** (-d / q) * base(q / (q - 1.0))

    return PsiFunction(name=name, a=q_lo, b=q_hi, eval=ev,
                       cap=q_max if math.isinf(q_hi) else None)


def psi_product(psi, zeta):
    """nu = psi*zeta on the shared (a, b), and its dual reparametrization.

    nu_star(q) = nu(q/(q-1)) on (b/(b-1), a/(a-1)) carries no lam factor.
    """
    for w in (psi, zeta):
        if w.kind != "continuous":
            raise DomainError("psi_product requires continuous weights")
    if abs(psi.a - zeta.a) > 1e-12 or abs(psi.b - zeta.b) > 1e-12:
        raise DomainError("psi_product requires matching domains, got "
                          "(%g, %g) and (%g, %g)"
                          % (psi.a, psi.b, zeta.a, zeta.b))
    if psi.b > 2.0 + 1e-12:
        raise DomainError("dual reparametrization requires b <= 2")
    pe, ze = psi.eval, zeta.eval
    nu = PsiFunction(name="%s*%s" % (psi.name, zeta.name), a=psi.a, b=psi.b,
                     eval=lambda p: pe(p) * ze(p))
    q_lo = psi.b / (psi.b - 1.0)
    q_hi = math.inf if psi.a <= 1.0 else psi.a / (psi.a - 1.0)
    nu_eval = nu.eval
    nu_star = PsiFunction(name=nu.name + "*dual", a=q_lo, b=q_hi,
                          eval=lambda q: nu_eval(q / (q - 1.0)))
    return nu, nu_star


def psi_one(a=1.0, b=2.0):
    """psi identically 1 on (a, b)."""
    return PsiFunction(name="one", a=a, b=b, eval=lambda p: 1.0,
                       endpoint_limits=(1.0, 1.0))


def psi0_weight():
    """The witness weight [4/(2-p)]^(1/p) on (1, 2); blows up at 2-0."""
    return PsiFunction(
        name="psi0", a=1.0, b=2.0,
        eval=lambda p: (4.0 / (2.0 - p)) ** (1.0 / p),
        endpoint_limits=(4.0, math.inf))


def psi_power(alpha, a=1.0, b=2.0):
    """psi(p) = (2-p)^(-alpha) on (a, b) with b <= 2."""
    alpha = float(alpha)
    if b > 2.0:
        raise DomainError("power weight requires b <= 2")
    return PsiFunction(name="power:%g" % alpha, a=a, b=b,
                       eval=lambda p: (2.0 - p) ** (-alpha))


def zeta0_weight():
    """zeta(p) = (p-1)^(-1/2) on (1, 2); the factorized-bound companion."""
    return PsiFunction(name="zeta0", a=1.0, b=2.0,
                       eval=lambda p: (p - 1.0) ** -0.5,
                       endpoint_limits=(math.inf, 1.0))


def psi_dirac(r, a=None, b=None):
    """Degenerate weight concentrated at exponent r (weight 1)."""
    r = float(r)
    if a is None:
        a = max(1.0, r - 0.5)
    if b is None:
        b = r + 0.5
    return PsiFunction(name="dirac:%g" % r, a=a, b=b, kind="dirac", atom=r)


def psi_from_name(spec):
    """Resolve a catalog name: one, psi0, zeta0, power:alpha, dirac:r."""
    spec = str(spec).strip()
    if spec == "one":
        return psi_one()
    if spec == "psi0":
        return psi0_weight()
    if spec == "zeta0":
        return zeta0_weight()
    if spec.startswith("power:"):
        try:
            return psi_power(float(spec.split(":", 1)[1]))
        except ValueError:
            raise DomainError("bad power weight %r" % spec) from None
    if spec.startswith("dirac:"):
        try:
            return psi_dirac(float(spec.split(":", 1)[1]))
        except ValueError:
            raise DomainError("bad dirac weight %r" % spec) from None
    raise DomainError("unknown psi name %r (one, psi0, zeta0, power:a, dirac:r)"
                      % spec)
