"""Weights, the sup-over-exponents norm, and the exponent reparametrizations."""
import math

import pytest

from bgls_osc import (DomainError, LpCurve, PsiFunction, SupResult,
                      bgls_norm, conjugate_exponent, fundamental_function,
                      psi0_weight, psi_dirac, psi_from_name, psi_one,
                      psi_power, psi_product, sup_over_interval,
                      transform_psi_lambda, zeta0_weight)


def witness_curve():
    # closed-form |f0|_p on (1, 2), same expression psi0 uses
    return LpCurve(1.0, 2.0, lambda p: (4.0 / (2.0 - p)) ** (1.0 / p))


# --- conjugate exponent -------------------------------------------------

def test_conjugate_values():
    assert conjugate_exponent(1.5) == pytest.approx(3.0, abs=1e-15)
    assert conjugate_exponent(2.0) == pytest.approx(2.0, abs=1e-15)
    assert conjugate_exponent(4.0 / 3.0) == pytest.approx(4.0, rel=1e-15)


def test_conjugate_involution():
    for p in (1.01, 1.3, 1.5, 1.99, 7.0):
        assert conjugate_exponent(conjugate_exponent(p)) == pytest.approx(
            p, rel=1e-14)


def test_conjugate_domain():
    with pytest.raises(DomainError):
        conjugate_exponent(1.0)
    with pytest.raises(DomainError):
        conjugate_exponent(0.5)


# --- PsiFunction basics -------------------------------------------------

def test_psi_call_and_domain():
    psi = psi0_weight()
    assert psi(1.5) == pytest.approx(8.0 ** (2.0 / 3.0), rel=1e-15)
    with pytest.raises(DomainError):
        psi(1.0)
    with pytest.raises(DomainError):
        psi(2.0)
    with pytest.raises(DomainError):
        psi(2.5)


def test_psi_construction_errors():
    with pytest.raises(DomainError):
        PsiFunction(name="bad", a=0.5, b=2.0, eval=lambda p: 1.0)
    with pytest.raises(DomainError):
        PsiFunction(name="bad", a=1.5, b=1.5, eval=lambda p: 1.0)
    with pytest.raises(DomainError):
        PsiFunction(name="bad", a=1.0, b=2.0)  # continuous without eval
    with pytest.raises(DomainError):
        PsiFunction(name="bad", a=1.0, b=2.0, kind="dirac", atom=2.5)
    with pytest.raises(DomainError):
        PsiFunction(name="bad", a=1.0, b=2.0, kind="dirac", atom=1.5,
                    weight=0.0)
    with pytest.raises(DomainError):
        PsiFunction(name="bad", a=1.0, b=2.0, kind="comb", eval=lambda p: 1.0)


def test_dirac_call_semantics():
    psi = psi_dirac(1.5)
    assert psi(1.5) == 1.0
    assert math.isinf(psi(1.4))


def test_psi_positivity_enforced():
    psi = PsiFunction(name="signed", a=1.0, b=2.0, eval=lambda p: p - 1.5)
    with pytest.raises(DomainError):
        psi(1.25)


def test_with_cap_and_limits():
    psi = psi0_weight()
    capped = psi.with_cap(32.0)
    assert capped.cap == 32.0
    assert capped(1.5) == psi(1.5)
    lo, hi = psi.limits()
    assert lo == pytest.approx(4.0, abs=1e-12)
    assert math.isinf(hi)


# --- catalog ------------------------------------------------------------

def test_catalog_names():
    assert psi_from_name("one").name == "one"
    assert psi_from_name("psi0").name == "psi0"
    assert psi_from_name("zeta0").name == "zeta0"
    pw = psi_from_name("power:0.5")
    assert pw(1.5) == pytest.approx(math.sqrt(2.0), rel=1e-15)
    di = psi_from_name("dirac:1.5")
    assert di.kind == "dirac" and di.atom == 1.5


def test_catalog_bad_names():
    for bad in ("nope", "power:x", "dirac:", "dirac:abc"):
        with pytest.raises(DomainError):
            psi_from_name(bad)


def test_zeta0_value():
    assert zeta0_weight()(1.5) == pytest.approx(math.sqrt(2.0), rel=1e-15)


# --- bgls_norm ----------------------------------------------------------

def test_norm_witness_identity():
    # curve and weight are the same expression, so the ratio is exactly 1
    r = bgls_norm(witness_curve(), psi0_weight())
    assert isinstance(r, SupResult)
    assert r.value == pytest.approx(1.0, abs=1e-9)
    assert r.stable


def test_norm_dirac_is_plain_lp():
    r = bgls_norm(witness_curve(), psi_dirac(1.5))
    assert r.value == pytest.approx(4.0, abs=1e-8)
    assert r.attained == "atom"
    assert r.evaluations == 1


def test_norm_homogeneity():
    curve, psi = witness_curve(), psi0_weight()
    base = bgls_norm(curve, psi).value
    assert bgls_norm(curve.scaled(3.0), psi).value == pytest.approx(
        3.0 * base, rel=1e-9)
    assert bgls_norm(curve, psi.scaled(2.0)).value == pytest.approx(
        base / 2.0, rel=1e-9)


def test_norm_dirac_weight_scaling_exact():
    curve = witness_curve()
    base = bgls_norm(curve, psi_dirac(1.5)).value
    assert bgls_norm(curve, psi_dirac(1.5).scaled(2.0)).value == base / 2.0


def test_norm_divergent_curve():
    curve = LpCurve(1.0, 2.0, lambda p: math.inf if p > 1.5 else 1.0)
    r = bgls_norm(curve, psi_one())
    assert math.isinf(r.value)
    assert r.attained == "divergent"
    assert not r.stable


def test_norm_endpoint_blowup_is_captured():
    # |f0|_p / 1 grows without bound as p -> 2; the scan pins it at the
    # deepest grid point instead of polishing an interior max
    r = bgls_norm(witness_curve(), psi_one())
    assert r.value > 1e5
    assert r.attained == "endpoint_hi"


def test_norm_domain_coverage_checked():
    short = LpCurve(1.0, 1.8, lambda p: 1.0)
    with pytest.raises(DomainError):
        bgls_norm(short, psi_one())


def test_norm_respects_cap():
    curve = LpCurve(1.0, 64.0, lambda p: 1.0)
    psi = PsiFunction(name="w", a=2.0, b=math.inf,
                      eval=lambda q: q ** -1.0, cap=8.0)
    r = bgls_norm(curve, psi)
    # sup of q on (2, 8) is pinned at the cap, not at b = inf
    assert r.value == pytest.approx(8.0, abs=1e-8)


def test_curve_negative_raises():
    curve = LpCurve(1.0, 2.0, lambda p: -1.0)
    with pytest.raises(DomainError):
        curve(1.5)
    with pytest.raises(DomainError):
        witness_curve().scaled(-2.0)


def test_curve_memoizes():
    calls = []
    curve = LpCurve(1.0, 2.0, lambda p: calls.append(p) or 1.0)
    curve(1.5)
    curve(1.5)
    assert len(calls) == 1


# --- sup engine ---------------------------------------------------------

def test_sup_interior_quadratic():
    r = sup_over_interval(lambda x: 1.0 - (x - 1.3) ** 2, 1.0, 2.0)
    assert r.attained == "interior"
    assert r.value == pytest.approx(1.0, abs=1e-10)
    assert r.argmax == pytest.approx(1.3, abs=1e-6)
    assert r.stable


def test_sup_endpoint():
    r = sup_over_interval(lambda x: x, 0.0, 1.0)
    assert r.attained == "endpoint_hi"
    assert r.value == pytest.approx(1.0, abs=1e-11)


def test_sup_bad_interval():
    with pytest.raises(DomainError):
        sup_over_interval(lambda x: x, 2.0, 1.0)
    with pytest.raises(DomainError):
        sup_over_interval(lambda x: x, 0.0, math.inf)


def test_sup_nan_raises():
    with pytest.raises(DomainError):
        sup_over_interval(lambda x: math.nan, 0.0, 1.0)


# --- fundamental function -----------------------------------------------

def test_fundamental_witness():
    r = fundamental_function(psi0_weight(), 4.0)
    assert r.value == pytest.approx(1.0, abs=1e-6)
    assert r.attained == "endpoint_lo"


def test_fundamental_flat_weight():
    r = fundamental_function(psi_one(), 4.0)
    assert r.value == pytest.approx(4.0, abs=1e-6)
    assert r.attained == "endpoint_lo"


def test_fundamental_dirac():
    r = fundamental_function(psi_dirac(2.0), 9.0)
    assert r.value == pytest.approx(3.0, abs=1e-12)
    assert r.attained == "atom"


def test_fundamental_monotone_and_domain():
    psi = psi0_weight()
    assert fundamental_function(psi, 1.0).value <= fundamental_function(
        psi, 4.0).value
    with pytest.raises(DomainError):
        fundamental_function(psi, 0.0)
    with pytest.raises(DomainError):
        fundamental_function(psi, -1.0)


# --- exponent reparametrizations ----------------------------------------

def test_transform_witness_value():
    t = transform_psi_lambda(psi0_weight(), 16.0, 1)
    # 16^(-1/4) * psi0(4/3) = 0.5 * 6^(3/4)
    assert t(4.0) == pytest.approx(0.5 * 6.0 ** 0.75, abs=1e-12)
    assert t.a == pytest.approx(2.0, abs=1e-15)
    assert math.isinf(t.b)
    assert t.cap == 64.0


def test_transform_flat_weight():
    t = transform_psi_lambda(psi_one(), 4.0, 1)
    assert t(4.0) == pytest.approx(4.0 ** -0.25, rel=1e-15)


def test_transform_bounded_domain_has_no_cap():
    t = transform_psi_lambda(psi_one(1.5, 2.0), 4.0, 1)
    assert (t.a, t.b) == (pytest.approx(2.0), pytest.approx(3.0))
    assert t.cap is None


def test_transform_dirac():
    t = transform_psi_lambda(psi_dirac(1.5), 8.0, 1)
    assert t.kind == "dirac"
    assert t.atom == pytest.approx(3.0, abs=1e-15)
    assert t.weight == pytest.approx(8.0 ** (-1.0 / 3.0), rel=1e-15)
    assert t.cap == 64.0


def test_transform_rejects():
    with pytest.raises(DomainError):
        transform_psi_lambda(psi0_weight(), 0.5, 1)
    with pytest.raises(DomainError):
        transform_psi_lambda(
            PsiFunction(name="w", a=1.0, b=3.0, eval=lambda p: 1.0), 4.0, 1)
    with pytest.raises(DomainError):
        transform_psi_lambda(psi0_weight(), 4.0, 0)


def test_product_witness_pair():
    nu, nu_star = psi_product(psi0_weight(), zeta0_weight())
    assert nu(1.5) == pytest.approx(4.0 * math.sqrt(2.0), abs=1e-12)
    assert nu_star(3.0) == nu(1.5)
    assert nu_star.a == pytest.approx(2.0)
    assert math.isinf(nu_star.b)


def test_product_rejects():
    with pytest.raises(DomainError):
        psi_product(psi_power(0.5, 1.0, 1.9), zeta0_weight())
    with pytest.raises(DomainError):
        psi_product(psi_dirac(1.5), zeta0_weight())
