"""Quadrature, the singular substitution, and the Fresnel-type integral."""
import math

import numpy as np
import pytest

from bgls_osc import (ConvergenceError, DomainError, QuadResult,
                      bump_profile, const_one, fresnel_I, function_from_name,
                      integrate_adaptive, integrate_panelized,
                      integrate_sqrt_singular, lp_norm, witness_f0)

SQRT_PI_2 = 1.2533141373155003

# independent references at 16+ digits; regenerate with
# tools/recompute_oracles.py
FRESNEL_TABLE = [
    (0.25, 0.99376805842958943),
    (0.5, 1.3792650758684296),
    (1.0, 1.8090484758005442),
    (math.pi / 2, 1.9549028485826595),
    (10.0, 1.0953061989059930),
    (50.0, 1.2148571889432849),
    (64.0, 1.3679140550162279),
    (100.0, 1.2022503696268887),
    (1e4, 1.2502584695272051),
    (1e6, 1.2529641433449532),
]
BUMP_L1 = 1.2069003224378762
BUMP_L2 = 0.99165559188295130


def test_adaptive_polynomial_exact():
    r = integrate_adaptive(lambda x: 3.0 * x ** 2, 0.0, 2.0)
    assert isinstance(r, QuadResult)
    assert r.converged
    assert r.panels_used >= 1
    assert r.value == pytest.approx(8.0, abs=1e-12)


def test_adaptive_transcendental():
    r = integrate_adaptive(np.exp, 0.0, 1.0)
    assert r.value == pytest.approx(math.e - 1.0, rel=1e-12)
    r = integrate_adaptive(np.sin, 0.0, math.pi)
    assert r.value == pytest.approx(2.0, rel=1e-12)


def test_adaptive_reversed_interval_is_domain_error():
    with pytest.raises(DomainError):
        integrate_adaptive(np.exp, 1.0, 0.0)


def test_adaptive_linearity():
    def f(x):
        return np.exp(-x)

    def g(x):
        return np.cos(3.0 * x)

    lhs = integrate_adaptive(lambda x: 2.0 * f(x) + 5.0 * g(x), 0.0, 2.0)
    rhs = (2.0 * integrate_adaptive(f, 0.0, 2.0).value
           + 5.0 * integrate_adaptive(g, 0.0, 2.0).value)
    assert lhs.value == pytest.approx(rhs, rel=1e-11)


def test_adaptive_integrable_endpoint_singularity():
    # |value - 2| tracks the leftover sliver at the origin
    r = integrate_adaptive(lambda x: np.abs(x) ** -0.5, 0.0, 1.0,
                           max_panels=2000)
    assert r.value == pytest.approx(2.0, abs=1e-6)


def test_adaptive_unresolved_oscillation_flags_and_raises():
    r = integrate_adaptive(lambda x: np.cos(2e5 * x), 0.0, 1.0,
                           max_panels=2000)
    assert not r.converged
    assert r.panels_used == 2000
    with pytest.raises(ConvergenceError):
        integrate_adaptive(lambda x: np.cos(2e5 * x), 0.0, 1.0,
                           max_panels=2000, raise_on_fail=True)


def test_adaptive_nan_is_domain_error():
    with pytest.raises(DomainError):
        integrate_adaptive(lambda x: np.full_like(x, np.nan), 0.0, 1.0)


def test_panelized_matches_closed_form():
    r = integrate_panelized(lambda x: np.cos(50.0 * x), -1.0, 1.0, freq=50.0)
    assert r.converged
    assert r.value == pytest.approx(2.0 * math.sin(50.0) / 50.0, abs=1e-13)


def test_panelized_complex_values():
    r = integrate_panelized(lambda x: np.exp(1j * 30.0 * x), 0.0, 1.0,
                            freq=30.0)
    ref = (np.exp(30j) - 1.0) / 30j
    assert abs(r.value - ref) < 1e-12


def test_sqrt_singular_constant():
    # int_0^hi y^(-1/2) dy = 2 sqrt(hi)
    assert integrate_sqrt_singular(
        lambda y: np.ones_like(y)).value == pytest.approx(2.0, rel=1e-12)
    assert integrate_sqrt_singular(
        lambda y: np.ones_like(y), hi=0.25).value == pytest.approx(
            1.0, rel=1e-12)


def test_sqrt_singular_oscillatory():
    # int_0^1 y^(-1/2) cos(10 y) dy = 10^(-1/2) I(10)
    r = integrate_sqrt_singular(lambda y: np.cos(10.0 * y))
    assert r.converged
    assert r.value == pytest.approx(0.34636623238443649, rel=1e-11)


@pytest.mark.parametrize("lam,ref", FRESNEL_TABLE)
def test_fresnel_table(lam, ref):
    assert fresnel_I(lam) == pytest.approx(ref, abs=5e-12)


def test_fresnel_small_argument_limit():
    # I(L) = 2 sqrt(L) (1 - L^2/10 + O(L^4)) near zero
    for lam in (1e-6, 1e-4, 1e-2):
        assert fresnel_I(lam) / math.sqrt(lam) == pytest.approx(
            2.0, abs=max(lam * lam, 1e-8))
    assert fresnel_I(1e-6) / math.sqrt(1e-6) == pytest.approx(2.0, abs=1e-5)


def test_fresnel_bracket_on_unit_interval():
    for lam in (1e-6, 1e-3, 0.1, 0.25, 0.5, 0.75, 1.0):
        ratio = fresnel_I(lam) / math.sqrt(lam)
        assert 1.5 <= ratio <= 2.0


def test_fresnel_tail_bound():
    # |I(L) - sqrt(pi/2)| <= 2/sqrt(L): one partial integration of the tail
    for lam in (1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6):
        assert abs(fresnel_I(lam) - SQRT_PI_2) <= 2.0 / math.sqrt(lam)


def test_fresnel_rejects_nonpositive():
    with pytest.raises(DomainError):
        fresnel_I(0.0)
    with pytest.raises(DomainError):
        fresnel_I(-1.0)


def test_lp_norm_witness_closed_form():
    f0 = witness_f0()
    for p in (1.0, 1.01, 1.25, 1.5, 1.75, 1.9, 1.99):
        ref = (4.0 / (2.0 - p)) ** (1.0 / p)
        assert lp_norm(f0, p) == pytest.approx(ref, rel=1e-9)


def test_lp_norm_witness_diverges_at_two():
    f0 = witness_f0()
    with pytest.raises(DomainError):
        lp_norm(f0, 2.0)
    with pytest.raises(DomainError):
        lp_norm(f0, 3.0)


def test_lp_norm_requires_p_at_least_one():
    with pytest.raises(DomainError):
        lp_norm(const_one(), 0.5)


def test_lp_norm_constant_profile():
    one = const_one()
    for p in (1.0, 2.0, 3.0, 7.0):
        assert lp_norm(one, p) == pytest.approx(2.0 ** (1.0 / p), rel=1e-10)


def test_lp_norm_bump_profile():
    b = bump_profile()
    assert lp_norm(b, 1.0) == pytest.approx(BUMP_L1, rel=1e-9)
    assert lp_norm(b, 2.0) == pytest.approx(BUMP_L2, rel=1e-9)


def test_function_catalog():
    assert function_from_name("f0").name == "f0"
    assert function_from_name("one").name == "one"
    assert function_from_name("bump").name == "bump"
    with pytest.raises(DomainError):
        function_from_name("nope")


def test_scaled_profile():
    f0 = witness_f0()
    g = f0.scaled(3.0)
    assert lp_norm(g, 1.5) == pytest.approx(3.0 * lp_norm(f0, 1.5), rel=1e-12)
    assert g.lp_closed_form(1.5) == 3.0 * f0.lp_closed_form(1.5)
    with pytest.raises(DomainError):
        f0.scaled(-1.0)
