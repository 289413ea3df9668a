import cmath
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heun_appell.acceptance import interior_points, lerch_params, reduced_params, relative_residual, term_vs_quadrature
from heun_appell.closed_forms import maier_solution
from heun_appell.errors import DomainError, ExponentError, ProbeError, RegimeError
from heun_appell.expansions import (
    DISJOINT,
    BetaVariant,
    Center,
    ConventionWarning,
    ExpansionSpec,
    allowed_mu,
    beta_term,
    build_solution,
    center_radius,
    combo_solution,
    combo_term,
    expansion_function,
    lerch_solution,
    pw,
    reduced_solution,
    reference_c0,
    sum_expansion,
)
from heun_appell.heun_model import CBRT_MINUS_ONE, make_params

P = make_params(3, 0.5, 1.2, 0.7, 0.8, 0.6)
CENTRES = [(c, mu) for c in (Center.Origin, Center.One, Center.A, Center.Infinity) for mu in allowed_mu(P, c)]
CENTRES.append((Center.Z0, 2))


def test_frozen_value_against_oracle():
    # the mu = gamma branch is the analytic solution, C0 times the 0-exponent Frobenius solution
    sol = build_solution(P, ExpansionSpec(Center.Origin, 0.8))
    assert abs(sol(0.3) / sol.c0 - 1.068197288262088) <= 1e-12
    u, n_used, est = sum_expansion(P, ExpansionSpec(Center.Origin, 0.8), 0.3)
    assert u == pytest.approx(sol(0.3), rel=1e-15) and n_used > 10 and est < 1e-12


def test_radii_and_exponents():
    z0 = 0.5 / 0.84
    assert center_radius(P, Center.Origin) == pytest.approx(z0)
    assert center_radius(P, Center.One) == pytest.approx(1 - z0)
    assert center_radius(P, Center.A) == pytest.approx(2)
    assert center_radius(P, Center.Infinity) == pytest.approx(3)
    assert center_radius(P, Center.Z0) == pytest.approx(1 - z0)
    assert allowed_mu(P, Center.Origin) == (0, 0.8)
    assert allowed_mu(P.with_(q=0), Center.Origin) == (0, 1.8)
    assert allowed_mu(P, Center.Infinity) == (-1.2, -0.7)


@pytest.mark.parametrize("center,mu", CENTRES)
def test_assembled_series_solves_heun(center, mu):
    sol = build_solution(P, ExpansionSpec(center, mu))
    for z in interior_points(sol.family.center, sol.radius, 4):
        r = relative_residual(P, z, sol(z), sol.derivative(z), sol.derivative(z, 2))
        assert r <= 1e-11


@pytest.mark.parametrize("center,mu", CENTRES)
def test_slope_is_the_derivative_series_over_weight(center, mu):
    """u' times z^g (z-1)^d (z-a)^e is a constant multiple of v (branch factors only)."""
    sol = build_solution(P, ExpansionSpec(center, mu))
    pts = interior_points(sol.family.center, sol.radius, 3)
    ratios = []
    for z in pts:
        w = pw(z, P.gamma) * pw(z - 1, P.delta) * pw(z - P.a, P.epsilon)
        ratios.append(sol.derivative(z) * w / sol.derivative_series(z))
    assert all(abs(abs(r) - 1) <= 1e-10 for r in ratios)


@pytest.mark.parametrize("center,mu", [(Center.Origin, 0), (Center.Origin, 0.8), (Center.One, 0.6),
                                       (Center.A, 1.5), (Center.Infinity, -0.7)])
@pytest.mark.parametrize("n", [0, 3])
def test_expansion_function_against_quadrature(center, mu, n):
    assert term_vs_quadrature(P, ExpansionSpec(center, mu), n, 0.4 + 0.3j) <= 1e-12


def test_convention_warning_outside_unit_disc():
    with pytest.warns(ConventionWarning):
        expansion_function(P.with_(a=0.7), ExpansionSpec(Center.Origin, 0), 1, 0.3)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        expansion_function(P, ExpansionSpec(Center.Origin, 0), 1, 0.5)


def test_z0_functions_need_epsilon_zero():
    with pytest.raises(RegimeError):
        expansion_function(P, ExpansionSpec(Center.Z0, 2), 0, 0.3)


def test_domain_and_exponent_errors():
    sol = build_solution(P, ExpansionSpec(Center.Origin, 0))
    with pytest.raises(DomainError):
        sol(0.58)
    inf = build_solution(P, ExpansionSpec(Center.Infinity, -1.2))
    with pytest.raises(DomainError):
        inf(3.0)
    with pytest.raises(ExponentError):
        build_solution(P, ExpansionSpec(Center.One, 0.3))
    with pytest.raises(ProbeError):
        build_solution(P, ExpansionSpec(Center.Origin, 0), probe=P.z0)
    with pytest.raises(ValueError):
        ExpansionSpec(Center.Origin, 0, n_max=-1)


def test_explicit_c0_is_kept():
    sol = build_solution(P, ExpansionSpec(Center.Origin, 0), c0=2.5)
    assert sol.c0 == 2.5


def test_probe_choice_does_not_matter():
    for mu in (0, 0.6):
        a = build_solution(P, ExpansionSpec(Center.One, mu), probe=1 + 0.1j)
        b = build_solution(P, ExpansionSpec(Center.One, mu), probe=1 - 0.15)
        z = 1.2 + 0.1j
        assert abs(a(z) - b(z)) <= 1e-11 * abs(a(z))


def test_eps0_beta_terms_equal_f1_terms():
    p, _ = reduced_params("EpsZeroOrigin")
    for mu in allowed_mu(p, Center.Origin):
        for n in (0, 2, 5):
            f1 = expansion_function(p, ExpansionSpec(Center.Origin, mu), n, 0.3 + 0.2j)
            assert beta_term(p, "EpsZeroOrigin", mu, n, 0.3 + 0.2j) == pytest.approx(f1, rel=1e-13)


@pytest.mark.parametrize("variant,regime", [("EpsZeroOrigin", "eps0"), ("SymmetricOrigin", "symmetric")])
def test_integration_constants(variant, regime):
    p, _ = reduced_params(variant)
    mu = allowed_mu(p, Center.Origin)[1]
    want = reference_c0(p, regime, mu)
    assert reduced_solution(p, variant, mu).c0 == pytest.approx(want, rel=1e-12)
    assert build_solution(p, ExpansionSpec(Center.Origin, mu)).c0 == pytest.approx(want, rel=1e-12)


def test_two_term_integration_constant():
    p = make_params(-1, 0, 1.2, 0.7, 0.8, 1.05)
    assert reduced_solution(p, "TwoTermOrigin").c0 == pytest.approx(1.8 / 0.84, rel=1e-13)


def test_lerch_constant_differs_from_two_a_mu_over_q():
    # derived value a^2 mu / q; the 2 a mu / q rule agrees only at a = 2
    p = lerch_params()
    sol = lerch_solution(p)
    assert sol.c0 == pytest.approx(14.4, rel=1e-12)
    assert reference_c0(p, "lerch", p.gamma) == pytest.approx(9.6)
    assert lerch_solution(lerch_params(a=2)).c0 == pytest.approx(6.4, rel=1e-12)
    ref = build_solution(p, ExpansionSpec(Center.Origin, p.gamma))
    for z in (0.2, 0.1 - 0.15j):
        assert sol(z) == pytest.approx(ref(z), rel=1e-11)


def test_reduced_regime_and_domain_errors():
    with pytest.raises(RegimeError):
        reduced_solution(P, "EpsZeroOrigin")
    for v in DISJOINT:
        p, _ = reduced_params(v.value)
        with pytest.raises(DomainError):
            reduced_solution(p, v)
    with pytest.raises(RegimeError):
        lerch_solution(P)


def test_e_minus_one_combination_against_quadrature():
    p = make_params(3, 0.5, 1.2, 0.7, 0.8, 3.1)
    assert p.epsilon == pytest.approx(-1)
    z0, z = p.z0, 0.3 + 0.2j
    mp.mp.dps = 20
    for n in (0, 3):
        d, g, a, c = (mp.mpf(x.real) for x in (p.delta, p.gamma, p.a, z0))

        def f(t):
            return mp.expjpi(-d) * (1 - t) ** -d * t ** -g * (t - a) * (t - c) ** (n + 2)

        # t = z s^5 removes the t^-gamma endpoint singularity
        ref = complex(mp.quad(lambda u: f(z * u**5) * 5 * z * u**4, [0, 1]))
        assert combo_term(p, n, z) == pytest.approx(ref, rel=1e-12)
    sol = combo_solution(p)
    for w in interior_points(z0, sol.radius, 3):
        assert relative_residual(p, w, sol(w), sol.derivative(w), sol.derivative(w, 2)) <= 1e-11
    with pytest.raises(RegimeError):
        combo_solution(P)


@pytest.mark.parametrize("a", [CBRT_MINUS_ONE, CBRT_MINUS_ONE.conjugate()])
def test_z0_series_in_maier_regime_matches_closed_form(a):
    al, be = 0.3, 0.5
    g = (1 + al + be) / 3
    p = make_params(a, al * be * (1 + a) / 3, al, be, g, g)
    sol = build_solution(p, ExpansionSpec(Center.Z0, 2))
    u1 = maier_solution(p, 1, 0)
    u2 = maier_solution(p, 0, 1)
    fit = [p.z0 + 0.3 * cmath.exp(1j * t) for t in (0.2, 2.2)]
    M = np.array([[u1(z), u2(z)] for z in fit])
    c = np.linalg.solve(M, np.array([sol(z) for z in fit]))
    for t in (1.1, 3.5, 5.0):
        z = p.z0 + 0.35 * cmath.exp(1j * t)
        assert abs(c[0] * u1(z) + c[1] * u2(z) - sol(z)) <= 1e-11 * abs(sol(z))


@settings(max_examples=15, deadline=None)
@given(st.floats(0.1, 0.9), st.floats(0.3, 2), st.floats(0.3, 2), st.floats(0.1, 0.9), st.floats(0.1, 0.9),
       st.floats(0.3, 5.5))
def test_origin_series_residual_property(q, al, be, g, d, theta):
    p = make_params(2.5 + 0.5j, q, al, be, g, d)
    sol = build_solution(p, ExpansionSpec(Center.Origin, 0, n_max=600))
    z = 0.5 * sol.radius * cmath.exp(1j * theta)
    assert relative_residual(p, z, sol(z), sol.derivative(z), sol.derivative(z, 2)) <= 1e-9
