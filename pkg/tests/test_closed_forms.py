import cmath

import mpmath as mp
import pytest

from heun_appell.closed_forms import (
    ClosedFormSolution,
    Family,
    abel_sum_at_one,
    eval_maier,
    eval_symmetric_z2,
    maier_solution,
    principal_a32,
    value_at_one_two_term,
    value_at_origin_two_term,
    wronskian,
)
from heun_appell.errors import DomainError, RegimeError
from heun_appell.expansions import pw, reduced_solution
from heun_appell.heun_model import CBRT_MINUS_ONE, make_params

TWO = make_params(-1, 0, 0.6, 0.5, 0.8, 0.65)


def maier(a=CBRT_MINUS_ONE, al=0.3, be=0.5):
    g = (1 + al + be) / 3
    return make_params(a, al * be * (1 + a) / 3, al, be, g, g)


def test_two_term_special_values():
    assert value_at_origin_two_term(TWO) == pytest.approx(1.8 / 0.3)
    want = 1.8 / 0.3 * complex(mp.gamma(0.9) * mp.gamma(0.35) / (mp.gamma(0.6) * mp.gamma(0.65)))
    assert value_at_one_two_term(TWO) == pytest.approx(want, rel=1e-13)
    val, corr = abel_sum_at_one(TWO)
    assert abs(val - want) <= 1e-10 * abs(want) and corr < 1e-8


def test_two_term_errors():
    with pytest.raises(DomainError):
        value_at_one_two_term(TWO.with_(alpha=1.4, beta=1.0, delta=1.3))
    with pytest.raises(RegimeError):
        value_at_origin_two_term(TWO.with_(q=0.2))


def test_symmetric_form_matches_hypergeometric_in_z_squared():
    z = 0.4 + 0.3j
    al, be, g, d = 0.6, 0.5, 0.8, 0.65
    u1 = complex(mp.hyp2f1(al / 2, be / 2, (1 + g) / 2, z * z))
    u2 = pw(z, 1 - g) * complex(mp.hyp2f1(d - al / 2, d - be / 2, (3 - g) / 2, z * z))
    assert eval_symmetric_z2(TWO, 2, -0.5, z) == pytest.approx(2 * u1 - 0.5 * u2, rel=1e-13)


@pytest.mark.parametrize("z", [0.3, 0.2 + 0.5j, -0.4 + 0.1j])
def test_symmetric_residual(z):
    sol = ClosedFormSolution(TWO, 1.0, 0.7, Family.SymmetricZ2)
    assert sol.residual(z) <= 1e-13


def test_symmetric_wronskian_follows_abel():
    """W z^gamma (1-z)^delta (1+z)^epsilon is constant."""
    u = ClosedFormSolution(TWO, 1, 0, Family.SymmetricZ2)
    v = ClosedFormSolution(TWO, 0, 1, Family.SymmetricZ2)
    vals = [wronskian(u, v, z) * pw(z, 0.8) * pw(1 - z, 0.65) * pw(1 + z, 0.65) for z in (0.3, 0.5 + 0.2j, 0.1 - 0.4j)]
    assert abs(vals[0]) > 0.1
    assert all(abs(x - vals[0]) <= 1e-12 * abs(vals[0]) for x in vals)


def test_two_term_series_is_the_first_solution():
    red = reduced_solution(TWO, "TwoTermOrigin")
    for z in (0.3, 0.5j, 0.2 - 0.4j):
        assert red(z) == pytest.approx(red.c0 * eval_symmetric_z2(TWO, 1, 0, z), rel=1e-12)


@pytest.mark.parametrize("a", [CBRT_MINUS_ONE, CBRT_MINUS_ONE.conjugate()])
def test_maier_branch_and_residual(a):
    p = maier(a)
    sol = maier_solution(p, 1, 0.4)
    assert sol.branch_choices["a^(3/2)"] == "principal"
    assert sol.branch == pytest.approx(principal_a32(a))
    z0 = (1 + a) / 3
    for t in (0.5, 2.0, 4.0):
        assert sol.residual(z0 + 0.3 * cmath.exp(1j * t)) <= 1e-12
    assert eval_maier(p, 1, 0, z0) == pytest.approx(1.0)


def test_maier_errors():
    with pytest.raises(RegimeError):
        maier_solution(TWO)
    p = maier()
    with pytest.raises(DomainError):
        eval_maier(p, 1, 0, 2.0)


def test_principal_a32():
    assert principal_a32(CBRT_MINUS_ONE) == pytest.approx(1j)
