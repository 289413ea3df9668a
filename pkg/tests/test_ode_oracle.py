import cmath

import numpy as np
import pytest

from heun_appell.errors import DomainError, ExponentError, ResonanceError
from heun_appell.heun_model import INFINITY, make_params
from heun_appell.ode_oracle import (
    SeedExponent,
    derivative_check,
    frobenius_seed,
    integrate_from,
    make_path,
    second_derivative,
    solve_at,
    taylor_integrate,
)
from heun_appell.polyode import LocalRecurrence, derivative_ode, forward, heun_ode
from heun_appell.specials import gauss_2f1, gauss_2f1_derivative

P = make_params(3, 0.5, 1.2, 0.7, 0.8, 0.6)

# frozen oracle output, rtol 1e-13
FROZEN = [
    (SeedExponent.Zero, 0.3, 1.068197288262088, 0.24836515063218317),
    (SeedExponent.Zero, 0.2 + 0.3j, 1.0379097007488869 + 0.06943698835192909j,
     0.22722055700606242 + 0.04081360949544874j),
    (SeedExponent.OneMinusGamma, -0.4 + 0.1j, 0.6113061028592957 + 0.424038931252885j,
     -0.07645040958475041 - 0.15024798493539013j),
]


@pytest.mark.parametrize("exp,z,u,du", FROZEN)
def test_frozen_oracle_values(exp, z, u, du):
    got_u, got_du = solve_at(P, z, exp, rtol=1e-13)
    assert abs(got_u - u) <= 1e-10 * abs(u)
    assert abs(got_du - du) <= 1e-10 * abs(du)


def test_hypergeometric_reduction():
    """epsilon = 0 and q = a alpha beta cancel the factor z - a: u = 2F1(alpha, beta; gamma; z)."""
    al, be, g = 1.2, 0.7, 0.8
    p = make_params(3, 3 * al * be, al, be, g, 1 + al + be - g)
    for z in (0.4, -0.5 + 0.3j, 0.1 - 0.6j):
        u, du = solve_at(p, z, rtol=1e-13)
        assert abs(u - gauss_2f1(al, be, g, z)) <= 1e-10
        assert abs(du - gauss_2f1_derivative(al, be, g, z)) <= 1e-10


def test_rk_agrees_with_taylor_stepper():
    path = make_path(P, 1.5 + 0.5j)
    seed = frobenius_seed(P)
    u0, du0 = seed.evaluate(path.start)
    _, u, du = integrate_from(P, u0, du0, path, rtol=1e-13).final
    tu, tdu = taylor_integrate(P, u0, du0, path)
    assert abs(u - tu) <= 1e-10 * abs(u)
    assert abs(du - tdu) <= 1e-10 * abs(du)


def test_path_avoids_singular_points():
    path = make_path(P, 4.0)  # straight line would hit 1, q/(ab) and 3
    for a, b in zip(path.waypoints, path.waypoints[1:]):
        for s in (1, P.z0, P.a):
            t = np.linspace(0, 1, 400)
            assert np.min(np.abs(a + t * (b - a) - s)) >= 0.099
    with pytest.raises(DomainError):
        make_path(P, 1.0)
    with pytest.raises(DomainError):
        make_path(P, 0)


def test_oracle_feeds_the_derivative_equation():
    z = 0.4 + 0.2j
    u, du = solve_at(P, z, rtol=1e-13)
    assert derivative_check(P, z, u, du) <= 1e-7


def test_frobenius_seed_second_exponent():
    seed = frobenius_seed(P, SeedExponent.OneMinusGamma)
    assert seed.exponent == pytest.approx(0.2)
    z = 0.03
    u, du = seed.evaluate(z)
    ddu = second_derivative(P, z, u, du)
    # finite differences of the truncated series agree with the equation
    h = 1e-4
    up, _ = seed.evaluate(z + h)
    um, _ = seed.evaluate(z - h)
    assert abs((up - 2 * u + um) / h**2 - ddu) <= 1e-4 * abs(ddu)


def test_resonant_seed():
    # gamma = 0: exponents 0 and 1 differ by an integer and the 0-branch has a log
    p = make_params(3, 0.5, 1.2, 0.7, 0.0, 0.6)
    with pytest.raises(ResonanceError):
        frobenius_seed(p, SeedExponent.Zero)


def test_indicial_roots_of_derivative_equation():
    ode = derivative_ode(P)
    want = {0: (0, P.gamma), 1: (0, P.delta), P.a: (0, P.epsilon), P.z0: (0, 2),
            INFINITY: (-P.alpha, -P.beta)}
    for c, roots in want.items():
        got = LocalRecurrence.build(ode, c).indicial_roots()
        assert sorted(complex(r).real for r in got) == pytest.approx(sorted(np.real(roots)), abs=1e-10)


def test_taylor_at_ordinary_point_and_exponent_check():
    rec = LocalRecurrence.build(heun_ode(P), 0.5)
    c = rec.taylor(1.0, 0.0, 5)
    assert c[0] == 1 and c[1] == 0
    assert c[2] == pytest.approx(second_derivative(P, 0.5, 1.0, 0.0) / 2)
    with pytest.raises(ExponentError):
        LocalRecurrence.build(heun_ode(P), 0).series(0.5, 10)
    with pytest.raises(ValueError):
        LocalRecurrence.build(heun_ode(P), 0).taylor(1, 0, 4)


def test_forward_zero_pivot():
    # pivot vanishes at n = 2 with a nonzero right side
    with pytest.raises(ResonanceError):
        forward(lambda n: (n - 2, 1.0), 5, [1.0])
    # consistent zero pivot leaves a free (zero) coefficient
    a = forward(lambda n: (n - 2, 1.0 if n != 1 else 0.0), 4, [1.0])
    assert a[2] == 0


def test_forward_stops_only_on_abrupt_drop():
    smooth = forward(lambda n: (1.0, -0.5), 200, [1.0], stop_after_zeros=3)
    assert len(smooth) == 201
    cut = forward(lambda n: (1.0, -1.0 if n < 3 else 0.0), 50, [1.0], stop_after_zeros=3)
    assert len(cut) < 10 and np.all(cut[4:] == 0)
