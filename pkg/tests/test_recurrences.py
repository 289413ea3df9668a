from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from exact import origin_series
from heun_appell.errors import ExponentError, ParameterError, RegimeError
from heun_appell.heun_model import CBRT_MINUS_ONE, make_params
from heun_appell.recurrences import (
    Pin,
    RecurrenceKind,
    closed_form_origin,
    closed_form_z0,
    generic_coeffs,
    origin_coeffs,
    radius_origin,
    radius_z0,
    run,
    solve_termination,
    z0_coeffs,
)

EXACT = (Fr(3), Fr(1, 2), Fr(6, 5), Fr(7, 10), Fr(4, 5), Fr(3, 5))
P = make_params(*map(float, EXACT))


def test_frozen_exact_coefficients():
    a = origin_series(EXACT, 3)
    assert a[1] == Fr(5, 6)
    seq = run(origin_coeffs(P, 0), 3).values
    for n in range(4):
        assert abs(seq[n] - float(a[n])) <= 1e-15 * abs(float(a[n]))


def test_float_recurrence_tracks_exact_values_early():
    exact = origin_series(EXACT, 20)
    seq = run(origin_coeffs(P, 0), 20).values
    for n in range(21):
        assert abs(seq[n] - float(exact[n])) <= 1e-11 * abs(float(exact[n]))


def test_apparent_singularity_in_exact_arithmetic():
    """Exactly, a_n/a_(n-1) -> 1 (radius min(1, |a|)); q/(alpha beta) is apparent.

    In floating point the dominant characteristic root alpha*beta/q takes
    over once rounding errors have been amplified enough.
    """
    exact = origin_series(EXACT, 160)
    ratio = float(exact[160] / exact[159])
    assert abs(ratio - 1) < 0.02
    seq = run(origin_coeffs(P, 0), 160).values
    dominant = abs(P.ab / P.q)
    assert dominant == pytest.approx(1.68)
    assert abs(abs(seq[160] / seq[159]) - dominant) < 0.05
    roots = radius_origin(P).roots
    assert max(abs(r) for r in roots) == pytest.approx(dominant)


@pytest.mark.parametrize("mu", [0, 0.8])
def test_closed_origin_matches_generic_engine(mu):
    a = run(origin_coeffs(P, mu), 40).values
    b = run(generic_coeffs(P, RecurrenceKind.Origin, mu), 40).values
    assert np.max(np.abs(a - b) / np.abs(b)) <= 1e-11


@pytest.mark.parametrize("mu", [0, 2])
def test_closed_z0_matches_generic_engine(mu):
    a = run(z0_coeffs(P, mu), 30).values
    b = run(generic_coeffs(P, RecurrenceKind.AtZ0, mu), 30).values
    assert np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)) <= 1e-10


@pytest.mark.parametrize("kind,mu", [
    (RecurrenceKind.One, 0.6), (RecurrenceKind.A, 1.5), (RecurrenceKind.Infinity, -1.2),
    (RecurrenceKind.Origin, 0), (RecurrenceKind.AtZ0, 2),
])
def test_residuals(kind, mu):
    rc = generic_coeffs(P, kind, mu)
    seq = run(rc, 60, scale=0.5)
    assert seq.residuals(rc) <= 1e-12


def test_two_term_closed_form():
    p = make_params(-1, 0, 1.2, 0.7, 0.8, 1.05)
    for mu in (0, 1.8):
        closed = closed_form_origin(p, mu, 40).values
        rec = run(origin_coeffs(p, mu), 40).values
        assert np.all(closed[1::2] == 0)
        assert np.max(np.abs(closed - rec)) <= 1e-13 * np.max(np.abs(rec))
    with pytest.raises(RegimeError):
        closed_form_origin(P, 0, 10)
    with pytest.raises(ExponentError):
        closed_form_origin(p, 0.8, 10)


@pytest.mark.parametrize("a", [CBRT_MINUS_ONE, CBRT_MINUS_ONE.conjugate()])
def test_maier_closed_form(a):
    al, be = 0.3, 0.5
    g = (1 + al + be) / 3
    p = make_params(a, al * be * (1 + a) / 3, al, be, g, g)
    for mu in (0, 2):
        rc = z0_coeffs(p, mu)
        S, R, Q, _ = rc(4)
        assert abs(R) + abs(Q) <= 1e-13 * abs(S)
        closed = closed_form_z0(p, mu, 30).values
        rec = run(rc, 30).values
        assert np.max(np.abs(closed - rec)) <= 1e-12 * np.max(np.abs(rec))
    with pytest.raises(RegimeError):
        closed_form_z0(P, 0, 10)


def test_termination_n1_and_n2():
    # N = 1: generically a_2(q) and a_3(q) share no root
    assert solve_termination(make_params(3, 0, 1, 0.7, 0.8, 0.6), 1) == []
    # with delta = 0 they do, at q = alpha beta
    p = make_params(3, 0, 1, 0.7, 0.8, 0)
    qs = solve_termination(p, 1)
    assert len(qs) == 1 and qs[0] == pytest.approx(0.7, abs=1e-12)
    a = run(origin_coeffs(p.with_(q=qs[0]), 0), 8, stop_on_termination=False).values
    assert np.all(np.abs(a[2:]) <= 1e-12 * abs(a[1]))
    # frozen N = 2 example
    p2 = make_params(3, 0, 2, 0.7, 0.8, 0.6)
    qs = solve_termination(p2, 2)
    assert len(qs) == 1 and qs[0] == pytest.approx(-0.7, abs=1e-10)
    with pytest.raises(ParameterError):
        solve_termination(P, 2)
    assert solve_termination(make_params(3, 0, 1.2, 2, 0.8, 0.6), 2, which=Pin.BetaPins) == [
        pytest.approx(-0.2, abs=1e-10)]
    with pytest.raises(ParameterError):
        solve_termination(make_params(3, 0, 2, 0.7, 0.8, 0.6), 2, which=Pin.BetaPins)


def test_radius():
    assert radius_origin(P).radius == pytest.approx(0.5 / 0.84)
    assert radius_origin(P.with_(q=0)).radius == 1
    assert radius_origin(P.with_(a=0.5, q=0)).radius == 0.5
    assert radius_z0(P) == pytest.approx(min(0.5 / 0.84, 1 - 0.5 / 0.84))


def test_exponent_and_parameter_errors():
    with pytest.raises(ParameterError):
        origin_coeffs(P.with_(gamma=2), 0)
    with pytest.raises(ExponentError):
        origin_coeffs(P, 0.3)
    with pytest.raises(ExponentError):
        z0_coeffs(P, 1)
    with pytest.raises(RegimeError):
        z0_coeffs(P.with_(q=0.84), 0)  # q/(alpha beta) = 1
    with pytest.raises(ParameterError):
        z0_coeffs(P.with_(alpha=0), 0)
    with pytest.raises(ExponentError):
        generic_coeffs(P, RecurrenceKind.One, 0.3)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 0.9), st.floats(0.2, 2), st.floats(0.2, 2), st.floats(0.1, 0.9), st.floats(0.1, 0.9))
def test_origin_recurrence_matches_engine(q, al, be, g, d):
    p = make_params(2.5, q, al, be, g, d)
    rc = origin_coeffs(p, 0)
    r = radius_origin(p).radius
    seq = run(rc, 30, scale=r)
    assert seq.residuals(rc) <= 1e-10
    b = run(generic_coeffs(p, RecurrenceKind.Origin, 0), 30, scale=r).values
    assert np.max(np.abs(seq.values - b)) <= 1e-9 * np.max(np.abs(b))
