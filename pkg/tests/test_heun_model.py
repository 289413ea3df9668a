import pytest
from hypothesis import given, settings, strategies as st

from heun_appell.errors import ParameterError
from heun_appell.heun_model import (
    CBRT_MINUS_ONE,
    INFINITY,
    AffineMap,
    HeunParams,
    ReductionClass as R,
    affine_transform,
    binomial_order,
    classify,
    derivative_singularity_table,
    inverse_affine_transform,
    make_params,
    map_point,
    principal_log,
    principal_power,
)
from heun_appell.ode_oracle import residual, second_derivative, solve_at


def test_epsilon_from_fuchs_relation():
    p = make_params(3, 0.5, 1.2, 0.7, 0.8, 0.6)
    assert p.epsilon == pytest.approx(1.5)
    assert p.fuchsian_defect() == 0
    assert p.z0 == pytest.approx(0.5 / 0.84)
    assert p.with_(q=0).z0 == 0
    assert make_params(3, 0.5, 0, 0.7, 0.8, 0.6).z0 is None


@pytest.mark.parametrize("a", [0, 1, 1 + 1e-15])
def test_a_on_singular_point_rejected(a):
    with pytest.raises(ParameterError):
        make_params(a, 0.5, 1, 1, 1, 1)


def test_nonfinite_rejected():
    with pytest.raises(ParameterError):
        make_params(3, float("inf"), 1, 1, 1, 1)


def test_singularity_table():
    p = make_params(3, 0.5, 1.2, 0.7, 0.8, 0.6)
    t = derivative_singularity_table(p)
    locs = [pt.location for pt in t.points]
    assert locs[:3] == [0, 1, 3] and locs[-1] == INFINITY
    z0 = t.points[3]
    assert z0.location == pytest.approx(p.z0) and z0.exponents == (0, 2)
    assert t.points[-1].exponents == (-1.2, -0.7)
    assert not t.merged
    assert derivative_singularity_table(p.with_(q=0)).merged
    t4 = derivative_singularity_table(p.with_(alpha=0))
    assert t4.merged and len(t4.points) == 4


@pytest.mark.parametrize("p,tags", [
    (make_params(3, 0.5, 1.2, 0.7, 0.8, 0.6), {R.Generic}),
    (make_params(-1, 0, 1.2, 0.7, 0.8, 1.05), {R.QZero, R.SymmetricBeta, R.TwoTermOrigin}),
    (make_params(3, 0.84, 1.2, 0.7, 0.8, 0.6), {R.QEqualsAlphaBeta}),
    (make_params(3, 2.52, 1.2, 0.7, 0.8, 2.1), {R.QEqualsAAlphaBeta, R.EpsZero}),
    (make_params(3, 0.5, 1.2, 0.7, 2.9, 1), {R.LerchCase}),
    (make_params(-1, 0.5, 1.2, 0.7, 0.9, 1.5), {R.BinomialCase}),
])
def test_classify(p, tags):
    assert classify(p) == frozenset(tags)


def test_classify_maier_and_binomial_order():
    ab = 0.3 * 0.5
    g = (1 + 0.8) / 3
    p = make_params(CBRT_MINUS_ONE, ab * (1 + CBRT_MINUS_ONE) / 3, 0.3, 0.5, g, g)
    assert R.MaierCase in classify(p)
    q = make_params(CBRT_MINUS_ONE.conjugate(), ab * (1 + CBRT_MINUS_ONE.conjugate()) / 3, 0.3, 0.5, g, g)
    assert R.MaierCase in classify(q)
    assert binomial_order(make_params(-1, 0.5, 1.2, 0.7, 0.9, 1.5)) == 1
    assert binomial_order(make_params(-1, 0.5, 1.2, 0.7, 0.9, 0.6)) is None


def test_principal_branch_conventions():
    # -(3+0j) carries a negative zero imaginary part; the principal branch ignores it
    assert principal_log(-(3 + 0j)).imag == pytest.approx(3.141592653589793)
    assert principal_power(-1, 0.5) == pytest.approx(1j)
    assert principal_power(0, 0) == 1 and principal_power(0, 0.5) == 0


@pytest.mark.parametrize("map_,a", [(AffineMap.ShiftMinusOne, 2), (AffineMap.TwoZMinusOne, 0.5)])
def test_affine_map_carries_solutions(map_, a):
    """u(z) solves the original equation iff w(z1) = u(z) solves the mapped one."""
    p = make_params(a, 0.3 + 0.1j, 1.1, 0.6, 0.7, 0.45)
    p1 = affine_transform(p, map_)
    # the origin always goes to -1
    assert p1.a == -1 and p1.epsilon == pytest.approx(p.gamma)
    scale = 1 if map_ is AffineMap.ShiftMinusOne else 2
    for z in (0.35 + 0.2j, -0.3 + 0.25j):
        u, du = solve_at(p, z, rtol=1e-13)
        ddu = second_derivative(p, z, u, du)
        w, dw, ddw = u, du / scale, ddu / scale**2
        z1 = map_point(map_, z)
        parts = abs(z1 * (z1 - 1) * (z1 + 1) * ddw) + abs(w)
        assert abs(residual(p1, z1, w, dw, ddw)) <= 1e-10 * parts
    back = inverse_affine_transform(p1, map_)
    for k in ("a", "q", "alpha", "beta", "gamma", "delta"):
        assert getattr(back, k) == pytest.approx(getattr(p, k))


def test_affine_map_needs_the_right_a():
    p = make_params(3, 0.5, 1.2, 0.7, 0.8, 0.6)
    with pytest.raises(ParameterError):
        affine_transform(p, AffineMap.ShiftMinusOne)
    with pytest.raises(ParameterError):
        inverse_affine_transform(p, AffineMap.TwoZMinusOne)


cplx = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


@settings(max_examples=50)
@given(cplx, cplx, cplx, cplx, cplx)
def test_fuchs_relation_holds(q, al, be, g, d):
    p = HeunParams(2.5 + 0.5j, q, al, be, g, d)
    assert p.fuchsian_defect() <= 1e-12
    tags = classify(p)
    assert tags
    if R.Generic in tags:
        assert len(tags) == 1
