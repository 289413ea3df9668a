"""End-to-end acceptance checks, shared by the test suite and ``heun-appell selftest``.

Every check returns a :class:`CheckResult`; none of them raises on failure.
"""
from __future__ import annotations

import cmath
import time
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import closed_forms as cf
from .errors import HeunError
from .expansions import (
    Center,
    ExpansionSpec,
    allowed_mu,
    beta_family,
    beta_term,
    build_solution,
    centered_family,
    expansion_function,
    expansion_integrand,
    heun_operator,
    lerch_family,
    lerch_solution,
    pw,
    reduced_solution,
)
from .heun_model import CBRT_MINUS_ONE, HeunParams, make_params
from .ode_oracle import SeedExponent, solve_at
from .quadrature import grading_for, integrate_segment
from .recurrences import (
    Pin,
    closed_form_origin,
    closed_form_z0,
    origin_coeffs,
    radius_origin,
    run,
    solve_termination,
    z0_coeffs,
)
from .specials import F1Params, appell_f1, appell_f1_integral, clausen_3f2, gauss_2f1

GENERIC = dict(a=3, q=0.5, alpha=1.2, beta=0.7, gamma=0.8, delta=0.6)


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    value: float
    threshold: float
    seconds: float = 0.0
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.number:2d}. {self.title}: {self.value:.3e} "
                f"(limit {self.threshold:.0e}, {self.seconds:.2f} s){' ' + self.detail if self.detail else ''}")


def _rel(x, y) -> float:
    return abs(complex(x) - complex(y)) / max(abs(complex(y)), 1e-300)


def generic_params() -> HeunParams:
    return make_params(**GENERIC)


def relative_residual(p: HeunParams, z, u, du, ddu) -> float:
    """|L u| over the largest of its three parts, for the cleared Heun operator."""
    z = complex(z)
    P = p.gamma * (z - 1) * (z - p.a) + p.delta * z * (z - p.a) + p.epsilon * z * (z - 1)
    parts = (z * (z - 1) * (z - p.a) * ddu, P * du, (p.ab * z - p.q) * u)
    return abs(heun_operator(p, z, u, du, ddu)) / max(max(abs(x) for x in parts), 1e-300)


def interior_points(center, radius: float, count: int = 5) -> list[complex]:
    """Points spread over the disc (or, at infinity, the exterior) of an expansion."""
    frac = (0.25, 0.4, 0.55, 0.7, 0.8, 0.35, 0.6)
    ang = (0.4, 1.7, 2.9, -2.2, -0.9, 1.1, -1.6)
    if isinstance(center, str):
        return [radius / 0.95 * (1.6 + f) * cmath.exp(1j * t) for f, t in zip(frac[:count], ang)]
    return [center + f * radius * cmath.exp(1j * t) for f, t in zip(frac[:count], ang)]


# 1


def check_f1_oracle(points: int = 100, seed: int = 1) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        A = complex(rng.uniform(0.2, 1.5), rng.uniform(-0.3, 0.3))
        C = A + complex(rng.uniform(0.3, 1.5), rng.uniform(-0.3, 0.3))
        b1, b2 = (complex(rng.uniform(-1, 1.5), rng.uniform(-0.3, 0.3)) for _ in range(2))
        x, y = (rng.uniform(0, 0.7) * cmath.exp(1j * rng.uniform(-np.pi, np.pi)) for _ in range(2))
        p = F1Params(A, b1, b2, C)
        worst = max(worst, _rel(appell_f1(p, x, y), appell_f1_integral(p, x, y)))
    return CheckResult(1, "F1 series vs Euler integral", worst < 1e-9, worst, 1e-9)


# 2


def check_f1_reductions(points: int = 50, seed: int = 2) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        A, b1, b2 = (complex(rng.uniform(-1, 2), rng.uniform(-0.3, 0.3)) for _ in range(3))
        C = complex(rng.uniform(0.5, 3), rng.uniform(-0.3, 0.3))
        x, y = (rng.uniform(0, 0.8) * cmath.exp(1j * rng.uniform(-np.pi, np.pi)) for _ in range(2))
        worst = max(worst, _rel(appell_f1(F1Params(A, b1, 0, C), x, y), gauss_2f1(A, b1, C, x)))
        worst = max(worst, _rel(appell_f1(F1Params(A, 0, b2, C), x, y), gauss_2f1(A, b2, C, y)))
        x = rng.uniform(0, 0.6) * cmath.exp(1j * rng.uniform(-np.pi, np.pi))
        lhs = appell_f1(F1Params(A, b1, b1, C), x, -x)
        rhs = clausen_3f2((1 + A) / 2, A / 2, b1, (1 + C) / 2, C / 2, x * x)
        worst = max(worst, _rel(lhs, rhs))
    return CheckResult(2, "F1 reductions to 2F1 and 3F2", worst < 1e-10, worst, 1e-10)


# 3


def check_generic_end_to_end() -> CheckResult:
    """Origin expansions against the ODE oracle.

    mu = 0 must equal z^(1-gamma) (1 + ...) times (-1)^-delta (-a)^-eps/(1-gamma);
    mu = gamma must equal C0 times the solution analytic at 0 with u(0) = 1.
    """
    start = time.perf_counter()
    p = generic_params()
    R = radius_origin(p).radius
    pts = interior_points(0j, R)
    worst = 0.0
    lead = pw(-1, -p.delta) * pw(-p.a, -p.epsilon) / (1 - p.gamma)
    for mu, exponent in ((0, SeedExponent.OneMinusGamma), (p.gamma, SeedExponent.Zero)):
        sol = build_solution(p, ExpansionSpec(Center.Origin, mu))
        k = lead if mu == 0 else sol.c0
        for z in pts:
            oracle = k * solve_at(p, z, exponent)[0]
            worst = max(worst, _rel(sol(z), oracle))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < 5
    return CheckResult(3, "generic origin expansions vs ODE oracle", ok, worst, 1e-8, elapsed)


# 4


def expansion_residuals(p: HeunParams, center: Center, mu, count: int = 5) -> float:
    sol = build_solution(p, ExpansionSpec(center, mu))
    c = sol.family.center
    worst = 0.0
    for z in interior_points(c, sol.radius, count):
        u = sol(z)
        worst = max(worst, relative_residual(p, z, u, sol.derivative(z), sol.derivative(z, 2)))
    return worst


def eps_zero_params() -> HeunParams:
    g = GENERIC
    return make_params(g["a"], g["q"], g["alpha"], g["beta"], g["gamma"],
                       1 + g["alpha"] + g["beta"] - g["gamma"])


def check_expansion_residuals() -> CheckResult:
    p = generic_params()
    worst = 0.0
    for center in (Center.Origin, Center.One, Center.A):
        for mu in allowed_mu(p, center):
            worst = max(worst, expansion_residuals(p, center, mu))
    worst = max(worst, expansion_residuals(eps_zero_params(), Center.Z0, 2))
    return CheckResult(4, "ODE residual of assembled expansions", worst < 1e-7, worst, 1e-7)


# 5


def quadrature_of_term(p: HeunParams, spec: ExpansionSpec, n: int, z, base=0j) -> complex:
    f = np.vectorize(lambda t: expansion_integrand(p, spec, n, t), otypes=[complex])
    if base == 0:
        mu = spec.mu
        e0 = {Center.Origin: n + mu - p.gamma, Center.Infinity: -p.gamma - n - mu}.get(spec.center, -p.gamma)
        return integrate_segment(f, 0j, z, 1e-13, grade_start=grading_for(e0))
    return integrate_segment(f, base, z, 1e-13)


def term_vs_quadrature(p: HeunParams, spec: ExpansionSpec, n: int, z) -> float:
    """Relative gap between u_n and its defining integral.

    The integral starts at 0 where it converges there; otherwise the
    increment between z/2 and z is compared.
    """
    e0 = {Center.Origin: n + spec.mu - p.gamma, Center.Infinity: -p.gamma - n - spec.mu}.get(spec.center, -p.gamma)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if complex(e0).real > -1:
            return _rel(expansion_function(p, spec, n, z), quadrature_of_term(p, spec, n, z))
        z1 = z / 2
        diff = expansion_function(p, spec, n, z) - expansion_function(p, spec, n, z1)
        return _rel(diff, quadrature_of_term(p, spec, n, z, base=z1))


def check_termwise_quadrature() -> CheckResult:
    p = generic_params()
    pe = eps_zero_params()
    z = 0.45 + 0.3j
    worst = 0.0
    for center in Center:
        q = pe if center is Center.Z0 else p
        for mu in allowed_mu(q, center):
            for n in (0, 1, 2, 5):
                worst = max(worst, term_vs_quadrature(q, ExpansionSpec(center, mu), n, z))
    return CheckResult(5, "expansion functions vs quadrature", worst < 1e-9, worst, 1e-9)


# 6


def two_term_params(rng) -> HeunParams:
    al, be = rng.uniform(0.1, 1.5, 2)
    g = rng.uniform(0.1, 0.9)
    return make_params(-1, 0, al, be, g, (1 + al + be - g) / 2)


def check_two_term(sets: int = 20, seed: int = 6) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst_rec = 0.0
    for _ in range(sets):
        p = two_term_params(rng)
        for mu in (0, 1 + p.gamma):
            a = run(origin_coeffs(p, mu), 60).values
            b = closed_form_origin(p, mu, 60).values[: len(a)]
            worst_rec = max(worst_rec, float(np.max(np.abs(a - b)) / np.max(np.abs(b))))
    p = make_params(-1, 0, 1.0, 0.4, 0.6, (1 + 1.0 + 0.4 - 0.6) / 2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        near0 = reduced_solution(p, "TwoTermOrigin")(1e-6)
    err0 = _rel(near0, cf.value_at_origin_two_term(p))
    at1, _ = cf.abel_sum_at_one(p)
    err1 = _rel(at1, cf.value_at_one_two_term(p))
    ok = worst_rec < 1e-12 and err0 < 1e-8 and err1 < 1e-6
    return CheckResult(6, "two-term regime", ok, max(worst_rec, err0, err1), 1e-12,
                       detail=f"recurrence {worst_rec:.1e}, z->0 {err0:.1e} (1e-8), z->1 {err1:.1e} (1e-6)")


# 7


def maier_params(alpha=0.3, beta=0.5, conjugate=False) -> HeunParams:
    a = CBRT_MINUS_ONE.conjugate() if conjugate else CBRT_MINUS_ONE
    g = (1 + alpha + beta) / 3
    return make_params(a, alpha * beta * (1 + a) / 3, alpha, beta, g, g)


def check_maier() -> CheckResult:
    p = maier_params()
    worst_rq = 0.0
    for mu in (0, 2):
        rc = z0_coeffs(p, mu)
        for n in range(31):
            S, R, Q, P = rc(n)
            worst_rq = max(worst_rq, (abs(R) + abs(Q)) / max(abs(S), abs(P), 1.0))
    worst_seq = 0.0
    for mu in (0, 2):
        a = run(z0_coeffs(p, mu), 60).values
        b = closed_form_z0(p, mu, 60).values[: len(a)]
        mask = np.abs(b) > 0
        worst_seq = max(worst_seq, float(np.max(np.abs(a[mask] - b[mask]) / np.abs(b[mask]))),
                        float(np.max(np.abs(a[~mask]))) / float(np.max(np.abs(b))))
    sol = cf.maier_solution(p, 1.0, 0.7)
    z0 = (1 + p.a) / 3
    res = max(sol.residual(z0 + 0.2 * t * cmath.exp(0.8j)) for t in np.linspace(-1, 1, 7) if t != 0)
    ok = worst_rq < 1e-12 and worst_seq < 1e-10 and res < 1e-8 and len(sol.branch_choices) > 0
    return CheckResult(7, "Maier regime", ok, max(worst_rq, worst_seq, res), 1e-8,
                       detail=f"R,Q {worst_rq:.1e}; closed form {worst_seq:.1e}; residual {res:.1e}; "
                              f"branch {sol.branch_choices.get('a^(3/2)')}")


# 8


def check_termination() -> CheckResult:
    notes = []
    ok = True
    # delta = 0, alpha = 1 = N: q = alpha beta
    p1 = make_params(3, 0.0, 1.0, 0.7, 0.8, 0.0)
    q1 = solve_termination(p1, 1, 0, Pin.AlphaPins)
    e1 = min((abs(q - p1.ab) for q in q1), default=np.inf)
    # epsilon = 0: q = a alpha beta
    al, be, g = 1.0, 0.7, 0.8
    p2 = make_params(3, 0.0, al, be, g, 1 + al + be - g)
    q2 = solve_termination(p2, 1, 0, Pin.AlphaPins)
    e2 = min((abs(q - p2.a * p2.ab) for q in q2), default=np.inf)
    ok = e1 < 1e-10 and e2 < 1e-10
    notes.append(f"N=1: {e1:.1e}, {e2:.1e}")
    p3 = make_params(3, 0.0, 2.0, 0.7, 0.8, 0.6)
    roots = solve_termination(p3, 2, 0, Pin.AlphaPins)
    worst = 0.0
    for q in roots:
        pq = p3.with_(q=q)
        seq = run(origin_coeffs(pq, 0), 50)
        ok = ok and seq.terminated and len(seq.values) == 3
        for mu in allowed_mu(pq, Center.Origin):
            worst = max(worst, expansion_residuals(pq, Center.Origin, mu))
    ok = ok and len(roots) > 0 and worst < 1e-7
    notes.append(f"N=2: {len(roots)} roots, residual {worst:.1e}")
    return CheckResult(8, "termination", ok, max(e1, e2, worst), 1e-10, detail="; ".join(notes))


# 9


def perron_params(rng) -> HeunParams:
    while True:
        a = complex(rng.uniform(1.5, 4), rng.uniform(-1, 1)) * rng.choice([-1, 1])
        al, be, g, d = rng.uniform(0.2, 1.5, 4)
        q = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        p = make_params(a, q, al, be, g + 0.05, d)
        roots = sorted((abs(r) for r in radius_origin(p).roots), reverse=True)
        if roots[0] > 1.5 * roots[1]:
            return p


def check_perron(sets: int = 10, seed: int = 9) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(sets):
        p = perron_params(rng)
        R = radius_origin(p).radius
        a = run(origin_coeffs(p, 0), 500, scale=R).unscaled()
        ratio = abs(a[500] / a[499])
        worst = max(worst, abs(ratio * R - 1))
    return CheckResult(9, "ratio a_n/a_(n-1) vs radius", worst < 0.02, worst, 0.02)


# 10


def check_symmetric_closed_form() -> CheckResult:
    p = make_params(-1, 0, 0.3 + 0.2j, 0.9, 0.45, (1 + 0.3 + 0.2j + 0.9 - 0.45) / 2)
    u1 = cf.ClosedFormSolution(p, 1, 0, "SymmetricZ2")
    u2 = cf.ClosedFormSolution(p, 0, 1, "SymmetricZ2")
    pts = (0.2, 0.4j, 0.3 + 0.3j, -0.5 + 0.2j, 0.1 - 0.6j)
    res = max(max(u1.residual(z), u2.residual(z)) for z in pts)
    w = abs(cf.wronskian(u1, u2, 0.5))
    return CheckResult(10, "z^2 closed form", res < 1e-9 and w > 1e-3, res, 1e-9, detail=f"Wronskian {w:.3g}")


# 11


REDUCED_CASES = {
    # variant: (a, gamma, delta or rule, F1 centre)
    "EpsZeroOrigin": (3, 0.8, "eps0", Center.Origin),
    "EpsZeroOne": (3, 0.8, "eps0", Center.One),
    "EpsZeroInfinity": (3, 0.8, "eps0", Center.Infinity),
    "DeltaZeroOrigin": (3, 0.8, 0.0, Center.Origin),
    "DeltaZeroA": (3, 0.8, 0.0, Center.A),
    "DeltaZeroInfinity": (3, 0.8, 0.0, Center.Infinity),
    "GammaZeroOne": (-3, 0.0, 1.1, Center.One),
    "GammaZeroA": (-3, 0.0, 1.1, Center.A),
    "SymmetricOrigin": (-1, 0.8, "sym", Center.Origin),
    "BinomialOrigin": (-1, 0.8, "bin1", Center.Origin),
}


def reduced_params(variant: str, q=0.5, alpha=1.2, beta=0.7) -> tuple[HeunParams, Center]:
    a, g, d, center = REDUCED_CASES[variant]
    d = {"eps0": 1 + alpha + beta - g, "sym": (1 + alpha + beta - g) / 2,
         "bin1": (2 + alpha + beta - g) / 2}.get(d, d)
    return make_params(a, q, alpha, beta, g, d), center


def lerch_params(a=3, q=0.5, alpha=1.2, gamma=0.8) -> HeunParams:
    # delta = 1, epsilon = -1 fixes beta through the Fuchsian relation
    return make_params(a, q, alpha, gamma - 1 - alpha, gamma, 1)


Z2_KERNELS = {"SymmetricOrigin", "BinomialOrigin"}


def _slope_ratio(red, unred, z) -> complex:
    return red.slope(0, z) / unred.slope(0, z)


def check_reduced_forms() -> CheckResult:
    """Reduced kernels against the unreduced F1 forms.

    Termwise: every Beta term equals its F1 expansion function (increments
    between two points for the kernels anchored at a).  Full sums: where the
    reduced series converges, it equals the F1 sum up to the constant factor
    relating the two term derivatives.
    """
    worst = 0.0
    z1, z2 = 0.3 + 0.2j, 0.5 - 0.35j
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for v in REDUCED_CASES:
            p, center = reduced_params(v)
            for mu in allowed_mu(p, center):
                spec = ExpansionSpec(center, mu)
                for n in (0, 1, 2, 3):
                    if v in ("GammaZeroOne", "GammaZeroA"):
                        b = beta_term(p, v, mu, n, z2) - beta_term(p, v, mu, n, z1)
                        f = expansion_function(p, spec, n, z2) - expansion_function(p, spec, n, z1)
                    else:
                        b, f = beta_term(p, v, mu, n, z2), expansion_function(p, spec, n, z2)
                    worst = max(worst, _rel(b, f))
        lp = lerch_params()
        for n in (0, 1, 2, 3):
            f = expansion_function(lp, ExpansionSpec(Center.Origin, lp.gamma), n, z1)
            worst = max(worst, _rel(lerch_family(lp, lp.gamma).value(n, z1), f))
        full = [(v, *reduced_params(v)) for v in ("EpsZeroOrigin", "DeltaZeroOrigin", "GammaZeroA", "SymmetricOrigin", "BinomialOrigin")]
        tp = make_params(-1, 0, 0.3, 0.4, 0.45, (1 + 0.3 + 0.4 - 0.45) / 2)
        full.append(("TwoTermOrigin", tp, Center.Origin))
        for v, p, center in full:
            mus = [1 + p.gamma] if v == "TwoTermOrigin" else allowed_mu(p, center)
            for mu in mus:
                red = reduced_solution(p, v, mu)
                unred = build_solution(p, ExpansionSpec(center, mu))
                pts = interior_points(unred.family.center, unred.radius, 7)
                if v in Z2_KERNELS:
                    # (z^2)^(s/2) = z^s only for Re z > 0
                    pts = [z for z in pts if z.real > 0]
                for z in pts[:3]:
                    k = _slope_ratio(red.family, unred.family, z)
                    worst = max(worst, _rel(red(z), k * unred(z)))
        red = lerch_solution(lp)
        unred = build_solution(lp, ExpansionSpec(Center.Origin, lp.gamma))
        for z in interior_points(0j, unred.radius, 3):
            worst = max(worst, _rel(red(z), unred(z)))
    return CheckResult(11, "reduced Beta/Lerch forms vs F1 forms", worst < 1e-9, worst, 1e-9)


CHECKS: dict[int, Callable[[], CheckResult]] = {
    1: check_f1_oracle,
    2: check_f1_reductions,
    3: check_generic_end_to_end,
    4: check_expansion_residuals,
    5: check_termwise_quadrature,
    6: check_two_term,
    7: check_maier,
    8: check_termination,
    9: check_perron,
    10: check_symmetric_closed_form,
    11: check_reduced_forms,
}


def run_check(number: int) -> CheckResult:
    start = time.perf_counter()
    try:
        res = CHECKS[number]()
    except HeunError as exc:
        res = CheckResult(number, CHECKS[number].__name__, False, float("nan"), float("nan"),
                          detail=f"{type(exc).__name__}: {exc}")
    if not res.seconds:
        res.seconds = time.perf_counter() - start
    return res


def run_all(numbers=None) -> list[CheckResult]:
    return [run_check(n) for n in (numbers or sorted(CHECKS))]
