"""Series solutions of the Heun equation built from expansions of the derivative.

A Frobenius solution v of the derivative equation about a centre c is
integrated term by term,

    u = C0 + sum_n a_n u_n,   u_n' = z^-gamma (z-1)^-delta (z-a)^-eps (z-c)^(n+mu),

and each u_n is an Appell F1 function.  Two flavours of u_n are provided:

* :func:`expansion_function` gives the closed forms anchored at z = 0
  (every u_n vanishes at the origin), exactly as derived in the literature.
* :func:`centered_term` anchors u_n at the expansion centre itself.  Only
  these terms give a convergent sum about 1, a, q/(alpha beta) and infinity,
  so :func:`sum_expansion` uses them.

The integration constant is fixed by requiring the Heun operator to vanish
at one probe point (see :func:`fix_c0`).
"""
from __future__ import annotations

import cmath
import enum
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, ExponentError, NonConvergenceError, PoleError, ProbeError, RegimeError
from .heun_model import INFINITY, HeunParams, ReductionClass, classify, principal_log
from .recurrences import (
    CoefficientSequence,
    RecurrenceKind,
    closed_form_origin,
    generic_coeffs,
    origin_coeffs,
    radius_origin,
    run,
    z0_coeffs,
)
from .specials import F1Params, appell_f1, incomplete_beta, lauricella_fd, lerch_phi

DEFAULT_N_MAX = 2000
DEFAULT_TOL = 1e-14
_TOL = 1e-10


class ConventionWarning(UserWarning):
    """The point or parameters fall outside |z| <= 1 <= |a|."""


class SlowConvergenceWarning(UserWarning):
    """A series used every available coefficient without meeting its tolerance."""


class Center(str, enum.Enum):
    Origin = "Origin"
    One = "One"
    A = "A"
    Infinity = "Infinity"
    Z0 = "Z0"


_KIND = {
    Center.Origin: RecurrenceKind.Origin,
    Center.One: RecurrenceKind.One,
    Center.A: RecurrenceKind.A,
    Center.Infinity: RecurrenceKind.Infinity,
    Center.Z0: RecurrenceKind.AtZ0,
}


def pw(base, exponent) -> complex:
    """Principal power with 0**0 = 1; (-x)**s = x**s exp(i pi s) for x > 0."""
    base, exponent = complex(base), complex(exponent)
    if exponent == 0:
        return 1.0 + 0j
    if base == 0:
        if exponent.real > 0:
            return 0j
        raise ZeroDivisionError("0 raised to a power with non-positive real part")
    return cmath.exp(exponent * principal_log(base))


def _close(x, y, tol=_TOL) -> bool:
    return abs(complex(x) - complex(y)) <= tol


def allowed_mu(p: HeunParams, center: Center | str) -> tuple:
    center = Center(center)
    if center is Center.Origin:
        return (0j, 1 + p.gamma) if _close(p.q, 0) else (0j, p.gamma)
    if center is Center.One:
        return (0j, p.delta)
    if center is Center.A:
        return (0j, p.epsilon)
    if center is Center.Infinity:
        return (-p.alpha, -p.beta)
    return (2 + 0j,)


@dataclass(frozen=True)
class ExpansionSpec:
    """Which Frobenius branch of the derivative equation to integrate."""

    center: Center
    mu: complex
    n_max: int = DEFAULT_N_MAX
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        object.__setattr__(self, "center", Center(self.center))
        object.__setattr__(self, "mu", complex(self.mu))
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")

    def check(self, p: HeunParams) -> None:
        allowed = allowed_mu(p, self.center)
        if not any(_close(self.mu, m) for m in allowed):
            raise ExponentError(f"mu = {self.mu} is not an exponent at {self.center.value}: {allowed}")


def _extra_z0(p: HeunParams):
    """q/(alpha beta) if it is a genuine fifth singular point, else None."""
    z0 = p.z0
    if z0 is None:
        return None
    if min(abs(z0), abs(z0 - 1), abs(z0 - p.a)) < _TOL:
        return None
    return z0


def center_point(p: HeunParams, center: Center | str):
    center = Center(center)
    return {Center.Origin: 0j, Center.One: 1 + 0j, Center.A: p.a, Center.Infinity: INFINITY, Center.Z0: p.z0}[center]


def center_radius(p: HeunParams, center: Center | str) -> float:
    """Radius of the disc about the centre (for infinity: the inner radius of the exterior domain)."""
    center = Center(center)
    z0 = _extra_z0(p)
    if center is Center.Origin:
        return radius_origin(p).radius
    if center is Center.Infinity:
        return max(1.0, abs(p.a), abs(z0) if z0 is not None else 0.0)
    c = center_point(p, center)
    others = [0j, 1 + 0j, p.a] + ([z0] if z0 is not None else [])
    return float(min(abs(c - s) for s in others if abs(c - s) > _TOL))


def log_derivative(p: HeunParams, z) -> complex:
    """d/dz log of z^-gamma (z-1)^-delta (z-a)^-epsilon."""
    z = complex(z)
    return -p.gamma / z - p.delta / (z - 1) - p.epsilon / (z - p.a)


# Expansion functions anchored at z = 0


def expansion_function(p: HeunParams, spec: ExpansionSpec, n: int, z) -> complex:
    """u_n of the F1 expansion about spec.center, anchored at z = 0.

    Origin and infinity use gamma0 = 1 - gamma + mu and 1 - gamma - mu.  The
    q/(alpha beta) centre needs epsilon = 0 and mu = 2.  Non-integer powers of
    -1, -a and -z0 are principal.
    """
    z = complex(z)
    center, mu = spec.center, spec.mu
    g, d, e, a = p.gamma, p.delta, p.epsilon, p.a
    if not (abs(z) <= 1 <= abs(a)):
        warnings.warn(f"|z| <= 1 <= |a| does not hold (z = {z}, a = {a})", ConventionWarning, stacklevel=2)
    if center in (Center.Origin, Center.Infinity):
        g0 = 1 - g + mu if center is Center.Origin else 1 - g - mu
        c = g0 + n if center is Center.Origin else g0 - n
        if abs(c) < 1e-14:
            raise PoleError("n + gamma0 vanishes")
        pref = pw(-1, -d) / pw(-a, e)
        return pref * pw(z, c) / c * appell_f1(F1Params(c, d, e, 1 + c), z, z / a)
    if _close(g, 1):
        raise PoleError("gamma = 1 makes the prefactor 1/(1 - gamma) singular")
    base = pw(z, 1 - g) / (1 - g)
    if center is Center.One:
        pref = pw(-1, -d + n + mu) / pw(-a, e)
        return pref * base * appell_f1(F1Params(1 - g, d - mu - n, e, 2 - g), z, z / a)
    if center is Center.A:
        pref = pw(-1, -d) / pw(-a, e - n - mu)
        return pref * base * appell_f1(F1Params(1 - g, d, e - mu - n, 2 - g), z, z / a)
    if not _close(e, 0) or not _close(mu, 2):
        raise RegimeError("the q/(alpha beta) expansion functions need epsilon = 0 and mu = 2")
    return _z0_function(p, n, z)


def _z0_function(p: HeunParams, n: int, z: complex) -> complex:
    # integral from 0 of t^-gamma (t-1)^-delta (t-z0)^(n+2); epsilon is not used
    g, d, z0 = p.gamma, p.delta, p.z0
    pref = pw(-1, -d) / pw(-z0, -2 - n)
    return pref * pw(z, 1 - g) / (1 - g) * appell_f1(F1Params(1 - g, d, -2 - n, 2 - g), z, z / z0)


def expansion_integrand(p: HeunParams, spec: ExpansionSpec, n: int, t) -> complex:
    """Integrand whose integral from 0 is :func:`expansion_function`, on the matching branch."""
    t = complex(t)
    g, d, e, a, mu = p.gamma, p.delta, p.epsilon, p.a, spec.mu
    w = pw(-1, -d) * pw(1 - t, -d) * pw(-a, -e) * pw(1 - t / a, -e)
    if spec.center is Center.Origin:
        return w * pw(t, n + mu - g)
    if spec.center is Center.Infinity:
        return w * pw(t, -g - n - mu)
    if spec.center is Center.One:
        return pw(-1, n + mu - d) * pw(1 - t, n + mu - d) * pw(-a, -e) * pw(1 - t / a, -e) * pw(t, -g)
    if spec.center is Center.A:
        return pw(-1, -d) * pw(1 - t, -d) * pw(-a, n + mu - e) * pw(1 - t / a, n + mu - e) * pw(t, -g)
    z0 = p.z0
    return pw(-1, -d) * pw(1 - t, -d) * (t - z0) ** (n + 2) * pw(t, -g)


# Centred terms


@dataclass(frozen=True)
class TermFamily:
    """Terms u_n (value) and u_n' (slope), each divided by scale**n.

    ``kappa(z)`` is d/dz log (z - c)^1 for the centre c, so that
    u_n'' = u_n' * (log_derivative + (n + mu) kappa).
    """

    params: HeunParams
    mu: complex
    scale: float
    value: Callable[[int, complex], complex]
    slope: Callable[[int, complex], complex]
    kappa: Callable[[complex], complex]
    center: object
    label: str = ""

    def curvature(self, n: int, z: complex) -> complex:
        return self.slope(n, z) * (log_derivative(self.params, z) + (n + self.mu) * self.kappa(z))


def _f1(A, b1, b2, x, y, tol=1e-15) -> complex:
    return appell_f1(F1Params(A, b1, b2, A + 1), x, y, tol)


def centered_family(p: HeunParams, center: Center | str, mu, scale: float = 1.0) -> TermFamily:
    """Terms anchored at the centre (at infinity: vanishing as z -> infinity)."""
    center = Center(center)
    mu = complex(mu)
    g, d, e, a = p.gamma, p.delta, p.epsilon, p.a
    R = float(scale)

    if center is Center.Origin:
        g0 = 1 - g + mu
        pref = pw(-1, -d) / pw(-a, e)

        def value(n, z):
            c = n + g0
            return pref * (z / R) ** n * pw(z, g0) / c * _f1(c, d, e, z, z / a)

        def slope(n, z):
            return pref * pw(1 - z, -d) * pw(1 - z / a, -e) * pw(z, mu - g) * (z / R) ** n

        return TermFamily(p, mu, R, value, slope, lambda z: 1 / z, 0j, "origin")

    if center is Center.One:
        pref = pw(1 - a, -e)

        def value(n, z):
            m1 = n + mu - d + 1
            x = 1 - z
            return pref * ((z - 1) / R) ** n * pw(z - 1, m1 - n) / m1 * _f1(m1, g, e, x, x / (1 - a))

        def slope(n, z):
            return pref * pw(z, -g) * pw((a - z) / (a - 1), -e) * pw(z - 1, mu - d) * ((z - 1) / R) ** n

        return TermFamily(p, mu, R, value, slope, lambda z: 1 / (z - 1), 1 + 0j, "one")

    if center is Center.A:
        pref = pw(a, -g) * pw(a - 1, -d)

        def value(n, z):
            m1 = n + mu - e + 1
            return (pref * ((z - a) / R) ** n * pw(z - a, m1 - n) / m1
                    * _f1(m1, g, d, (a - z) / a, (a - z) / (a - 1)))

        def slope(n, z):
            return pref * pw(z / a, -g) * pw((z - 1) / (a - 1), -d) * pw(z - a, mu - e) * ((z - a) / R) ** n

        return TermFamily(p, mu, R, value, slope, lambda z: 1 / (z - a), a, "a")

    if center is Center.Infinity:
        C0 = mu + g + d + e

        def value(n, z):
            C = C0 + n
            return -pw(z, 1 - C0) * (R / z) ** n / (C - 1) * _f1(C - 1, d, e, 1 / z, a / z)

        def slope(n, z):
            return pw(z, -C0) * (R / z) ** n * pw(1 - 1 / z, -d) * pw(1 - a / z, -e)

        return TermFamily(p, mu, R, value, slope, lambda z: -1 / z, INFINITY, "infinity")

    return _z0_family(p, mu, R)


def _z0_family(p: HeunParams, mu: complex, R: float) -> TermFamily:
    """Terms about q/(alpha beta).

    epsilon = 0 gives F1 terms, epsilon = -1 the split u_(n+1) + (z0 - a) u_n
    of F1 terms, and any other epsilon a three-variable Lauricella F_D.
    """
    g, d, e, a = p.gamma, p.delta, p.epsilon, p.a
    z0 = p.z0
    if z0 is None:
        raise RegimeError("alpha*beta = 0: there is no q/(alpha beta) centre")
    mode = "f1" if _close(e, 0) else "split" if _close(e, -1) else "fd"
    pref = pw(z0, -g) * pw(z0 - 1, -d)
    if mode == "fd":
        pref *= pw(z0 - a, -e)
    k0 = int(round(mu.real))

    def base(k, n, z):
        # integral from z0 of the weight times (t-z0)^k, divided by R^n
        x = z0 - z
        scaled = pref * ((z - z0) / R) ** n * (z - z0) ** (k - n + 1) / (k + 1)
        if mode == "fd":
            return scaled * lauricella_fd(k + 1, (g, d, e), k + 2, (x / z0, x / (z0 - 1), x / (z0 - a)))
        return scaled * _f1(k + 1, g, d, x / z0, x / (z0 - 1))

    def value(n, z):
        if mode == "split":
            return (z0 - a) * base(n + k0, n, z) + base(n + k0 + 1, n, z)
        return base(n + k0, n, z)

    def slope(n, z):
        w = pref * pw(z / z0, -g) * pw((z - 1) / (z0 - 1), -d) * (z - z0) ** k0 * ((z - z0) / R) ** n
        if mode == "split":
            return w * (z - a)
        if mode == "fd":
            return w * pw((z - a) / (z0 - a), -e)
        return w

    return TermFamily(p, mu, R, value, slope, lambda z: 1 / (z - z0), z0, "z0")


def centered_term(p: HeunParams, center: Center | str, mu, n: int, z) -> complex:
    """Single centred u_n (unscaled)."""
    return centered_family(p, center, mu).value(n, complex(z))


# Summation and the integration constant


def _series_sums(fam: TermFamily, coeffs: np.ndarray, z: complex, tol: float, which=("value",)):
    """Sum a_n times the requested term kinds.

    Zero coefficients are skipped.  The sum stops once three consecutive
    terms are below tol times the largest partial sum seen (for every kind).
    Returns (sums, terms used, size of the last three terms, converged).
    """
    get = {"value": fam.value, "slope": fam.slope, "curvature": fam.curvature}
    out = {k: 0j for k in which}
    biggest = {k: 0.0 for k in which}
    last = [0.0, 0.0, 0.0]
    run_small = 0
    n_used = 0
    for n, c in enumerate(coeffs):
        if c == 0:
            continue
        n_used = n + 1
        small = True
        for k in which:
            t = c * get[k](n, z)
            out[k] += t
            biggest[k] = max(biggest[k], abs(out[k]))
            small = small and abs(t) <= tol * biggest[k]
            if k == which[0]:
                last = last[1:] + [abs(t)]
        run_small = run_small + 1 if small else 0
        if run_small >= 3:
            return out, n_used, float(sum(last)), True
    return out, n_used, float(sum(last)), False


@dataclass(frozen=True)
class SeriesSolution:
    """u = C0 + sum a_n u_n for one expansion branch."""

    params: HeunParams
    spec: ExpansionSpec
    coeffs: CoefficientSequence
    c0: complex
    radius: float
    reduction: frozenset
    family: TermFamily = field(repr=False)
    branch_choices: dict = field(default_factory=dict)

    def _check_domain(self, z: complex) -> None:
        c = self.family.center
        if isinstance(c, str):
            if abs(z) <= self.radius / 0.95:
                raise DomainError(f"|z| = {abs(z):.4g} must exceed {self.radius / 0.95:.4g} for the expansion about infinity")
        elif abs(z - c) >= 0.95 * self.radius:
            raise DomainError(
                f"|z - {c}| = {abs(z - c):.4g} is outside 0.95 x the convergence radius {self.radius:.4g}")

    def evaluate(self, z, tol: float | None = None) -> tuple[complex, int, float]:
        """(u(z), terms used, magnitude of the last three terms)."""
        z = complex(z)
        self._check_domain(z)
        tol = self.spec.tol if tol is None else tol
        sums, n_used, est, ok = _series_sums(self.family, self.coeffs.values, z, tol)
        if not ok and not self.coeffs.terminated:
            warnings.warn(f"series used all {n_used} coefficients without converging", SlowConvergenceWarning)
        return self.c0 + sums["value"], n_used, est

    def __call__(self, z) -> complex:
        return self.evaluate(z)[0]

    def derivative(self, z, order: int = 1) -> complex:
        """u'(z) (order 1) or u''(z) (order 2), summed termwise."""
        z = complex(z)
        self._check_domain(z)
        key = "slope" if order == 1 else "curvature"
        sums, _, _, _ = _series_sums(self.family, self.coeffs.values, z, self.spec.tol, (key,))
        return sums[key]

    def derivative_series(self, z) -> complex:
        """v(z) = (z-c)^mu sum a_n (z-c)^n of the derivative equation."""
        z = complex(z)
        c = self.family.center
        # values hold a_n * scale**n, so sum them against powers of x / scale
        x = 1 / z if isinstance(c, str) else z - c
        s = complex(np.polynomial.polynomial.polyval(x / self.coeffs.scale, self.coeffs.values))
        return pw(x, self.spec.mu) * s


def heun_operator(p: HeunParams, z, u, du, ddu) -> complex:
    z = complex(z)
    P = p.gamma * (z - 1) * (z - p.a) + p.delta * z * (z - p.a) + p.epsilon * z * (z - 1)
    return z * (z - 1) * (z - p.a) * ddu + P * du + (p.ab * z - p.q) * u


def default_probe(p: HeunParams, fam: TermFamily, radius: float) -> complex:
    c = fam.center
    for angle in (0.7, 1.9, -1.3, 2.6):
        if isinstance(c, str):
            z = 2.0 * radius * cmath.exp(1j * angle)
        else:
            z = c + 0.45 * radius * cmath.exp(1j * angle)
        if abs(p.ab * z - p.q) > 1e-6 * max(1.0, abs(p.q)):
            return z
    raise ProbeError("no admissible probe point found")


def fix_c0(p: HeunParams, partial: SeriesSolution, probe=None) -> complex:
    """Integration constant from the Heun operator at one probe point.

    With U the summed series, L[C0 + U] = 0 means
    C0 = -L[U](probe) / (alpha beta probe - q).  U' and U'' are summed
    analytically from the integrands.
    """
    fam = partial.family
    probe = default_probe(p, fam, partial.radius) if probe is None else complex(probe)
    denom = p.ab * probe - p.q
    if abs(denom) < 1e-12 * max(1.0, abs(p.q), abs(p.ab * probe)):
        raise ProbeError(f"alpha*beta*probe - q vanishes at probe = {probe}")
    sums, _, _, _ = _series_sums(fam, partial.coeffs.values, probe, 1e-16, ("value", "slope", "curvature"))
    L = heun_operator(p, probe, sums["value"], sums["slope"], sums["curvature"])
    return complex(-L / denom)


def _coefficients(p: HeunParams, spec: ExpansionSpec, scale: float) -> CoefficientSequence:
    kind = _KIND[spec.center]
    if spec.center is Center.Origin:
        rc = origin_coeffs(p, spec.mu)
    elif spec.center is Center.Z0:
        rc = z0_coeffs(p, spec.mu)
    else:
        rc = generic_coeffs(p, kind, spec.mu)
    seq = run(rc, spec.n_max, scale=scale)
    if not np.all(np.isfinite(seq.values)):
        raise NonConvergenceError("coefficients overflowed")
    return seq


def build_solution(p: HeunParams, spec: ExpansionSpec, probe=None, c0=None) -> SeriesSolution:
    """Coefficients, radius and integration constant of one expansion branch."""
    spec.check(p)
    radius = center_radius(p, spec.center)
    if radius <= 0:
        raise DomainError("the expansion centre coincides with another singular point")
    scale = 1.0 / radius if spec.center is Center.Infinity else radius
    coeffs = _coefficients(p, spec, scale)
    fam = centered_family(p, spec.center, spec.mu, radius)
    sol = SeriesSolution(p, spec, coeffs, 0j, radius, classify(p), fam,
                         {"powers": "principal", "(-1)^x": "exp(i pi x)"})
    if c0 is None:
        c0 = fix_c0(p, sol, probe)
    return SeriesSolution(p, spec, coeffs, complex(c0), radius, sol.reduction, fam, sol.branch_choices)


def sum_expansion(p: HeunParams, spec: ExpansionSpec, z, probe=None) -> tuple[complex, int, float]:
    """u(z) = C0 + sum a_n u_n with tail control: (value, terms used, error estimate)."""
    return build_solution(p, spec, probe).evaluate(z)


# Reduced forms


class BetaVariant(str, enum.Enum):
    EpsZeroOrigin = "EpsZeroOrigin"
    EpsZeroOne = "EpsZeroOne"
    EpsZeroInfinity = "EpsZeroInfinity"
    DeltaZeroOrigin = "DeltaZeroOrigin"
    DeltaZeroA = "DeltaZeroA"
    DeltaZeroInfinity = "DeltaZeroInfinity"
    GammaZeroOne = "GammaZeroOne"
    GammaZeroA = "GammaZeroA"
    SymmetricOrigin = "SymmetricOrigin"
    BinomialOrigin = "BinomialOrigin"
    TwoTermOrigin = "TwoTermOrigin"


# variant -> (required regime, coefficient centre)
_VARIANTS = {
    BetaVariant.EpsZeroOrigin: ("eps0", Center.Origin),
    BetaVariant.EpsZeroOne: ("eps0", Center.One),
    BetaVariant.EpsZeroInfinity: ("eps0", Center.Infinity),
    BetaVariant.DeltaZeroOrigin: ("delta0", Center.Origin),
    BetaVariant.DeltaZeroA: ("delta0", Center.A),
    BetaVariant.DeltaZeroInfinity: ("delta0", Center.Infinity),
    BetaVariant.GammaZeroOne: ("gamma0", Center.One),
    BetaVariant.GammaZeroA: ("gamma0", Center.A),
    BetaVariant.SymmetricOrigin: ("symmetric", Center.Origin),
    BetaVariant.BinomialOrigin: ("binomial1", Center.Origin),
    BetaVariant.TwoTermOrigin: ("twoterm", Center.Origin),
}

# series whose Beta functions are anchored away from the coefficient centre
ANCHORED_ELSEWHERE = {BetaVariant.EpsZeroOne, BetaVariant.DeltaZeroA, BetaVariant.GammaZeroOne}
DISJOINT = {BetaVariant.EpsZeroInfinity, BetaVariant.DeltaZeroInfinity}


def _check_regime(p: HeunParams, regime: str) -> None:
    tags = classify(p)
    ok = {
        "eps0": ReductionClass.EpsZero in tags,
        "delta0": ReductionClass.DeltaZero in tags,
        "gamma0": ReductionClass.GammaZero in tags,
        "symmetric": ReductionClass.SymmetricBeta in tags and not _close(p.q, 0),
        "binomial1": ReductionClass.BinomialCase in tags and _close(p.delta - p.epsilon, 1),
        "twoterm": ReductionClass.TwoTermOrigin in tags,
    }[regime]
    if not ok:
        raise RegimeError(f"parameters are outside the {regime} regime")


def default_mu(p: HeunParams, variant: BetaVariant) -> complex:
    variant = BetaVariant(variant)
    if variant is BetaVariant.TwoTermOrigin:
        return 1 + p.gamma
    center = _VARIANTS[variant][1]
    return allowed_mu(p, center)[0]


def beta_family(p: HeunParams, variant: BetaVariant | str, mu, scale: float = 1.0) -> TermFamily:
    """Incomplete-Beta terms of a reduced expansion, divided by scale**n.

    The slope of each term is taken from the derivative of B(p, q; g(z)),
    g^(p-1) (1-g)^(q-1) g', independently of the F1 integrands.
    """
    variant = BetaVariant(variant)
    _check_regime(p, _VARIANTS[variant][0])
    mu = complex(mu)
    g, d, e, a = p.gamma, p.delta, p.epsilon, p.a
    R = float(scale)
    V = BetaVariant

    def make(pref, pp, qq, arg, darg, center, kappa, power_base):
        # term = pref(n) * B(pp(n), qq(n); arg(z)); power_base(z)/R rescales pref
        def value(n, z):
            return pref(n) * incomplete_beta(pp(n), qq(n), arg(z)) / R**n

        def slope(n, z):
            x = arg(z)
            return pref(n) * pw(x, pp(n) - 1) * pw(1 - x, qq(n) - 1) * darg(z) / R**n

        return TermFamily(p, mu, R, value, slope, kappa, center, variant.value)

    ident, one = (lambda z: z), (lambda z: 1.0)
    k0 = lambda z: 1 / z  # noqa: E731
    if variant is V.EpsZeroOrigin:
        return make(lambda n: pw(-1, -d), lambda n: 1 + n - g + mu, lambda n: 1 - d, ident, one, 0j, k0, None)
    if variant is V.EpsZeroOne:
        return make(lambda n: pw(-1, -d) * pw(-1, n + mu), lambda n: 1 - g, lambda n: 1 + n - d + mu,
                    ident, one, 1 + 0j, lambda z: 1 / (z - 1), None)
    if variant is V.EpsZeroInfinity:
        return make(lambda n: pw(-1, -d), lambda n: 1 - n - g - mu, lambda n: 1 - d, ident, one,
                    INFINITY, lambda z: -1 / z, None)
    if variant is V.DeltaZeroOrigin:
        return make(lambda n: pw(a, 1 + n - g + mu) / pw(-a, e), lambda n: 1 + n - g + mu, lambda n: 1 - e,
                    lambda z: z / a, lambda z: 1 / a, 0j, k0, None)
    if variant is V.DeltaZeroA:
        return make(lambda n: -pw(-a, 1 + n - e + mu) / pw(a, g), lambda n: 1 - g, lambda n: 1 + n - e + mu,
                    lambda z: z / a, lambda z: 1 / a, a, lambda z: 1 / (z - a), None)
    if variant is V.DeltaZeroInfinity:
        return make(lambda n: pw(a, 1 - n - g - mu) / pw(-a, e), lambda n: 1 - n - g - mu, lambda n: 1 - e,
                    lambda z: z / a, lambda z: 1 / a, INFINITY, lambda z: -1 / z, None)
    if variant is V.GammaZeroOne:
        return make(lambda n: -pw(a - 1, 1 + n - d + mu) / pw(1 - a, e), lambda n: 1 - e,
                    lambda n: 1 + n - d + mu, lambda z: (a - z) / (a - 1), lambda z: -1 / (a - 1),
                    1 + 0j, lambda z: 1 / (z - 1), None)
    if variant is V.GammaZeroA:
        return make(lambda n: pw(1 - a, 1 + n - e + mu) / pw(a - 1, d), lambda n: 1 + n - e + mu,
                    lambda n: 1 - d, lambda z: (a - z) / (a - 1), lambda z: -1 / (a - 1),
                    a, lambda z: 1 / (z - a), None)
    g0 = 1 - g + mu
    sq, dsq = (lambda z: z * z), (lambda z: 2 * z)
    if variant is V.SymmetricOrigin:
        return make(lambda n: pw(-1, -d) / 2, lambda n: (n + g0) / 2, lambda n: 1 - d, sq, dsq, 0j, k0, None)
    if variant is V.BinomialOrigin:
        half = make(lambda n: pw(-1, -d) / 2, lambda n: (n + g0) / 2, lambda n: 1 - d, sq, dsq, 0j, k0, None)
        other = make(lambda n: pw(-1, -d) / 2, lambda n: (n + g0 + 1) / 2, lambda n: 1 - d, sq, dsq, 0j, k0, None)
        return TermFamily(p, mu, R, lambda n, z: half.value(n, z) + other.value(n, z),
                          lambda n, z: half.slope(n, z) + other.slope(n, z), k0, 0j, variant.value)
    # TwoTermOrigin: term n = 2k carries B((1 - gamma + mu)/2 + k, 1 - delta; z^2) / 2
    return make(lambda n: 0.5, lambda n: g0 / 2 + n / 2, lambda n: 1 - d, sq, dsq, 0j, k0, None)


def beta_term(p: HeunParams, variant: BetaVariant | str, mu, n: int, z) -> complex:
    """Single unscaled Beta-function term of a reduced expansion."""
    return beta_family(p, variant, mu).value(n, complex(z))


@dataclass(frozen=True)
class ReducedSolution:
    params: HeunParams
    variant: str
    mu: complex
    coeffs: CoefficientSequence
    c0: complex
    radius: float
    family: TermFamily = field(repr=False)
    tol: float = DEFAULT_TOL

    def partial_sum(self, z, N: int) -> complex:
        """C0 + sum_{n <= N} a_n u_n without any tail test."""
        z = complex(z)
        vals = self.coeffs.values[: N + 1]
        return self.c0 + sum(c * self.family.value(n, z) for n, c in enumerate(vals) if c != 0)

    def evaluate(self, z) -> tuple[complex, int, float]:
        z = complex(z)
        sums, n_used, est, ok = _series_sums(self.family, self.coeffs.values, z, self.tol)
        if not ok and not self.coeffs.terminated:
            raise NonConvergenceError(f"reduced series did not converge within {n_used} terms at z = {z}")
        return self.c0 + sums["value"], n_used, est

    def __call__(self, z) -> complex:
        return self.evaluate(z)[0]


def _reduced(p: HeunParams, fam_builder, center: Center, mu, n_max: int, tol: float, probe, c0,
             coeffs: CoefficientSequence | None = None, label: str = "") -> ReducedSolution:
    spec = ExpansionSpec(center, mu, n_max, tol)
    spec.check(p)
    radius = center_radius(p, center)
    scale = 1.0 / radius if center is Center.Infinity else radius
    if coeffs is None:
        coeffs = _coefficients(p, spec, scale)
    fam = fam_builder(scale)
    red = ReducedSolution(p, label, complex(mu), coeffs, 0j, radius, fam, tol)
    if c0 is None:
        c0 = _reduced_c0(p, red, center, radius, probe)
    return ReducedSolution(p, label, complex(mu), coeffs, complex(c0), radius, fam, tol)


def _reduced_c0(p: HeunParams, red: ReducedSolution, center: Center, radius: float, probe) -> complex:
    fam = red.family
    if probe is None:
        probe = default_probe(p, fam, radius)
    probe = complex(probe)
    denom = p.ab * probe - p.q
    if abs(denom) < 1e-12 * max(1.0, abs(p.q), abs(p.ab * probe)):
        raise ProbeError(f"alpha*beta*probe - q vanishes at probe = {probe}")
    sums, _, _, ok = _series_sums(fam, red.coeffs.values, probe, 1e-16, ("value", "slope", "curvature"))
    if not ok and not red.coeffs.terminated:
        raise NonConvergenceError("reduced series does not converge at the probe point")
    L = heun_operator(p, probe, sums["value"], sums["slope"], sums["curvature"])
    return complex(-L / denom)


def reduced_solution(p: HeunParams, variant: BetaVariant | str, mu=None, n_max: int = DEFAULT_N_MAX,
                     tol: float = DEFAULT_TOL, probe=None, c0=None) -> ReducedSolution:
    """Beta-function expansion with its own integration constant."""
    variant = BetaVariant(variant)
    regime, center = _VARIANTS[variant]
    _check_regime(p, regime)
    mu = default_mu(p, variant) if mu is None else complex(mu)
    if variant in DISJOINT:
        raise DomainError(
            f"{variant.value}: the series about infinity converges only for |z| > max(1, |a|) while the "
            "Beta functions of z need |z| < 1; use beta_term for single terms")
    coeffs = None
    if variant is BetaVariant.TwoTermOrigin:
        radius = center_radius(p, center)
        seq = closed_form_origin(p, mu, n_max)
        coeffs = CoefficientSequence(seq.values * radius ** np.arange(len(seq.values)), seq.mu, seq.kind,
                                     seq.terminated, radius)
    return _reduced(p, lambda s: beta_family(p, variant, mu, s), center, mu, n_max, tol, probe, c0,
                    coeffs, variant.value)


def beta_expansion(p: HeunParams, variant: BetaVariant | str, z, mu=None, **kw) -> complex:
    """Value of a reduced incomplete-Beta expansion at z."""
    return reduced_solution(p, variant, mu, **kw)(z)


def lerch_family(p: HeunParams, mu, scale: float = 1.0) -> TermFamily:
    """Terms z^c [1/c + (a-1) Phi(z, 1, c)], c = n + 1 - gamma + mu (delta = 1, epsilon = -1)."""
    mu = complex(mu)
    a, g = p.a, p.gamma
    g0 = 1 - g + mu
    R = float(scale)

    def value(n, z):
        c = n + g0
        return (z / R) ** n * pw(z, g0) * (1 / c + (a - 1) * lerch_phi(z, 1, c))

    def slope(n, z):
        return (z / R) ** n * pw(z, g0 - 1) * (z - a) / (z - 1)

    return TermFamily(p, mu, R, value, slope, lambda z: 1 / z, 0j, "lerch")


def lerch_solution(p: HeunParams, mu=None, n_max: int = DEFAULT_N_MAX, tol: float = DEFAULT_TOL,
                   probe=None) -> ReducedSolution:
    if ReductionClass.LerchCase not in classify(p):
        raise RegimeError("the Lerch expansion needs delta = 1 and epsilon = -1")
    if _close(p.q, 0):
        raise RegimeError("the Lerch expansion needs q != 0")
    mu = p.gamma if mu is None else complex(mu)
    return _reduced(p, lambda s: lerch_family(p, mu, s), Center.Origin, mu, n_max, tol, probe, None,
                    label="lerch")


def lerch_expansion(p: HeunParams, z, mu=None, **kw) -> complex:
    """Hurwitz-Lerch form of the origin expansion for delta = 1, epsilon = -1."""
    return lerch_solution(p, mu, **kw)(z)


def combo_solution(p: HeunParams, n_max: int = DEFAULT_N_MAX, tol: float = DEFAULT_TOL, probe=None) -> SeriesSolution:
    """Expansion about q/(alpha beta) for epsilon = -1: terms u_{n+1} + (z0 - a) u_n."""
    if not _close(p.epsilon, -1):
        raise RegimeError("the combined expansion needs epsilon = -1")
    if _close(p.ab, 0):
        raise RegimeError("the combined expansion needs alpha*beta != 0")
    return build_solution(p, ExpansionSpec(Center.Z0, 2, n_max, tol), probe)


def combo_expansion_eps_minus1(p: HeunParams, z, **kw) -> complex:
    return combo_solution(p, **kw)(z)


def combo_term(p: HeunParams, n: int, z) -> complex:
    """u_{n+1} + (z0 - a) u_n with u_n the q/(alpha beta) expansion functions anchored at 0."""
    if not _close(p.epsilon, -1):
        raise RegimeError("the combined expansion needs epsilon = -1")
    z = complex(z)
    return _z0_function(p, n + 1, z) + (p.z0 - p.a) * _z0_function(p, n, z)


def reference_c0(p: HeunParams, regime: str, mu) -> complex:
    """Reference values of the integration constant in the reduced regimes.

    ``regime`` is "eps0" or "symmetric" ((-1)^-delta a mu / q), "twoterm"
    (mu / (alpha beta)) or "lerch" (2 a mu / q, which holds only for a = 2).
    """
    mu = complex(mu)
    if regime in ("eps0", "symmetric"):
        return pw(-1, -p.delta) * p.a * mu / p.q
    if regime == "twoterm":
        return mu / p.ab
    if regime == "lerch":
        return 2 * p.a * mu / p.q
    raise KeyError(regime)
