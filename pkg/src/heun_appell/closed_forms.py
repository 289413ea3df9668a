"""Exact solutions and special values in two reducible regimes.

* a = -1, q = 0, delta = epsilon: the Heun equation is hypergeometric in z^2.
* a = (-1)^(+-1/3), q = alpha beta (1 + a)/3, gamma = delta = epsilon:
  a cubic change of variable gives 2F1 of
  w = -a^(3/2) (1 + a - 3z)^3 / (3 sqrt 3).
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import loggamma

from .errors import DomainError, PoleError, RegimeError
from .heun_model import HeunParams, ReductionClass, classify, is_maier, principal_log
from .recurrences import closed_form_origin
from .specials import gamma, gauss_2f1, is_nonpositive_integer

SQRT3 = math.sqrt(3.0)


class Family(str, enum.Enum):
    SymmetricZ2 = "SymmetricZ2"
    MaierCube = "MaierCube"


def _require_two_term(p: HeunParams) -> None:
    if ReductionClass.TwoTermOrigin not in classify(p):
        raise RegimeError("needs a = -1, q = 0 and delta = epsilon")


def value_at_origin_two_term(p: HeunParams) -> complex:
    """u(0) = (1 + gamma)/(alpha beta) for the mu = 1 + gamma two-term series."""
    _require_two_term(p)
    if p.ab == 0:
        raise RegimeError("alpha*beta = 0")
    return (1 + p.gamma) / p.ab


def value_at_one_two_term(p: HeunParams) -> complex:
    """u(1) of the same solution, by Gauss's summation theorem."""
    _require_two_term(p)
    args = ((1 + p.gamma) / 2, 1 - p.delta, (1 + p.gamma - p.alpha) / 2, (1 + p.gamma - p.beta) / 2)
    for x in args[:2]:
        if is_nonpositive_integer(x):
            raise PoleError(f"Gamma has a pole at {x}")
    if (1 - p.delta).real <= 0:
        raise DomainError("the series diverges at z = 1 unless Re(1 - delta) > 0")
    if any(is_nonpositive_integer(x) for x in args[2:]):
        return 0j
    return value_at_origin_two_term(p) * gamma(args[0]) * gamma(args[1]) / (gamma(args[2]) * gamma(args[3]))


def abel_sum_at_one(p: HeunParams, K: int = 4000, levels: int = 4) -> tuple[complex, float]:
    """Limit z -> 1- of the two-term Beta series, summed at z = 1 (Abel).

    At z = 1 every incomplete Beta becomes a complete one and the terms
    decay like k^-2, so partial sums S_K have tails in powers of 1/K.
    Richardson extrapolation over K, 2K, 4K, ... removes them.  Returns the
    estimate and the last correction.
    """
    _require_two_term(p)
    mu = 1 + p.gamma
    n_max = 2 * K * 2 ** (levels - 1)
    c = closed_form_origin(p, mu, n_max).values[0::2]
    k = np.arange(len(c))
    pk = (1 - p.gamma + mu) / 2 + k
    qb = 1 - p.delta
    logb = loggamma(pk) + loggamma(qb) - loggamma(pk + qb)
    terms = 0.5 * c * np.exp(logb)
    partial = np.cumsum(terms)
    c0 = mu / p.ab
    table = [complex(partial[K * 2**i - 1]) for i in range(levels)]
    correction = 0.0
    for order in range(1, levels):
        f = 2.0**order
        new = [(f * table[i + 1] - table[i]) / (f - 1) for i in range(len(table) - 1)]
        correction = abs(new[-1] - table[-1])
        table = new
    return c0 + table[0], correction


def _hyp_and_derivatives(a, b, c, w):
    f = gauss_2f1(a, b, c, w)
    f1 = a * b / c * gauss_2f1(a + 1, b + 1, c + 1, w)
    f2 = a * b * (a + 1) * (b + 1) / (c * (c + 1)) * gauss_2f1(a + 2, b + 2, c + 2, w)
    return f, f1, f2


@dataclass(frozen=True)
class ClosedFormSolution:
    """c1 u1 + c2 u2 for the two exactly solvable families."""

    params: HeunParams
    c1: complex
    c2: complex
    family: Family
    branch: complex = 1.0 + 0j  # a^(3/2) actually used (MaierCube only)
    branch_choices: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.family is Family.SymmetricZ2:
            _require_two_term(self.params)
        else:
            _require_maier(self.params)

    def jet(self, z) -> tuple[complex, complex, complex]:
        """(u, u', u'') at z."""
        z = complex(z)
        p = self.params
        if self.family is Family.SymmetricZ2:
            return _symmetric_jet(p, self.c1, self.c2, z)
        return _maier_jet(p, self.c1, self.c2, z, self.branch)

    def __call__(self, z) -> complex:
        return self.jet(z)[0]

    def residual(self, z) -> float:
        """Relative residual of the Heun equation multiplied by z(z-1)(z-a)."""
        z = complex(z)
        p = self.params
        u, du, ddu = self.jet(z)
        P = p.gamma * (z - 1) * (z - p.a) + p.delta * z * (z - p.a) + p.epsilon * z * (z - 1)
        parts = (z * (z - 1) * (z - p.a) * ddu, P * du, (p.ab * z - p.q) * u)
        return abs(sum(parts)) / max(max(abs(x) for x in parts), 1e-300)


def _symmetric_jet(p: HeunParams, c1, c2, z: complex):
    g, al, be, d = p.gamma, p.alpha, p.beta, p.delta
    x = z * z
    if abs(x) >= 1:
        raise DomainError("the z^2 hypergeometric series needs |z| < 1")
    f, f1, f2 = _hyp_and_derivatives(al / 2, be / 2, (1 + g) / 2, x)
    u1 = f
    du1 = 2 * z * f1
    ddu1 = 2 * f1 + 4 * x * f2
    h, h1, h2 = _hyp_and_derivatives(d - al / 2, d - be / 2, (3 - g) / 2, x)
    s = 1 - g
    if z == 0:
        if s.real <= 0 and c2 != 0:
            raise PoleError("z^(1 - gamma) is singular at 0")
        zp = 0j if s != 0 else 1 + 0j
        dzp = ddzp = 0j
    else:
        zp = cmath.exp(s * principal_log(z))
        dzp = s * zp / z
        ddzp = s * (s - 1) * zp / (z * z)
    g1, g2 = 2 * z * h1, 2 * h1 + 4 * x * h2
    u2 = zp * h
    du2 = dzp * h + zp * g1
    ddu2 = ddzp * h + 2 * dzp * g1 + zp * g2
    return c1 * u1 + c2 * u2, c1 * du1 + c2 * du2, c1 * ddu1 + c2 * ddu2


def eval_symmetric_z2(p: HeunParams, c1, c2, z) -> complex:
    """c1 2F1(alpha/2, beta/2; (1+gamma)/2; z^2) + c2 z^(1-gamma) 2F1(delta-alpha/2, delta-beta/2; (3-gamma)/2; z^2)."""
    return ClosedFormSolution(p, c1, c2, Family.SymmetricZ2)(z)


def _require_maier(p: HeunParams) -> None:
    if not is_maier(p):
        raise RegimeError("needs a = (-1)^(+-1/3), q = alpha beta (1 + a)/3 and gamma = delta = epsilon")


def principal_a32(a: complex) -> complex:
    return cmath.exp(1.5 * principal_log(a))


def _maier_jet(p: HeunParams, c1, c2, z: complex, branch: complex):
    al, be, a = p.alpha, p.beta, p.a
    s = 1 + a - 3 * z
    w = -branch * s**3 / (3 * SQRT3)
    if abs(w) >= 1:
        raise DomainError(f"|w| = {abs(w):.4g}: the cubic argument must lie inside the unit disc")
    dw = 3 * branch * s * s / SQRT3
    ddw = -18 * branch * s / SQRT3
    f, f1, f2 = _hyp_and_derivatives(al / 3, be / 3, 2 / 3, w)
    h, h1, h2 = _hyp_and_derivatives((1 + al) / 3, (1 + be) / 3, 4 / 3, w)
    u1, du1, ddu1 = f, f1 * dw, f2 * dw * dw + f1 * ddw
    H, dH, ddH = h, h1 * dw, h2 * dw * dw + h1 * ddw
    u2, du2, ddu2 = s * H, -3 * H + s * dH, -6 * dH + s * ddH
    return c1 * u1 + c2 * u2, c1 * du1 + c2 * du2, c1 * ddu1 + c2 * ddu2


def maier_solution(p: HeunParams, c1=1.0, c2=0.0, probes=None, tol: float = 1e-8) -> ClosedFormSolution:
    """Cubic-argument solution with the a^(3/2) branch fixed by the residual test.

    The principal branch is tried first, then its negative.  The branch that
    satisfies the equation at every probe point is kept and recorded.
    """
    _require_maier(p)
    if probes is None:
        z0 = (1 + p.a) / 3
        probes = [z0 + 0.15 * cmath.exp(1j * t) for t in (0.3, 1.4, 2.9)]
    principal = principal_a32(p.a)
    for label, b in (("principal", principal), ("negated", -principal)):
        sols = [ClosedFormSolution(p, 1, 0, Family.MaierCube, b), ClosedFormSolution(p, 0, 1, Family.MaierCube, b)]
        if all(s.residual(z) < tol for s in sols for z in probes):
            return ClosedFormSolution(p, c1, c2, Family.MaierCube, b,
                                      {"a^(3/2)": label, "value": [b.real, b.imag]})
    raise RegimeError("neither branch of a^(3/2) satisfies the equation")


def eval_maier(p: HeunParams, c1, c2, z) -> complex:
    """c1 2F1(alpha/3, beta/3; 2/3; w) + c2 (1+a-3z) 2F1((1+alpha)/3, (1+beta)/3; 4/3; w)."""
    return maier_solution(p, c1, c2)(z)


def wronskian(u: ClosedFormSolution, v: ClosedFormSolution, z) -> complex:
    a, da, _ = u.jet(z)
    b, db, _ = v.jet(z)
    return a * db - b * da
