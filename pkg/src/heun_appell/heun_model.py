"""Heun parameters, singularity tables, regime classification and affine maps."""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, replace

from .errors import ParameterError

DEFAULT_CLASSIFY_TOL = 1e-10
CBRT_MINUS_ONE = complex(math.cos(math.pi / 3), math.sin(math.pi / 3))
INFINITY = "inf"


@dataclass(frozen=True)
class HeunParams:
    """Parameters of the general Heun equation.

    ``epsilon`` is not stored: it always follows from the Fuchsian relation
    1 + alpha + beta = gamma + delta + epsilon.
    """

    a: complex
    q: complex
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    def __post_init__(self):
        for name in ("a", "q", "alpha", "beta", "gamma", "delta"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ParameterError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if abs(self.a) < 1e-14 or abs(self.a - 1) < 1e-14:
            raise ParameterError(f"a = {self.a} collides with the singular points 0 or 1")

    @property
    def epsilon(self) -> complex:
        return 1 + self.alpha + self.beta - self.gamma - self.delta

    @property
    def ab(self) -> complex:
        return self.alpha * self.beta

    @property
    def z0(self) -> complex | None:
        """Extra singular point q/(alpha beta) of the derivative equation, if finite."""
        if self.ab == 0:
            return None
        return self.q / self.ab

    def fuchsian_defect(self) -> float:
        return abs(1 + self.alpha + self.beta - (self.gamma + self.delta + self.epsilon))

    def with_(self, **changes) -> "HeunParams":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("a", "q", "alpha", "beta", "gamma", "delta", "epsilon")}


def make_params(a, q, alpha, beta, gamma, delta) -> HeunParams:
    """Build HeunParams; epsilon is derived from the Fuchsian relation."""
    return HeunParams(a, q, alpha, beta, gamma, delta)


@dataclass(frozen=True)
class SingularPoint:
    location: complex | str
    exponents: tuple[complex, complex]
    label: str


@dataclass(frozen=True)
class SingularityTable:
    points: tuple[SingularPoint, ...]
    merged: bool = False
    note: str = ""


def derivative_singularity_table(p: HeunParams, tol: float = DEFAULT_CLASSIFY_TOL) -> SingularityTable:
    """Singular points and exponents of the equation obeyed by the derivative.

    When alpha*beta = 0 the extra point runs off and only four rows remain;
    when q/(alpha beta) lands on 0, 1 or a the five rows are still listed but
    the table is flagged as merged.
    """
    rows = [
        SingularPoint(0j, (0j, p.gamma), "0"),
        SingularPoint(1 + 0j, (0j, p.delta), "1"),
        SingularPoint(p.a, (0j, p.epsilon), "a"),
    ]
    merged, note = False, ""
    if abs(p.ab) <= tol:
        merged, note = True, "alpha*beta = 0: the point q/(alpha beta) is absent"
    else:
        z0 = p.z0
        rows.append(SingularPoint(z0, (0j, 2 + 0j), "q/(alpha beta)"))
        for loc, name in ((0, "0"), (1, "1"), (p.a, "a")):
            if abs(z0 - loc) <= tol:
                merged, note = True, f"q/(alpha beta) coincides with {name}"
    rows.append(SingularPoint(INFINITY, (-p.alpha, -p.beta), "inf"))
    return SingularityTable(tuple(rows), merged, note)


class ReductionClass(str, enum.Enum):
    Generic = "Generic"
    QZero = "QZero"
    QEqualsAlphaBeta = "QEqualsAlphaBeta"
    QEqualsAAlphaBeta = "QEqualsAAlphaBeta"
    AlphaBetaZero = "AlphaBetaZero"
    EpsZero = "EpsZero"
    DeltaZero = "DeltaZero"
    GammaZero = "GammaZero"
    SymmetricBeta = "SymmetricBeta"
    TwoTermOrigin = "TwoTermOrigin"
    LerchCase = "LerchCase"
    BinomialCase = "BinomialCase"
    MaierCase = "MaierCase"


def binomial_order(p: HeunParams, tol: float = DEFAULT_CLASSIFY_TOL) -> int | None:
    """N >= 1 with epsilon = delta - N, if any."""
    d = p.delta - p.epsilon
    n = round(d.real)
    if n >= 1 and abs(d - n) <= tol:
        return n
    return None


def is_maier(p: HeunParams, tol: float = DEFAULT_CLASSIFY_TOL) -> bool:
    a_ok = abs(p.a - CBRT_MINUS_ONE) <= tol or abs(p.a - CBRT_MINUS_ONE.conjugate()) <= tol
    if not a_ok or abs(p.ab) <= tol:
        return False
    z0_ok = abs(p.q - p.ab * (1 + p.a) / 3) <= tol
    exps_ok = abs(p.gamma - p.delta) <= tol and abs(p.gamma - p.epsilon) <= tol
    return z0_ok and exps_ok


def classify(p: HeunParams, tol: float = DEFAULT_CLASSIFY_TOL) -> frozenset[ReductionClass]:
    """Return every reduction tag that applies (Generic iff none does)."""
    R = ReductionClass
    close = lambda x, y: abs(x - y) <= tol  # noqa: E731
    tags = set()
    if close(p.q, 0):
        tags.add(R.QZero)
    if close(p.q, p.ab):
        tags.add(R.QEqualsAlphaBeta)
    if close(p.q, p.a * p.ab):
        tags.add(R.QEqualsAAlphaBeta)
    if close(p.ab, 0):
        tags.add(R.AlphaBetaZero)
    if close(p.epsilon, 0):
        tags.add(R.EpsZero)
    if close(p.delta, 0):
        tags.add(R.DeltaZero)
    if close(p.gamma, 0):
        tags.add(R.GammaZero)
    a_minus_one = close(p.a, -1)
    if a_minus_one and close(p.delta, p.epsilon):
        tags.add(R.SymmetricBeta)
        if close(p.q, 0):
            tags.add(R.TwoTermOrigin)
    if close(p.delta, 1) and close(p.epsilon, -1):
        tags.add(R.LerchCase)
    if a_minus_one and binomial_order(p, tol) is not None:
        tags.add(R.BinomialCase)
    if is_maier(p, tol):
        tags.add(R.MaierCase)
    if not tags:
        tags.add(R.Generic)
    return frozenset(tags)


class AffineMap(str, enum.Enum):
    ShiftMinusOne = "ShiftMinusOne"  # a = 2,   z1 = z - 1
    TwoZMinusOne = "TwoZMinusOne"  # a = 1/2, z1 = 2z - 1


def _check_a(p: HeunParams, want: complex, what: str, tol: float) -> None:
    if abs(p.a - want) > tol:
        raise ParameterError(f"{what} requires a = {want}, got a = {p.a}")


def affine_transform(p: HeunParams, map: AffineMap, tol: float = 1e-12) -> HeunParams:
    """Move the singularity a to -1 by an affine change of variable.

    ShiftMinusOne (a = 2, z1 = z - 1): the singular points 1, 2, 0 become
    0, 1, -1, so (gamma, delta, epsilon) -> (delta, epsilon, gamma) and
    q -> q - alpha*beta.  TwoZMinusOne (a = 1/2, z1 = 2z - 1): 1/2, 1, 0
    become 0, 1, -1, so (gamma, delta, epsilon) -> (epsilon, delta, gamma)
    and q -> 2q - alpha*beta.  In both cases u1(z1) = u(z).
    """
    map = AffineMap(map)
    if map is AffineMap.ShiftMinusOne:
        _check_a(p, 2, map.value, tol)
        return HeunParams(-1, p.q - p.ab, p.alpha, p.beta, p.delta, p.epsilon)
    _check_a(p, 0.5, map.value, tol)
    return HeunParams(-1, 2 * p.q - p.ab, p.alpha, p.beta, p.epsilon, p.delta)


def inverse_affine_transform(p: HeunParams, map: AffineMap, tol: float = 1e-12) -> HeunParams:
    """Undo :func:`affine_transform`; requires a = -1."""
    map = AffineMap(map)
    _check_a(p, -1, "inverse " + map.value, tol)
    if map is AffineMap.ShiftMinusOne:
        # gamma' = delta, delta' = epsilon, epsilon' = gamma
        return HeunParams(2, p.q + p.ab, p.alpha, p.beta, p.epsilon, p.gamma)
    # gamma' = epsilon, delta' = delta, epsilon' = gamma
    return HeunParams(0.5, (p.q + p.ab) / 2, p.alpha, p.beta, p.epsilon, p.delta)


def map_point(map: AffineMap, z: complex) -> complex:
    """Image z1 of a point z under the affine map."""
    return z - 1 if AffineMap(map) is AffineMap.ShiftMinusOne else 2 * z - 1


def principal_log(z) -> complex:
    """Principal logarithm with arg in (-pi, pi]; a negative zero imaginary part counts as +0."""
    z = complex(z)
    return cmath.log(complex(z.real + 0.0, z.imag + 0.0))


def principal_power(base: complex, exponent: complex) -> complex:
    """base**exponent on the principal branch (0**0 = 1)."""
    base, exponent = complex(base), complex(exponent)
    if exponent == 0:
        return 1.0 + 0.0j
    if base == 0:
        return 0.0j
    return cmath.exp(exponent * principal_log(base))
