"""Reference solutions of the Heun equation by direct numerical integration.

The equation is integrated as a first-order system in (u, u') along
piecewise-linear complex paths, parametrised by a real variable on each
segment.  Integration starts from a Frobenius seed near z = 0 (or from
user-supplied data at a regular point).  A fixed-step Taylor integrator
built on the local recurrence engine serves as an independent check of
the Runge-Kutta path.
"""
from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, StepUnderflowError
from .heun_model import HeunParams, principal_log
from .polyode import LocalRecurrence, derivative_ode, heun_ode

DEFAULT_START = 0.05
DEFAULT_ORDER = 12
DEFAULT_CLEARANCE = 0.1


class SeedExponent(str, enum.Enum):
    Zero = "Zero"
    OneMinusGamma = "OneMinusGamma"


@dataclass(frozen=True)
class LocalSeed:
    """Truncated Frobenius series z^exponent * sum c_k (z - center)^k."""

    center: complex
    exponent: complex
    coefficients: tuple
    order: int

    def __post_init__(self):
        if abs(self.coefficients[0] - 1) > 1e-14:
            raise ValueError("seed must be normalised to coefficients[0] = 1")

    def evaluate(self, z) -> tuple[complex, complex]:
        """(u, u') of the truncated series at z."""
        x = complex(z) - self.center
        c = np.asarray(self.coefficients, dtype=complex)
        k = np.arange(len(c))
        s = np.polynomial.polynomial.polyval(x, c)
        ds = np.polynomial.polynomial.polyval(x, c * (k + self.exponent))
        if self.exponent == 0:
            return complex(s), complex(np.polynomial.polynomial.polyval(x, c[1:] * k[1:]))
        xp = cmath.exp(self.exponent * principal_log(x))
        return complex(xp * s), complex(xp / x * ds)


def frobenius_seed(p: HeunParams, exponent: SeedExponent | str = SeedExponent.Zero,
                   order: int = DEFAULT_ORDER) -> LocalSeed:
    """Frobenius series of the Heun equation at z = 0.

    Raises ResonanceError when the exponents differ by an integer and the
    requested log-free branch does not exist.
    """
    exponent = SeedExponent(exponent)
    mu = 0j if exponent is SeedExponent.Zero else 1 - p.gamma
    rec = LocalRecurrence.build(heun_ode(p), 0)
    coeffs = rec.series(mu, order)
    return LocalSeed(0j, complex(mu), tuple(complex(c) for c in coeffs), order)


def seed_radius(p: HeunParams) -> float:
    return min(1.0, abs(p.a))


def _singular_points(p: HeunParams, include_z0: bool = True) -> list[complex]:
    pts = [0j, 1 + 0j, p.a]
    if include_z0 and p.z0 is not None:
        pts.append(p.z0)
    return pts


@dataclass(frozen=True)
class OraclePath:
    waypoints: tuple
    clearance: float = DEFAULT_CLEARANCE

    def __post_init__(self):
        w = [complex(x) for x in self.waypoints]
        if len(w) < 2:
            raise ValueError("a path needs at least two waypoints")
        for u, v in zip(w, w[1:]):
            if u == v:
                raise ValueError("consecutive waypoints must differ")
        object.__setattr__(self, "waypoints", tuple(w))

    @property
    def start(self) -> complex:
        return self.waypoints[0]

    @property
    def end(self) -> complex:
        return self.waypoints[-1]


def _segment_distance(s: complex, a: complex, b: complex) -> tuple[float, float]:
    """Distance from s to the segment [a, b] and the parameter of the closest point."""
    d = b - a
    t = ((s - a) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(a + t * d - s), t


def _route(a: complex, b: complex, obstacles, clearance: float, depth: int = 0) -> list[complex]:
    if depth > 12:
        raise DomainError("could not route the path around the singular points")
    for s in obstacles:
        dist, t = _segment_distance(s, a, b)
        if dist < clearance and 0.0 < t < 1.0:
            d = (b - a) / abs(b - a)
            normal = 1j * d
            # pass on the side the segment already lies on
            side = 1.0 if ((a + t * (b - a) - s) * normal.conjugate()).real >= 0 else -1.0
            r = 1.5 * clearance
            p1 = s - r * d + side * r * normal
            p2 = s + r * d + side * r * normal
            return (_route(a, p1, obstacles, clearance, depth + 1)[:-1]
                    + _route(p1, p2, obstacles, clearance, depth + 1)[:-1]
                    + _route(p2, b, obstacles, clearance, depth + 1))
    return [a, b]


def make_path(p: HeunParams, end, start=None, clearance: float = DEFAULT_CLEARANCE,
              via=()) -> OraclePath:
    """Straight path from ``start`` to ``end`` with detours around 0, 1, a and q/(ab).

    ``start`` defaults to the seed point 0.05 * end/|end|.  The origin is not
    treated as an obstacle for the first leg, which begins inside the seed disc.
    """
    end = complex(end)
    if start is None:
        if end == 0:
            raise DomainError("the oracle cannot be evaluated at the singular point 0")
        start = default_start(p, end)
    start = complex(start)
    obstacles = _singular_points(p)
    for s in obstacles:
        if abs(end - s) < 1e-12:
            raise DomainError(f"end point {end} is a singular point")
    nodes = [start, *map(complex, via), end]
    out = [start]
    for i, (u, v) in enumerate(zip(nodes, nodes[1:])):
        obs = obstacles
        if i == 0 and abs(u) < clearance:
            obs = [s for s in obstacles if s != 0]
        obs = [s for s in obs if abs(s - u) >= clearance and abs(s - v) >= clearance]
        out.extend(_route(u, v, obs, clearance)[1:])
    return OraclePath(tuple(out), clearance)


def default_start(p: HeunParams, direction) -> complex:
    direction = complex(direction)
    r = min(DEFAULT_START, 0.1 * seed_radius(p))
    return r * direction / abs(direction)


def _rhs_factory(p: HeunParams, a: complex, b: complex):
    d = b - a
    gam, dlt, eps, ab, q, sa = p.gamma, p.delta, p.epsilon, p.ab, p.q, p.a

    def rhs(s, y):
        z = a + s * d
        u, du = y[0], y[1]
        ddu = -((gam / z + dlt / (z - 1) + eps / (z - sa)) * du
                + (ab * z - q) / (z * (z - 1) * (z - sa)) * u)
        return np.array([d * du, d * ddu])

    return rhs


@dataclass
class OracleResult:
    """Values (z, u, u') at every waypoint of the path, plus step statistics."""

    points: list = field(default_factory=list)
    nfev: int = 0

    @property
    def final(self) -> tuple[complex, complex, complex]:
        return self.points[-1]


def integrate_from(p: HeunParams, u0, du0, path: OraclePath, rtol: float = 1e-12,
                   atol: float | None = None) -> OracleResult:
    """Continue initial data (u0, du0) given at path.start along the path (RK 5(4))."""
    y = np.array([complex(u0), complex(du0)])
    res = OracleResult([(path.start, y[0], y[1])])
    for a, b in zip(path.waypoints, path.waypoints[1:]):
        scale = max(float(np.max(np.abs(y))), 1e-300)
        sol = solve_ivp(_rhs_factory(p, a, b), (0.0, 1.0), y, method="RK45",
                        rtol=rtol, atol=(atol if atol is not None else rtol * 1e-3 * scale))
        if sol.status != 0:
            raise StepUnderflowError(f"integration failed on segment {a} -> {b}: {sol.message}")
        y = sol.y[:, -1]
        res.nfev += sol.nfev
        res.points.append((b, complex(y[0]), complex(y[1])))
    return res


def integrate(p: HeunParams, seed: LocalSeed, path: OraclePath, rtol: float = 1e-12) -> OracleResult:
    """Integrate the Heun equation from a Frobenius seed along ``path``."""
    start = path.start
    if abs(start - seed.center) > 0.1 * seed_radius(p) + 1e-15:
        raise DomainError(
            f"path start {start} lies outside the seed disc |z| <= {0.1 * seed_radius(p):.3g}")
    if start == seed.center:
        raise DomainError("path must not start on the singular point itself")
    u0, du0 = seed.evaluate(start)
    return integrate_from(p, u0, du0, path, rtol)


def solve_at(p: HeunParams, z, exponent: SeedExponent | str = SeedExponent.Zero,
             rtol: float = 1e-12, clearance: float = DEFAULT_CLEARANCE, via=()) -> tuple[complex, complex]:
    """(u, u') at z of the Frobenius solution with the given exponent at 0."""
    seed = frobenius_seed(p, exponent)
    path = make_path(p, z, clearance=clearance, via=via)
    _, u, du = integrate(p, seed, path, rtol).final
    return u, du


def taylor_integrate(p: HeunParams, u0, du0, path: OraclePath, ratio: float = 0.3,
                     order: int = 60) -> tuple[complex, complex]:
    """Fixed-ratio Taylor stepping; each step covers ``ratio`` of the local radius."""
    ode = heun_ode(p)
    sing = _singular_points(p, include_z0=False)
    u, du = complex(u0), complex(du0)
    for a, b in zip(path.waypoints, path.waypoints[1:]):
        z = a
        while abs(b - z) > 1e-15:
            radius = min(abs(z - s) for s in sing)
            h = b - z
            if abs(h) > ratio * radius:
                h = h / abs(h) * ratio * radius
            c = LocalRecurrence.build(ode, z).taylor(u, du, order)
            k = np.arange(len(c))
            u = complex(np.polynomial.polynomial.polyval(h, c))
            du = complex(np.polynomial.polynomial.polyval(h, c[1:] * k[1:]))
            z = z + h
            if abs(b - z) < 1e-14 * max(1.0, abs(b)):
                z = b
    return u, du


def residual(p: HeunParams, z, u, du, ddu) -> complex:
    """Heun operator multiplied by z(z-1)(z-a); finite at every z."""
    return complex(heun_ode(p).evaluate(complex(z), u, du, ddu))


def second_derivative(p: HeunParams, z, u, du) -> complex:
    """u'' implied by the Heun equation at a regular point."""
    z = complex(z)
    return -((p.gamma / z + p.delta / (z - 1) + p.epsilon / (z - p.a)) * du
             + (p.ab * z - p.q) / (z * (z - 1) * (z - p.a)) * u)


def derivative_weight(p: HeunParams, z) -> complex:
    """z^gamma (z-1)^delta (z-a)^epsilon on principal branches."""
    z = complex(z)
    return (cmath.exp(p.gamma * principal_log(z)) * cmath.exp(p.delta * principal_log(z - 1))
            * cmath.exp(p.epsilon * principal_log(z - p.a)))


def derivative_residual(p: HeunParams, z, v, dv, ddv) -> complex:
    """Derivative equation multiplied by z(z-1)(z-a)(ab z - q)."""
    return complex(derivative_ode(p).evaluate(complex(z), v, dv, ddv))


def derivative_check(p: HeunParams, z, u0, du0, h: float = 0.005, rtol: float = 1e-13) -> float:
    """Relative cleared residual of v = W u' built from oracle data at z.

    (u0, du0) are the solution values at z.  Neighbouring values of u' come
    from short oracle runs; v', v'' come from central differences at h and
    h/2 combined by Richardson extrapolation.
    """
    z = complex(z)

    def v_at(x):
        if x == z:
            return derivative_weight(p, z) * du0
        res = integrate_from(p, u0, du0, OraclePath((z, x)), rtol=rtol)
        return derivative_weight(p, x) * res.final[2]

    def diffs(step):
        vm, v0, vp = v_at(z - step), v_at(z), v_at(z + step)
        return v0, (vp - vm) / (2 * step), (vp - 2 * v0 + vm) / step**2

    v0, d1, d2 = diffs(h)
    _, e1, e2 = diffs(h / 2)
    dv = (4 * e1 - d1) / 3
    ddv = (4 * e2 - d2) / 3
    r = derivative_residual(p, z, v0, dv, ddv)
    ode = derivative_ode(p)
    P = np.polynomial.polynomial.polyval
    scale = (abs(P(z, ode.p2) * ddv) + abs(P(z, ode.p1) * dv) + abs(P(z, ode.p0) * v0))
    return abs(r) / scale
