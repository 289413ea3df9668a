"""Coefficient recurrences for Frobenius expansions of the derivative equation.

About z = 0 and z = q/(alpha beta) the coefficients obey the four-term
relation

    S_n a_n + R_{n-1} a_{n-1} + Q_{n-2} a_{n-2} + P_{n-3} a_{n-3} = 0

with explicit polynomial coefficients.  About 1, a and infinity the same
layout is produced by the generic engine in :mod:`polyode`.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import ExponentError, ParameterError, RegimeError
from .heun_model import INFINITY, HeunParams, ReductionClass, classify
from .polyode import LocalRecurrence, derivative_ode, forward

ZERO_TOL = 1e-13


class RecurrenceKind(str, enum.Enum):
    Origin = "Origin"
    AtZ0 = "AtZ0"
    One = "One"
    A = "A"
    Infinity = "Infinity"


def _close(x, y, tol=1e-10) -> bool:
    return abs(complex(x) - complex(y)) <= tol


def _is_integer(x, tol=1e-12) -> bool:
    x = complex(x)
    return abs(x.imag) <= tol and abs(x.real - round(x.real)) <= tol


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Evaluator n -> (S_n, R_n, Q_n, P_n) for one expansion centre and exponent."""

    kind: RecurrenceKind
    params: HeunParams
    mu: complex
    _engine: LocalRecurrence | None = field(default=None, repr=False, compare=False)

    def __call__(self, n: int) -> tuple[complex, complex, complex, complex]:
        p, s = self.params, n + self.mu
        a, q, ab = p.a, p.q, p.ab
        g, d, e = p.gamma, p.delta, p.epsilon
        if self.kind is RecurrenceKind.Origin:
            S = -a * q * s * (s - g)
            R = q * q + s * s * (q + a * q + a * ab) - s * (a * ab * (1 + g) + q * (g + e - 1 + a * (g + d - 1)))
            Q = -s * s * (q + (1 + a) * ab) + s * (q * (g + d + e - 2) + ab * (g + a * g + a * d + e)) - 2 * q * ab
            Pn = ab * (s - p.alpha) * (s - p.beta)
            return S, R, Q, Pn
        if self.kind is RecurrenceKind.AtZ0:
            z0 = p.z0
            m = s - 1
            S = z0 * (z0 - 1) * (z0 - a) * s * (s - 2)
            R = s * (z0**2 * (3 * m - (g + d + e)) + z0 * (g + e - 2 * m + a * (g + d - 2 * m)) + a * (m - g))
            Q = s * (z0 * (3 * s - 2 * (g + d + e)) + (g - s) * (1 + a) + e + a * d)
            Pn = (s - p.alpha) * (s - p.beta)
            return S, R, Q, Pn
        t = self._engine.terms(n, self.mu)
        return tuple(t) + (0j,) * (4 - len(t))

    @property
    def center(self):
        return {
            RecurrenceKind.Origin: 0j,
            RecurrenceKind.AtZ0: self.params.z0,
            RecurrenceKind.One: 1 + 0j,
            RecurrenceKind.A: self.params.a,
            RecurrenceKind.Infinity: INFINITY,
        }[self.kind]


@dataclass(frozen=True)
class CoefficientSequence:
    values: np.ndarray
    mu: complex
    kind: RecurrenceKind
    terminated: bool = False
    scale: float = 1.0

    def unscaled(self) -> np.ndarray:
        """a_n (``values`` holds a_n * scale**n)."""
        if self.scale == 1.0:
            return self.values
        return self.values / self.scale ** np.arange(len(self.values))

    def __len__(self) -> int:
        return len(self.values)

    def residuals(self, rc: RecurrenceCoeffs) -> float:
        """Largest relative residual of the defining relation over all computed n >= 1."""
        a = self.unscaled()
        worst = 0.0
        for n in range(1, len(a)):
            S, _, _, _ = rc(n)
            parts = [S * a[n]]
            for j in (1, 2, 3):
                if n - j >= 0:
                    parts.append(rc(n - j)[j] * a[n - j])
            size = max(abs(x) for x in parts)
            if size > 0:
                worst = max(worst, abs(sum(parts)) / size)
        return worst


def origin_coeffs(p: HeunParams, mu) -> RecurrenceCoeffs:
    """Coefficients of the expansion about z = 0 (exponents 0 and gamma; 0 and 1+gamma when q = 0)."""
    mu = complex(mu)
    if _is_integer(p.gamma):
        raise ParameterError(f"gamma = {p.gamma} is an integer; the expansion about 0 is logarithmic")
    allowed = (0, p.gamma) if not _close(p.q, 0) else (0, 1 + p.gamma)
    if not any(_close(mu, m) for m in allowed):
        raise ExponentError(f"mu = {mu} is not one of {allowed}")
    return RecurrenceCoeffs(RecurrenceKind.Origin, p, mu)


def z0_coeffs(p: HeunParams, mu) -> RecurrenceCoeffs:
    """Coefficients of the expansion about z0 = q/(alpha beta), exponents 0 and 2."""
    mu = complex(mu)
    if _close(p.ab, 0):
        raise ParameterError("alpha*beta = 0: the point q/(alpha beta) does not exist")
    z0 = p.z0
    if abs(z0 * (z0 - 1) * (z0 - p.a)) < 1e-12:
        raise RegimeError(f"q/(alpha beta) = {z0} coincides with a singular point of the Heun equation")
    if not (_close(mu, 0) or _close(mu, 2)):
        raise ExponentError(f"mu = {mu} is not one of (0, 2)")
    return RecurrenceCoeffs(RecurrenceKind.AtZ0, p, mu)


def generic_coeffs(p: HeunParams, kind: RecurrenceKind | str, mu) -> RecurrenceCoeffs:
    """Coefficients about 1, a or infinity from the generic local engine."""
    kind = RecurrenceKind(kind)
    center = {RecurrenceKind.One: 1, RecurrenceKind.A: p.a, RecurrenceKind.Infinity: INFINITY,
              RecurrenceKind.Origin: 0, RecurrenceKind.AtZ0: p.z0}[kind]
    engine = LocalRecurrence.build(derivative_ode(p), center)
    roots = engine.indicial_roots()
    if not any(_close(mu, r, 1e-8) for r in roots):
        raise ExponentError(f"mu = {mu} is not an indicial root {roots} at {kind.value}")
    return RecurrenceCoeffs(kind, p, complex(mu), engine)


def _pivot_offset(rc: RecurrenceCoeffs) -> int:
    """Index of the first coefficient function that is not identically zero."""
    # each entry is a quadratic in n, so three zero samples make it vanish identically
    rows = [rc(n) for n in (3, 4, 5)]
    scale = max(max(abs(x) for x in r) for r in rows) or 1.0
    for j in range(4):
        if any(abs(r[j]) > 1e-13 * scale for r in rows):
            return j
    raise RegimeError("all recurrence coefficients vanish identically")


def run(rc: RecurrenceCoeffs, n_max: int, stop_on_termination: bool = True,
        scale: float = 1.0) -> CoefficientSequence:
    """Forward recursion a_0 = 1, a_1, ..., a_{n_max}.

    When S vanishes identically (q = 0 about the origin) R takes over as the
    pivot.  The series is marked terminated after three consecutive
    coefficients below 1e-13 times the largest one.  With ``scale`` = r the
    stored values are a_n r^n, which keeps them O(1) when r is the
    convergence radius.
    """
    j0 = _pivot_offset(rc)
    lead = rc(0)[j0]
    if abs(lead) > 1e-10 * max(1.0, max(abs(x) for x in rc(1))):
        raise ExponentError(f"mu = {rc.mu} does not terminate the series on the left")

    def row(m):
        r = _shifted(rc, m, j0)
        return tuple(c * scale**j for j, c in enumerate(r)) if scale != 1.0 else r

    values = forward(row, n_max, [1.0 + 0j],
                     stop_after_zeros=3 if stop_on_termination else None, zero_tol=ZERO_TOL)
    terminated = len(values) < n_max + 1
    if terminated:
        values = np.trim_zeros(values, "b") if np.any(values) else values
        values = values if len(values) else np.array([1.0 + 0j])
    return CoefficientSequence(values, rc.mu, rc.kind, terminated, scale)


def _shifted(rc: RecurrenceCoeffs, m: int, j0: int) -> tuple:
    """Row (c_{j0}(m), c_{j0+1}(m), ...) of the relation re-indexed past j0 dead terms."""
    # c_j(k) multiplies a_k in the equation for a_{k+j}; removing j0 leading
    # identically-zero functions leaves the pairing unchanged
    return tuple(rc(m)[j] for j in range(j0, 4))


def closed_form_origin(p: HeunParams, mu, n_max: int) -> CoefficientSequence:
    """Explicit coefficients in the two-term regime a = -1, q = 0, delta = epsilon."""
    mu = complex(mu)
    if ReductionClass.TwoTermOrigin not in classify(p):
        raise RegimeError("closed_form_origin requires a = -1, q = 0, delta = epsilon")
    if not (_close(mu, 0) or _close(mu, 1 + p.gamma)):
        raise ExponentError(f"mu = {mu} is not one of (0, 1 + gamma)")
    K = n_max // 2 + 1
    k = np.arange(1, K, dtype=float)
    num = ((mu - p.alpha) / 2 + k - 1) * ((mu - p.beta) / 2 + k - 1)
    den = (1 + mu / 2 + k - 1) * ((1 - p.gamma + mu) / 2 + k - 1)
    c = np.concatenate(([1.0 + 0j], np.cumprod(num / den)))
    a = np.zeros(n_max + 1, dtype=complex)
    a[0::2] = c[: len(a[0::2])]
    return CoefficientSequence(a, mu, RecurrenceKind.Origin, _terminated_tail(a))


def closed_form_z0(p: HeunParams, mu, n_max: int) -> CoefficientSequence:
    """Explicit coefficients about q/(alpha beta) when both R_n and Q_n vanish.

    The selector (1 + a^{2n} + a^{-2n})/3 is 1 for n divisible by 3 and 0
    otherwise, since a^2 is a primitive cube root of unity.  The factor
    (3a)^{3k/2} is taken on the principal branch, exp(3k/2 * Log(3a)).
    """
    from .heun_model import is_maier

    mu = complex(mu)
    if not is_maier(p):
        raise RegimeError("closed_form_z0 requires the cube-root-of-minus-one parameter set")
    if not (_close(mu, 0) or _close(mu, 2)):
        raise ExponentError(f"mu = {mu} is not one of (0, 2)")
    K = n_max // 3 + 1
    k = np.arange(1, K, dtype=float)
    branch = np.exp(1.5 * np.log(3 * p.a))
    num = ((mu - p.alpha) / 3 + k - 1) * ((mu - p.beta) / 3 + k - 1)
    den = (1 + mu / 3 + k - 1) * ((1 + mu) / 3 + k - 1)
    c = np.concatenate(([1.0 + 0j], np.cumprod(branch * num / den)))
    a = np.zeros(n_max + 1, dtype=complex)
    a[0::3] = c[: len(a[0::3])]
    return CoefficientSequence(a, mu, RecurrenceKind.AtZ0, _terminated_tail(a))


def _terminated_tail(a: np.ndarray) -> bool:
    big = np.max(np.abs(a))
    return len(a) > 3 and bool(np.all(np.abs(a[-3:]) <= ZERO_TOL * big))


@dataclass(frozen=True)
class RadiusInfo:
    radius: float
    roots: tuple


def radius_origin(p: HeunParams, tol: float = 1e-10) -> RadiusInfo:
    """Convergence radius about 0 and the roots of the characteristic equation.

    The ratio a_n/a_{n-1} tends to a root of the characteristic cubic with
    roots 1, 1/a, alpha*beta/q; the radius is the reciprocal of the largest.
    With q = 0 or alpha*beta = 0 only the roots 1 and 1/a remain.
    """
    roots = [1 + 0j, 1 / p.a]
    if abs(p.q) > tol and abs(p.ab) > tol:
        roots.append(p.ab / p.q)
    big = max(abs(r) for r in roots)
    return RadiusInfo(1.0 / big, tuple(roots))


def radius_z0(p: HeunParams) -> float:
    """Distance from q/(alpha beta) to the nearest of 0, 1, a."""
    if _close(p.ab, 0):
        raise ParameterError("alpha*beta = 0: the point q/(alpha beta) does not exist")
    z0 = p.z0
    r = min(abs(z0), abs(z0 - 1), abs(z0 - p.a))
    if r < 1e-12:
        warnings.warn(f"q/(alpha beta) = {z0} coincides with a singular point; radius is 0", RuntimeWarning)
    return float(r)


class Pin(str, enum.Enum):
    AlphaPins = "AlphaPins"
    BetaPins = "BetaPins"


def _check_pin(p: HeunParams, N: int, mu: complex, which: Pin, tol: float = 1e-10) -> None:
    target = p.alpha if which is Pin.AlphaPins else p.beta
    if abs(target - (N + mu)) > tol:
        raise ParameterError(f"{which.value} requires {'alpha' if which is Pin.AlphaPins else 'beta'} = N + mu = {N + mu}")
    if _close(p.ab, 0):
        raise ParameterError("termination needs alpha*beta != 0")


def _q_polynomials(p: HeunParams, mu: complex, n_max: int) -> list[np.ndarray]:
    """Polynomials A_n(q) with a_n = A_n(q) / q^n about the origin.

    With S_n = q sigma_n the recurrence becomes
    A_n = -(R_{n-1} A_{n-1} + q Q_{n-2} A_{n-2} + q^2 P_{n-3} A_{n-3}) / sigma_n,
    where R and Q are linear/quadratic in q.
    """
    a, ab, g, d, e = p.a, p.ab, p.gamma, p.delta, p.epsilon

    def R(n):
        s = n + mu
        return np.array([s * s * a * ab - s * a * ab * (1 + g),
                         s * s * (1 + a) - s * (g + e - 1 + a * (g + d - 1)), 1.0], dtype=complex)

    def Q(n):
        s = n + mu
        return np.array([-s * s * (1 + a) * ab + s * ab * (g + a * g + a * d + e),
                         -s * s + s * (g + d + e - 2) - 2 * ab], dtype=complex)

    def Pc(n):
        s = n + mu
        return ab * (s - p.alpha) * (s - p.beta)

    A = [np.array([1.0 + 0j])]
    for n in range(1, n_max + 1):
        s = n + mu
        sigma = -a * s * (s - g)
        acc = P.polymul(R(n - 1), A[n - 1])
        if n >= 2:
            acc = P.polyadd(acc, P.polymul(np.array([0, 1.0]), P.polymul(Q(n - 2), A[n - 2])))
        if n >= 3:
            acc = P.polyadd(acc, P.polymul(np.array([0, 0, Pc(n - 3)]), A[n - 3]))
        A.append(-acc / sigma)
    return A


def _poly_scale(c: np.ndarray, x: complex) -> float:
    return float(np.sum(np.abs(c) * np.abs(x) ** np.arange(len(c)))) or 1.0


def solve_termination(p_partial: HeunParams, N: int, mu=0, which: Pin | str = Pin.AlphaPins,
                      tol: float = 1e-10) -> list[complex]:
    """Accessory parameters q for which the origin series stops at a_N.

    a_{N+1}(q) is root-found as a polynomial; roots where a_{N+2}(q) also
    vanishes are kept and checked by running the numeric recurrence.  The
    q stored in ``p_partial`` is ignored.
    """
    which = Pin(which)
    mu = complex(mu)
    _check_pin(p_partial, N, mu, which)
    A = _q_polynomials(p_partial, mu, N + 2)
    f, g = np.trim_zeros(A[N + 1], "b"), A[N + 2]
    if len(f) < 2:
        return []
    out = []
    for q in P.polyroots(f):
        q = complex(_newton_poly(f, q))
        if abs(q) < 1e-12:
            continue
        if abs(P.polyval(q, g)) > 1e-8 * _poly_scale(g, q):
            continue
        if _verify_termination(p_partial.with_(q=q), N, mu, tol):
            if not any(abs(q - r) < 1e-9 * max(1, abs(q)) for r in out):
                out.append(q)
    return out


def _newton_poly(c: np.ndarray, x: complex, steps: int = 5) -> complex:
    dc = P.polyder(c)
    for _ in range(steps):
        d = P.polyval(x, dc)
        if d == 0:
            break
        x = x - P.polyval(x, c) / d
    return x


def _verify_termination(p: HeunParams, N: int, mu: complex, tol: float) -> bool:
    seq = run(RecurrenceCoeffs(RecurrenceKind.Origin, p, mu), N + 6, stop_on_termination=False)
    a = seq.values
    big = np.max(np.abs(a[: N + 1]))
    return bool(np.all(np.abs(a[N + 1: N + 4]) <= tol * big) and abs(a[N]) > tol * big)
