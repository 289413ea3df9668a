"""Local power-series machinery for linear second-order ODEs with polynomial coefficients.

An equation  p2(z) y'' + p1(z) y' + p0(z) y = 0  is re-expanded about a
centre c (or about infinity through x = 1/z).  Writing
y = sum_n a_n x^(n + mu), the coefficient of each power gives

    sum_j T_{k0+j}(n - j + mu) a_{n-j} = 0,
    T_k(s) = A_k s (s - 1) + B_{k-1} s + C_{k-2},

with A, B, C the Taylor coefficients of p2, p1, p0 in x and k0 the first
non-vanishing T.  This module is used both as the ODE oracle's Taylor
stepper and as an independent check of the closed-form recurrences.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import ExponentError, ResonanceError
from .heun_model import INFINITY, HeunParams


@dataclass(frozen=True)
class PolyODE:
    """Coefficient polynomials (ascending powers of z) of p2 y'' + p1 y' + p0 y = 0."""

    p2: np.ndarray
    p1: np.ndarray
    p0: np.ndarray

    def evaluate(self, z, y, dy, ddy) -> complex:
        return P.polyval(z, self.p2) * ddy + P.polyval(z, self.p1) * dy + P.polyval(z, self.p0) * y


def _poly(*roots_or_coeffs) -> np.ndarray:
    return np.asarray(roots_or_coeffs, dtype=complex)


def heun_ode(p: HeunParams) -> PolyODE:
    """Heun equation multiplied through by z(z-1)(z-a)."""
    cubic = P.polyfromroots([0, 1, p.a])
    p1 = (
        p.gamma * P.polyfromroots([1, p.a])
        + P.polymul(_poly(0, p.delta), _poly(-p.a, 1))
        + P.polymul(_poly(0, p.epsilon), _poly(-1, 1))
    )
    return PolyODE(cubic.astype(complex), np.asarray(p1, complex), _poly(-p.q, p.ab))


def derivative_ode(p: HeunParams) -> PolyODE:
    """Equation for v = z^g (z-1)^d (z-a)^e u', multiplied by z(z-1)(z-a)(ab z - q)."""
    lin = _poly(-p.q, p.ab)
    cubic = P.polyfromroots([0, 1, p.a]).astype(complex)
    inner = (
        (1 - p.gamma) * P.polyfromroots([1, p.a])
        + (1 - p.delta) * P.polyfromroots([0, p.a])
        + (1 - p.epsilon) * P.polyfromroots([0, 1])
    )
    p1 = P.polysub(P.polymul(lin, inner), p.ab * cubic)
    return PolyODE(P.polymul(cubic, lin), np.asarray(p1, complex), P.polymul(lin, lin))


def _shift(c: np.ndarray, center: complex) -> np.ndarray:
    """Coefficients of c(center + x) in powers of x."""
    out = np.zeros(len(c), dtype=complex)
    shift = np.array([1.0 + 0j])
    base = _poly(center, 1)
    for coef in c:
        out[: len(shift)] += coef * shift
        shift = P.polymul(shift, base)
    return out


def _degree(c: np.ndarray) -> int:
    nz = np.nonzero(np.asarray(c))[0]
    return int(nz[-1]) if len(nz) else 0


def _reversed(c: np.ndarray, power: int) -> np.ndarray:
    """Ascending coefficients of x^power * c(1/x)."""
    out = np.zeros(power + 1, dtype=complex)
    for k in range(_degree(c) + 1):
        out[power - k] += c[k]
    return out


def _at_infinity(ode: PolyODE) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coefficient polynomials of the equation for w(x) = y(1/x).

    y' = -x^2 w' and y'' = x^4 w'' + 2 x^3 w'; the result is multiplied by
    the smallest power of x that clears all denominators.
    """
    d2, d1, d0 = _degree(ode.p2), _degree(ode.p1), _degree(ode.p0)
    D = max(d2 - 3, d1 - 2, d0, 0)
    q2 = _reversed(ode.p2, D + 4)
    q1 = P.polysub(2 * _reversed(ode.p2, D + 3), _reversed(ode.p1, D + 2))
    q0 = _reversed(ode.p0, D)
    return q2, q1, q0


@dataclass
class LocalRecurrence:
    """Frobenius recurrence of a polynomial ODE about one point."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    k0: int
    width: int

    @classmethod
    def build(cls, ode: PolyODE, center, tol: float = 1e-13) -> "LocalRecurrence":
        if isinstance(center, str) and center == INFINITY:
            A, B, C = _at_infinity(ode)
        else:
            A = _shift(ode.p2, complex(center))
            B = _shift(ode.p1, complex(center))
            C = _shift(ode.p0, complex(center))
        scale = max(np.max(np.abs(A)), np.max(np.abs(B)), np.max(np.abs(C)), 1e-300)
        A = np.where(np.abs(A) <= tol * scale, 0, A)
        B = np.where(np.abs(B) <= tol * scale, 0, B)
        C = np.where(np.abs(C) <= tol * scale, 0, C)
        kmax = max(len(A), len(B) + 1, len(C) + 2)
        rec = cls(A, B, C, 0, 0)
        nonzero = [k for k in range(kmax) if np.any(rec._triple(k) != 0)]
        rec.k0 = nonzero[0]
        rec.width = nonzero[-1] - nonzero[0] + 1
        return rec

    def _triple(self, k: int) -> np.ndarray:
        get = lambda arr, i: arr[i] if 0 <= i < len(arr) else 0.0  # noqa: E731
        return np.array([get(self.A, k), get(self.B, k - 1), get(self.C, k - 2)], dtype=complex)

    def T(self, j: int, s) -> complex:
        """Coefficient T_{k0+j}(s)."""
        a, b, c = self._triple(self.k0 + j)
        return a * s * (s - 1) + b * s + c

    def terms(self, n: int, mu: complex) -> tuple:
        """(T_{k0}(n+mu), T_{k0+1}(n+mu), ...): same layout as (S_n, R_n, Q_n, P_n)."""
        return tuple(self.T(j, n + mu) for j in range(self.width))

    def indicial_roots(self) -> tuple[complex, complex]:
        a, b, c = self._triple(self.k0)
        # a s^2 + (b - a) s + c
        if a == 0:
            return (-c / b,) if b != 0 else ()
        r = np.roots([a, b - a, c])
        return tuple(complex(x) for x in r)

    def series(self, mu: complex, n_max: int, tol: float = 1e-9) -> np.ndarray:
        """Coefficients a_0..a_{n_max} of the Frobenius solution with exponent ``mu``."""
        if abs(self.T(0, mu)) > 1e-8 * max(1.0, abs(mu) ** 2):
            raise ExponentError(f"mu = {mu} is not an indicial root")
        return forward(lambda n: self.terms(n, mu), n_max, [1.0], free_tol=tol)

    def taylor(self, y0: complex, dy0: complex, n_max: int) -> np.ndarray:
        """Taylor coefficients at an ordinary point from (y, y') there."""
        if self.k0 != 0:
            raise ValueError("taylor() needs an ordinary point")
        return forward(lambda n: self.terms(n, 0.0), n_max, [y0, dy0])


def forward(
    terms: Callable[[int], Sequence[complex]],
    n_max: int,
    initial: Sequence[complex],
    free_tol: float = 1e-9,
    stop_after_zeros: int | None = None,
    zero_tol: float = 1e-13,
) -> np.ndarray:
    """Solve  sum_j c_j(n - j) a_{n-j} = 0  for a_n, starting after ``initial``.

    ``terms(k)`` returns (c_0(k), c_1(k), ...).  When the pivot c_0(n)
    vanishes the right-hand side must vanish too (a_n is then set to 0);
    otherwise :class:`ResonanceError` is raised.  With ``stop_after_zeros``
    the recursion stops after that many consecutive negligible coefficients,
    provided the first of them is an abrupt drop (below 1e-6 times its
    predecessor); a smoothly decaying sequence is never cut.
    """
    a = np.zeros(n_max + 1, dtype=complex)
    m0 = min(len(initial), n_max + 1)
    a[:m0] = initial[:m0]
    cache: dict[int, Sequence[complex]] = {}

    def c(j: int, k: int) -> complex:
        if k not in cache:
            cache[k] = terms(k)
        row = cache[k]
        return row[j] if j < len(row) else 0.0

    width = len(terms(0))
    biggest = float(np.max(np.abs(a[:m0]))) if m0 else 0.0
    run = 0
    abrupt = False
    for n in range(m0, n_max + 1):
        parts = [c(j, n - j) * a[n - j] for j in range(1, width) if n - j >= 0]
        rhs = -sum(parts) if parts else 0.0
        pivot = c(0, n)
        size = max((abs(x) for x in parts), default=0.0)
        if abs(pivot) <= 1e-14 * max(1.0, abs(n) ** 2):
            if abs(rhs) <= free_tol * max(size, 1e-300) or size == 0.0:
                a[n] = 0.0
            else:
                raise ResonanceError(f"zero pivot at n = {n} with non-zero right-hand side")
        else:
            a[n] = rhs / pivot
        biggest = max(biggest, abs(a[n]))
        if stop_after_zeros:
            if abs(a[n]) <= zero_tol * biggest:
                if run == 0:
                    abrupt = n > 0 and abs(a[n]) <= 1e-6 * abs(a[n - 1])
                run += 1
            else:
                run = 0
            if run >= stop_after_zeros and abrupt:
                a[n - run + 1 : n + 1] = 0.0
                return a[: n + 1]
        cache.pop(n - width, None)
    return a
