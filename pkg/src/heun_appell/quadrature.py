"""Adaptive Gauss-Legendre quadrature along straight segments of the complex plane.

Panels use a fixed 64-point rule; a panel is accepted once its estimate
agrees with the sum over its two halves.  Algebraic endpoint singularities
are tamed by a polynomial grading substitution ``t = a + (b - a) s**k``.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import NonConvergenceError

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(64)
_MAX_PANELS = 20000


def _panel(f, a: float, b: float) -> complex:
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return complex(half * np.dot(_WEIGHTS, f(mid + half * _NODES)))


def integrate_unit(g: Callable[[np.ndarray], np.ndarray], tol: float = 1e-12) -> complex:
    """Integrate a vectorised function ``g`` over the real interval [0, 1].

    Bisection is adaptive; ``tol`` is relative to the running magnitude of the
    integral (with an absolute floor of ``tol`` itself).
    """
    whole = _panel(g, 0.0, 1.0)
    stack = [(0.0, 1.0, whole)]
    total = 0.0 + 0.0j
    scale = max(abs(whole), 1e-300)
    panels = 0
    while stack:
        lo, hi, est = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _panel(g, lo, mid)
        right = _panel(g, mid, hi)
        panels += 1
        refined = left + right
        scale = max(scale, abs(refined))
        if abs(refined - est) <= 0.1 * tol * scale or hi - lo < 1e-13:
            total += refined
            continue
        if panels > _MAX_PANELS:
            raise NonConvergenceError("adaptive quadrature exceeded the panel cap")
        stack.append((lo, mid, left))
        stack.append((mid, hi, right))
    return total


def integrate_segment(
    f: Callable[[np.ndarray], np.ndarray],
    a: complex,
    b: complex,
    tol: float = 1e-12,
    grade_start: int = 1,
    grade_end: int = 1,
) -> complex:
    """Integrate ``f`` along the straight segment from ``a`` to ``b``.

    Parameters
    ----------
    f : callable
        Vectorised integrand accepting a complex ndarray.
    a, b : complex
        Segment endpoints.
    tol : float
        Relative accuracy target.
    grade_start, grade_end : int
        Grading exponents applied on the first / second half of the segment.
        Use ``k`` with ``k * (p + 1) >= 3`` for an endpoint factor ``|t - a|**p``.
    """
    a = complex(a)
    b = complex(b)
    d = b - a
    if grade_start == 1 and grade_end == 1:
        return d * integrate_unit(lambda s: f(a + d * s), tol)
    ks, ke = int(grade_start), int(grade_end)

    def left(s):
        # t in [a, a + d/2]
        return f(a + 0.5 * d * s**ks) * (0.5 * d * ks * s ** (ks - 1))

    def right(s):
        # t in [a + d/2, b], graded towards b
        return f(b - 0.5 * d * s**ke) * (0.5 * d * ke * s ** (ke - 1))

    return integrate_unit(left, tol) + integrate_unit(right, tol)


def grading_for(exponent: complex) -> int:
    """Smallest grading power that makes ``s**(k*(p+1)-1)`` at least twice differentiable."""
    re = complex(exponent).real + 1.0
    if re >= 3.0:
        return 1
    if re <= 0:
        raise ValueError("endpoint singularity is not integrable")
    return max(1, math.ceil(3.0 / re))
