"""Complex special-function kernels: Gamma, Pochhammer, 2F1, 3F2, Lerch Phi, Appell F1.

Every kernel accepts complex input.  Series are truncated once three
consecutive terms (or diagonal shells, for F1) fall below
``tol * max|partial sum|``; a hard cap of 100 000 terms applies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .errors import DomainError, NonConvergenceError, PoleError
from .quadrature import grading_for, integrate_unit

TERM_CAP = 100_000
DEFAULT_TOL = 1e-15
_CHUNK = 64


def _finite(*values) -> None:
    for v in values:
        c = complex(v)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError(f"non-finite argument {v!r}")


def is_nonpositive_integer(z, tol: float = 1e-13) -> bool:
    c = complex(z)
    return abs(c.imag) <= tol and c.real <= tol and abs(c.real - round(c.real)) <= tol


@dataclass(frozen=True)
class F1Params:
    """Parameters (a~; b1, b2; c~) of the Appell function F1."""

    a_tilde: complex
    b1: complex
    b2: complex
    c_tilde: complex

    def __post_init__(self):
        _finite(self.a_tilde, self.b1, self.b2, self.c_tilde)
        if is_nonpositive_integer(self.c_tilde):
            raise PoleError(f"c~ = {self.c_tilde} is zero or a negative integer")


def log_gamma(z) -> complex:
    """Principal branch of ln Gamma(z)."""
    z = complex(z)
    _finite(z)
    if is_nonpositive_integer(z, 0.0):
        raise PoleError(f"Gamma has a pole at {z}")
    return complex(sc.loggamma(z))


def gamma(z) -> complex:
    return complex(np.exp(log_gamma(z)))


def pochhammer(x, n: int) -> complex:
    """Rising factorial (x)_n = x (x+1) ... (x+n-1) by direct product."""
    if n < 0:
        raise ValueError("n must be non-negative")
    x = complex(x)
    out = 1.0 + 0.0j
    for k in range(n):
        out *= x + k
    return out


def _hyp_series(upper, lower, z: complex, tol: float) -> complex:
    """Sum pFq(upper; lower; z) directly; caller guarantees |z| < 1 or termination."""
    upper = [complex(u) for u in upper]
    lower = [complex(b) for b in lower]
    for b in lower:
        if is_nonpositive_integer(b):
            raise PoleError(f"lower parameter {b} is zero or a negative integer")
    z = complex(z)
    total = 0.0 + 0.0j
    term = 1.0 + 0.0j
    biggest = 0.0
    small_run = 0
    k0 = 0
    while k0 < TERM_CAP:
        k = np.arange(k0, k0 + _CHUNK, dtype=float)
        ratio = np.full(_CHUNK, z, dtype=complex) / (k + 1.0)
        for u in upper:
            ratio *= u + k
        for b in lower:
            ratio /= b + k
        # terms t_{k0}, ..., t_{k0+CHUNK-1}
        terms = term * np.concatenate(([1.0], np.cumprod(ratio[:-1])))
        term = terms[-1] * ratio[-1]
        partial = total + np.cumsum(terms)
        mags = np.abs(terms)
        run_max = np.maximum.accumulate(np.maximum(np.abs(partial), biggest))
        small = mags <= tol * run_max
        for i in range(_CHUNK):
            small_run = small_run + 1 if small[i] else 0
            if small_run >= 3:
                return complex(partial[i])
        total = complex(partial[-1])
        biggest = float(run_max[-1])
        k0 += _CHUNK
        if not np.isfinite(total):
            raise NonConvergenceError("hypergeometric series overflowed")
    raise NonConvergenceError("hypergeometric series exceeded the term cap")


def _terminates(params) -> bool:
    return any(is_nonpositive_integer(u, 0.0) for u in params)


def gauss_2f1(a, b, c, z, tol: float = DEFAULT_TOL) -> complex:
    """Gauss hypergeometric function 2F1(a, b; c; z) for |z| < 1.

    For |z| > 0.9 the Pfaff transform z -> z/(z-1) is applied whenever it
    shrinks the argument.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    _finite(a, b, c, z)
    if is_nonpositive_integer(c):
        raise PoleError(f"c = {c} is zero or a negative integer")
    if z == 0:
        return 1.0 + 0.0j
    if _terminates((a, b)):
        return _hyp_series((a, b), (c,), z, tol)
    if abs(z) >= 1.0:
        raise DomainError(f"2F1 series requires |z| < 1, got |z| = {abs(z):.6g}")
    if abs(z) > 0.9:
        w = z / (z - 1.0)
        if abs(w) < abs(z):
            return (1.0 - z) ** (-a) * _hyp_series((a, c - b), (c,), w, tol)
    return _hyp_series((a, b), (c,), z, tol)


def gauss_2f1_derivative(a, b, c, z, tol: float = DEFAULT_TOL) -> complex:
    """d/dz 2F1(a, b; c; z) = (ab/c) 2F1(a+1, b+1; c+1; z)."""
    a, b, c = complex(a), complex(b), complex(c)
    return a * b / c * gauss_2f1(a + 1, b + 1, c + 1, z, tol)


def incomplete_beta(p, q, z, tol: float = DEFAULT_TOL) -> complex:
    """Incomplete Beta function B(p, q; z) = z^p / p * 2F1(p, 1-q; 1+p; z)."""
    p, q, z = complex(p), complex(q), complex(z)
    if is_nonpositive_integer(p, 0.0):
        raise PoleError(f"B(p, q; z) has a pole at p = {p}")
    if z == 0:
        return 0.0 + 0.0j
    return z**p / p * gauss_2f1(p, 1.0 - q, 1.0 + p, z, tol)


def clausen_3f2(a1, a2, a3, b1, b2, z, tol: float = DEFAULT_TOL) -> complex:
    """Clausen function 3F2(a1, a2, a3; b1, b2; z), |z| < 1."""
    z = complex(z)
    _finite(a1, a2, a3, b1, b2, z)
    for b in (b1, b2):
        if is_nonpositive_integer(b):
            raise PoleError(f"lower parameter {b} is zero or a negative integer")
    if z == 0:
        return 1.0 + 0.0j
    if abs(z) >= 1.0 and not _terminates((a1, a2, a3)):
        raise DomainError(f"3F2 series requires |z| < 1, got |z| = {abs(z):.6g}")
    return _hyp_series((a1, a2, a3), (b1, b2), z, tol)


def lerch_phi(z, s, alpha, tol: float = DEFAULT_TOL) -> complex:
    """Hurwitz-Lerch transcendent Phi(z, s, alpha) = sum_k z^k / (k + alpha)^s."""
    z, s, alpha = complex(z), complex(s), complex(alpha)
    _finite(z, s, alpha)
    if is_nonpositive_integer(alpha, 0.0):
        raise PoleError(f"alpha = {alpha} is zero or a negative integer")
    if abs(z) >= 1.0:
        raise DomainError(f"Lerch series requires |z| < 1, got |z| = {abs(z):.6g}")
    if z == 0:
        return (alpha) ** (-s)
    total = 0.0 + 0.0j
    biggest = 0.0
    small_run = 0
    logz = np.log(z)
    for k0 in range(0, TERM_CAP, _CHUNK):
        k = np.arange(k0, k0 + _CHUNK, dtype=float)
        terms = np.exp(k * logz) * (k + alpha) ** (-s)
        partial = total + np.cumsum(terms)
        run_max = np.maximum.accumulate(np.maximum(np.abs(partial), biggest))
        small = np.abs(terms) <= tol * run_max
        for i in range(_CHUNK):
            small_run = small_run + 1 if small[i] else 0
            if small_run >= 3:
                return complex(partial[i])
        total = complex(partial[-1])
        biggest = float(run_max[-1])
    raise NonConvergenceError("Lerch series exceeded the term cap")


def _rising_series(b, x, K: int) -> np.ndarray:
    """Vector of (b)_m x^m / m! for m = 0..K-1."""
    m = np.arange(K - 1, dtype=float)
    ratio = (complex(b) + m) * complex(x) / (m + 1.0)
    return np.concatenate(([1.0 + 0.0j], np.cumprod(ratio)))


def _shells(p: F1Params, x: complex, y: complex, K: int) -> np.ndarray:
    k = np.arange(K - 1, dtype=float)
    r = np.concatenate(([1.0 + 0.0j], np.cumprod((p.a_tilde + k) / (p.c_tilde + k))))
    conv = np.convolve(_rising_series(p.b1, x, K), _rising_series(p.b2, y, K))[:K]
    return r * conv


def appell_f1(p: F1Params, x, y, tol: float = DEFAULT_TOL) -> complex:
    """Appell F1(a~; b1, b2; c~; x, y) by diagonal shells m + n = k.

    The bi-disc |x|, |y| < 1 is required, except in a variable whose
    parameter is a non-positive integer (that direction is a polynomial).
    """
    x, y = complex(x), complex(y)
    _finite(x, y)
    if abs(x) >= 1.0 and not is_nonpositive_integer(p.b1, 0.0):
        raise DomainError(f"F1 series requires |x| < 1, got |x| = {abs(x):.6g}")
    if abs(y) >= 1.0 and not is_nonpositive_integer(p.b2, 0.0):
        raise DomainError(f"F1 series requires |y| < 1, got |y| = {abs(y):.6g}")
    if x == 0 and y == 0:
        return 1.0 + 0.0j
    K = 64
    while K <= TERM_CAP:
        shells = _shells(p, x, y, K)
        partial = np.cumsum(shells)
        if not np.all(np.isfinite(partial)):
            raise NonConvergenceError("F1 shells overflowed")
        run_max = np.maximum.accumulate(np.abs(partial))
        small = np.abs(shells) <= tol * run_max
        run = 0
        for i in range(K):
            run = run + 1 if small[i] else 0
            if run >= 3:
                return complex(partial[i])
        K *= 2
    raise NonConvergenceError("F1 series exceeded the shell cap")


def lauricella_fd(a, bs, c, xs, tol: float = DEFAULT_TOL) -> complex:
    """Lauricella F_D(a; b_1..b_m; c; x_1..x_m), summed by total degree.

    Needs every |x_i| < 1 unless the matching b_i is a non-positive integer.
    With m = 2 this is Appell F1.
    """
    xs = [complex(x) for x in xs]
    _finite(a, c, *bs, *xs)
    if len(bs) != len(xs):
        raise ValueError("one b per variable")
    for b, x in zip(bs, xs):
        if abs(x) >= 1.0 and not is_nonpositive_integer(b, 0.0):
            raise DomainError(f"F_D series requires |x| < 1, got |x| = {abs(x):.6g}")
    if is_nonpositive_integer(c):
        raise PoleError(f"lower parameter {c} is zero or a negative integer")
    if all(x == 0 for x in xs):
        return 1.0 + 0.0j
    a, c = complex(a), complex(c)
    K = 64
    while K <= TERM_CAP:
        k = np.arange(K - 1, dtype=float)
        shells = np.concatenate(([1.0 + 0.0j], np.cumprod((a + k) / (c + k))))
        conv = np.array([1.0 + 0.0j])
        for b, x in zip(bs, xs):
            conv = np.convolve(conv, _rising_series(b, x, K))[:K]
        shells = shells * conv
        partial = np.cumsum(shells)
        if not np.all(np.isfinite(partial)):
            raise NonConvergenceError("F_D shells overflowed")
        run_max = np.maximum.accumulate(np.abs(partial))
        small = np.abs(shells) <= tol * run_max
        run = 0
        for i in range(K):
            run = run + 1 if small[i] else 0
            if run >= 3:
                return complex(partial[i])
        K *= 2
    raise NonConvergenceError("F_D series exceeded the shell cap")


def appell_f1_integral(p: F1Params, x, y, tol: float = 1e-13) -> complex:
    """Appell F1 from its Euler integral by adaptive Gauss-Legendre quadrature.

    Requires Re(c~) > Re(a~) > 0 and x, y off the rays [1, inf).
    """
    A, b1, b2, C = p.a_tilde, complex(p.b1), complex(p.b2), p.c_tilde
    A, C = complex(A), complex(C)
    x, y = complex(x), complex(y)
    if not (C.real > A.real > 0):
        raise DomainError("Euler integral requires Re(c~) > Re(a~) > 0")
    for w in (x, y):
        if abs(w.imag) < 1e-15 and w.real >= 1.0:
            raise DomainError(f"argument {w} lies on the cut [1, inf)")
    pref = np.exp(log_gamma(C) - log_gamma(A) - log_gamma(C - A))

    def g(t, omt):
        return t ** (A - 1) * omt ** (C - A - 1) * (1 - x * t) ** (-b1) * (1 - y * t) ** (-b2)

    ks = grading_for(A - 1)
    ke = grading_for(C - A - 1)

    def left(s):
        t = 0.5 * s**ks
        return g(t, 1.0 - t) * (0.5 * ks * s ** (ks - 1))

    def right(s):
        omt = 0.5 * s**ke
        return g(1.0 - omt, omt) * (0.5 * ke * s ** (ke - 1))

    return complex(pref * (integrate_unit(left, tol) + integrate_unit(right, tol)))
