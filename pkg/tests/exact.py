"""Exact rational Frobenius coefficients of the derivative equation about 0 (test helper)."""
from fractions import Fraction as F


def pmul(x, y):
    out = [F(0)] * (len(x) + len(y) - 1)
    for i, a in enumerate(x):
        for j, b in enumerate(y):
            out[i + j] += a * b
    return out


def padd(*ps):
    out = [F(0)] * max(len(p) for p in ps)
    for p in ps:
        for i, c in enumerate(p):
            out[i] += c
    return out


def scale(k, p):
    return [k * c for c in p]


def derivative_polys(a, q, al, be, g, d):
    """p2, p1, p0 of the equation obeyed by z^g (z-1)^d (z-a)^e u'."""
    e = 1 + al + be - g - d
    ab = al * be
    lin = [-q, ab]
    cubic = pmul(pmul([F(0), F(1)], [F(-1), F(1)]), [-a, F(1)])
    inner = padd(scale(1 - g, pmul([F(-1), F(1)], [-a, F(1)])),
                 scale(1 - d, pmul([F(0), F(1)], [-a, F(1)])),
                 scale(1 - e, pmul([F(0), F(1)], [F(-1), F(1)])))
    p1 = padd(pmul(lin, inner), scale(-ab, cubic))
    return pmul(cubic, lin), p1, pmul(lin, lin)


def origin_series(params, n_max):
    """a_0 = 1, ..., a_{n_max} for exponent 0 about z = 0, in exact arithmetic."""
    A, B, C = derivative_polys(*params)
    get = lambda arr, i: arr[i] if 0 <= i < len(arr) else F(0)  # noqa: E731

    def T(k, s):
        return get(A, k) * s * (s - 1) + get(B, k - 1) * s + get(C, k - 2)

    k0 = next(k for k in range(6) if any(T(k, s) != 0 for s in range(1, 4)))
    width = max(len(A), len(B) + 1, len(C) + 2) - k0
    a = [F(1)]
    for n in range(1, n_max + 1):
        rhs = -sum(T(k0 + j, n - j) * a[n - j] for j in range(1, width) if n - j >= 0)
        a.append(rhs / T(k0, n))
    return a
