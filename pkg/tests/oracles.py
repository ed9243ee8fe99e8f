"""Independent oracles used by the tests.

Everything here is deliberately primitive: dense 1-D grid scans with
bisection polish, plain central differences, and frozen reference constants
for the six-hump camel computed by a grid + Newton census. None of it shares
code with the library paths it is used to check.
"""

from __future__ import annotations

import numpy as np

# Critical points of the six-hump camel, frozen from a dense-grid Newton
# census (45 x 31 starts on [-2.2, 2.2] x [-1.5, 1.5], dedup at 1e-6).
# Each entry: (x1, x2, f, morse_index). The function is symmetric under
# x -> -x; only canonical representatives are listed where relevant.
CAMEL_MINIMA = [
    (-1.7036067150, +0.7960835687, -0.2154638244, 0),
    (-1.6071047529, -0.5686514549, +2.1042503103, 0),
    (-0.0898420131, +0.7126564030, -1.0316284535, 0),
    (+0.0898420131, -0.7126564030, -1.0316284535, 0),
    (+1.6071047529, +0.5686514549, +2.1042503103, 0),
    (+1.7036067150, -0.7960835687, -0.2154638244, 0),
]
CAMEL_SADDLES = [
    (-1.6380679842, -0.2286740690, +2.2293571975, 1),
    (-1.2960702672, -0.6050843880, +2.2294708180, 1),
    (-1.1092053368, +0.7682680925, +0.5437186010, 1),
    (0.0, 0.0, 0.0, 1),
    (+1.1092053368, -0.7682680925, +0.5437186010, 1),
    (+1.2960702672, +0.6050843880, +2.2294708180, 1),
    (+1.6380679842, +0.2286740690, +2.2293571975, 1),
]
CAMEL_MAXIMA = [
    (-1.2302298765, -0.1623345845, +2.4962953510, 2),
    (+1.2302298765, +0.1623345845, +2.4962953510, 2),
]
CAMEL_GLOBAL_MIN = np.array([0.0898420131, -0.7126564030])
CAMEL_SADDLE_NEAR_M1 = np.array([-1.1092053368, 0.7682680925])
CAMEL_SADDLE_VALUES = sorted({round(s[2], 10) for s in CAMEL_SADDLES})


def fd_gradient(fn, x, h=1e-5):
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (fn(x + e) - fn(x - e)) / (2.0 * h)
    return g


def fd_hessian(fn, x, h=1e-4):
    x = np.asarray(x, dtype=float)
    n = x.size
    H = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            ei = np.zeros(n); ei[i] = h
            ej = np.zeros(n); ej[j] = h
            H[i, j] = (fn(x + ei + ej) - fn(x + ei - ej)
                       - fn(x - ei + ej) + fn(x - ei - ej)) / (4.0 * h * h)
    return 0.5 * (H + H.T)


def _bisect_zero(fn, lo, hi, iters=200):
    flo = fn(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0 or hi - lo < 1e-15 * max(1.0, abs(mid)):
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def grid_line_max(fn, dfn, x, v, t_lo, t_hi, n=10001):
    """Line-local max nearest t = 0 by dense scan plus derivative bisection.

    fn/dfn evaluate f and grad f; returns (t, value).
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    ts = np.linspace(t_lo, t_hi, n)
    vals = np.array([fn(x + t * v) for t in ts])
    interior = [i for i in range(1, n - 1)
                if vals[i] >= vals[i - 1] and vals[i] >= vals[i + 1]]
    if not interior:
        raise RuntimeError("no interior line max on the scanned range")
    i = min(interior, key=lambda k: abs(ts[k]))
    dphi = lambda t: float(dfn(x + t * v) @ v)
    t = _bisect_zero(dphi, ts[i - 1], ts[i + 1])
    return t, fn(x + t * v)


def grid_line_min_forward(fn, dfn, x, d, t_hi, n=10001):
    """First line-local min for t > 0 by dense scan plus bisection polish."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    ts = np.linspace(0.0, t_hi, n)
    vals = np.array([fn(x + t * d) for t in ts])
    for i in range(1, n - 1):
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]:
            dphi = lambda t: float(dfn(x + t * d) @ d)
            t = _bisect_zero(dphi, ts[i - 1], ts[i + 1])
            return t, fn(x + t * d)
    raise RuntimeError("no interior line min on the scanned range")


def grid_crossings(fn, x, v, level, t_lo, t_hi, n=20001):
    """All crossings of f = level on the line, by scan plus bisection."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    ts = np.linspace(t_lo, t_hi, n)
    vals = np.array([fn(x + t * v) - level for t in ts])
    roots = []
    for i in range(n - 1):
        if vals[i] == 0.0:
            roots.append(ts[i])
        elif vals[i] * vals[i + 1] < 0:
            roots.append(_bisect_zero(lambda t: fn(x + t * v) - level,
                                      ts[i], ts[i + 1]))
    return roots


def camel_value(p):
    x1, x2 = p
    return (4.0 - 2.1 * x1 ** 2 + x1 ** 4 / 3.0) * x1 ** 2 + x1 * x2 \
        + 4.0 * (x2 ** 2 - 1.0) * x2 ** 2


def camel_gradient(p):
    x1, x2 = p
    return np.array([2.0 * x1 ** 5 - 8.4 * x1 ** 3 + 8.0 * x1 + x2,
                     x1 + 16.0 * x2 ** 3 - 8.0 * x2])


def camel_hessian(p):
    x1, x2 = p
    return np.array([[10.0 * x1 ** 4 - 25.2 * x1 ** 2 + 8.0, 1.0],
                     [1.0, 48.0 * x2 ** 2 - 8.0]])


def newton_polish(grad, hess, x0, tol=1e-13, max_iter=80):
    """Plain Newton iteration on grad = 0; the reference refiner."""
    x = np.asarray(x0, dtype=float).copy()
    for _ in range(max_iter):
        g = grad(x)
        if np.linalg.norm(g) <= tol:
            break
        step = np.linalg.solve(hess(x), -g)
        sn = np.linalg.norm(step)
        if sn > 1.0:
            step /= sn
        x = x + step
    return x
