"""One-dimensional searches along a line x + t*v inside a trust region.

Provides the three primitives the level-set solver is built on: locating a
line-local maximum of f, solving the two crossings of a level l around that
maximum (the section of the super-level set cut by the line), and locating
the first line-local minimum along a descent ray. All searches are
deterministic and never evaluate f outside the trust region.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import BadDirection, CrossingOutsideRegion, NoLineMax
from .objective import Objective, TrustRegion

GRAD_TOL_1D = 1e-10
ROOT_TOL = 1e-10

_INIT_STEP_FRAC = 1e-2    # first probe, as a fraction of the region radius
_MAX_STEP_FRAC = 5e-2     # cap on the marching step; limits skipped features
_BISECT_WIDTH_FRAC = 1e-12
_BRENTQ_XTOL = 1e-15
_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class LineSection:
    """Section of {f >= level} cut by the line {x + t v}, or the empty set.

    When non-empty the section is the segment t in [t1, t2] containing the
    line-local max nearest t = 0; the endpoints satisfy |f - level| <= root
    tolerance. z is the endpoint with the larger v-coordinate.
    """

    x: np.ndarray
    v: np.ndarray
    level: float
    t1: Optional[float] = None
    t2: Optional[float] = None

    @property
    def empty(self) -> bool:
        return self.t1 is None

    @property
    def diam(self) -> float:
        if self.empty:
            return 0.0
        return self.t2 - self.t1

    @property
    def z(self) -> np.ndarray:
        return self.x + self.t2 * self.v

    @property
    def zp(self) -> np.ndarray:
        return self.x + self.t1 * self.v

    @property
    def midpoint(self) -> np.ndarray:
        return self.x + 0.5 * (self.t1 + self.t2) * self.v


@dataclass(frozen=True)
class LineExtremum:
    t: float
    value: float
    on_boundary: bool = False


def _check_unit(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > _UNIT_TOL:
        raise ValueError("direction must be a unit vector")
    return v


def _line_funcs(obj: Objective, x: np.ndarray, v: np.ndarray):
    x = np.asarray(x, dtype=float)

    def phi(t: float) -> float:
        return obj.value(x + t * v)

    def dphi(t: float) -> float:
        return float(obj.gradient(x + t * v) @ v)

    return phi, dphi


def _refine_max(phi: Callable, dphi: Callable, a: float, b: float, c: float,
                grad_tol: float) -> float:
    """Polish a three-point max bracket a < b < c to |phi'(t*)| <= grad_tol."""
    fb = phi(b)
    invgold = 0.381966011250105  # 2 - golden ratio
    for _ in range(200):
        if dphi(a) > 0.0 > dphi(c):
            t = brentq(dphi, a, c, xtol=_BRENTQ_XTOL, rtol=8.9e-16)
            return float(t)
        # Shrink by golden section until the derivative signs straddle.
        if c - b > b - a:
            u = b + invgold * (c - b)
            fu = phi(u)
            if fu > fb:
                a, b, fb = b, u, fu
            else:
                c = u
        else:
            u = b - invgold * (b - a)
            fu = phi(u)
            if fu > fb:
                c, b, fb = b, u, fu
            else:
                a = u
        if c - a < 1e-13 * max(1.0, abs(b)):
            break
    return float(b)


def line_local_max(obj: Objective, x: np.ndarray, v: np.ndarray,
                   region: TrustRegion,
                   grad_tol: float = GRAD_TOL_1D) -> LineExtremum:
    """Local maximizer of t -> f(x + t v) found by marching from t = 0.

    Probes both directions, marches uphill with growing steps until the value
    drops, then polishes the bracket. Raises NoLineMax when f is monotone
    along the whole probed range (the march exits the region still rising).
    """
    v = _check_unit(v)
    phi, dphi = _line_funcs(obj, x, v)
    t_lo, t_hi = region.line_interval(x, v)
    h0 = _INIT_STEP_FRAC * region.radius
    hmax = _MAX_STEP_FRAC * region.radius

    f0 = phi(0.0)
    hp = min(h0, t_hi) if t_hi > 0 else 0.0
    hm = max(-h0, t_lo) if t_lo < 0 else 0.0
    fp = phi(hp) if hp > 0 else -np.inf
    fm = phi(hm) if hm < 0 else -np.inf

    if f0 >= fp and f0 >= fm:
        a = hm if hm < 0 else -0.0
        c = hp if hp > 0 else 0.0
        if a == c:
            raise NoLineMax("degenerate chord through the trust region")
        t = _refine_max(phi, dphi, a, 0.0, c, grad_tol)
        return LineExtremum(t, phi(t))

    # March uphill in the direction of steeper initial increase.
    if fp >= fm:
        sgn, bound, b, fb = 1.0, t_hi, hp, fp
    else:
        sgn, bound, b, fb = -1.0, t_lo, hm, fm
    a, fa = 0.0, f0
    h = abs(b)
    while True:
        h = min(2.0 * h, hmax)
        c = b + sgn * h
        at_bound = (c - bound) * sgn >= 0
        if at_bound:
            c = bound
        fc = phi(c)
        if fc < fb:
            lo, mid, hi = sorted((a, b, c))
            t = _refine_max(phi, dphi, lo, mid, hi, grad_tol)
            return LineExtremum(t, phi(t))
        if at_bound:
            raise NoLineMax("f is monotone along the probed range of the line")
        a, b, fa, fb = b, c, fb, fc


def _polish_root(phi: Callable, dphi: Callable, t: float, level: float,
                 width: float) -> float:
    """One guarded Newton step on phi(t) - level from a bisection-tight t."""
    d = dphi(t)
    if d != 0.0:
        t_new = t - (phi(t) - level) / d
        if abs(t_new - t) <= 2.0 * width:
            return t_new
    return t


def _bisect_crossing(phi: Callable, dphi: Callable, t_in: float, t_out: float,
                     level: float, width_tol: float) -> float:
    """Root of phi - level with phi(t_in) > level >= phi(t_out)."""
    lo, hi = t_in, t_out
    while abs(hi - lo) > width_tol:
        mid = 0.5 * (lo + hi)
        r = phi(mid) - level
        if r > 0.0:
            lo = mid
        elif r < 0.0:
            hi = mid
        else:
            return mid
    t = 0.5 * (lo + hi)
    return _polish_root(phi, dphi, t, level, width_tol)


def _cross_outward(phi: Callable, dphi: Callable, t_start: float, sgn: float,
                   bound: float, level: float, root_tol: float,
                   radius: float) -> float:
    """March from a point with phi > level until the component edge is found.

    Marches with growing (capped) steps. A probe below the level gives a
    bisection bracket. Between probes that both sit above the level, a sign
    flip of the directional derivative marks a hidden dip; the dip is located
    and tested so narrow excursions below the level are not stepped over.
    """
    width_tol = _BISECT_WIDTH_FRAC * radius
    hmax = _MAX_STEP_FRAC * radius
    h = _INIT_STEP_FRAC * radius
    t_prev = t_start
    d_prev = dphi(t_start) * sgn
    while True:
        t_next = t_prev + sgn * h
        at_bound = (t_next - bound) * sgn >= 0
        if at_bound:
            t_next = bound
        f_next = phi(t_next)
        if f_next <= level:
            return _bisect_crossing(phi, dphi, t_prev, t_next, level, width_tol)
        d_next = dphi(t_next) * sgn
        if d_prev < 0.0 < d_next:
            t_dip = brentq(lambda t: dphi(t) * sgn, min(t_prev, t_next),
                           max(t_prev, t_next), xtol=_BRENTQ_XTOL, rtol=8.9e-16)
            f_dip = phi(t_dip)
            if f_dip <= level:
                if f_dip >= level - root_tol:
                    return float(t_dip)
                return _bisect_crossing(phi, dphi, t_prev, t_dip, level, width_tol)
            # The component continues through the dip.
        if at_bound:
            raise CrossingOutsideRegion(
                "super-level component reaches the trust-region boundary")
        t_prev, d_prev = t_next, d_next
        h = min(2.0 * h, hmax)


def find_level_crossings(obj: Objective, x: np.ndarray, v: np.ndarray,
                         level: float, region: TrustRegion,
                         root_tol: float = ROOT_TOL) -> LineSection:
    """Section of {f >= level} on the line {x + t v} around its local max.

    Locates the line-local max nearest t = 0; if its value does not exceed
    the level the section is empty. Otherwise both crossings of the level are
    bracketed outward from the max and refined to |f - level| <= root_tol.
    """
    v = _check_unit(v)
    x = np.asarray(x, dtype=float)
    lm = line_local_max(obj, x, v, region)
    if lm.value <= level:
        return LineSection(x, v, level)
    phi, dphi = _line_funcs(obj, x, v)
    t_lo, t_hi = region.line_interval(x, v)
    t2 = _cross_outward(phi, dphi, lm.t, +1.0, t_hi, level, root_tol, region.radius)
    t1 = _cross_outward(phi, dphi, lm.t, -1.0, t_lo, level, root_tol, region.radius)
    return LineSection(x, v, level, float(t1), float(t2))


def _refine_min(phi: Callable, dphi: Callable, a: float, b: float, c: float) -> float:
    """Polish a three-point min bracket a < b < c via the derivative."""
    da, dc = dphi(a), dphi(c)
    if da < 0.0 < dc:
        return float(brentq(dphi, a, c, xtol=_BRENTQ_XTOL, rtol=8.9e-16))
    # Golden-section shrink on -phi, then retry the derivative polish once.
    invgold = 0.381966011250105
    fb = phi(b)
    for _ in range(100):
        if c - b > b - a:
            u = b + invgold * (c - b)
            fu = phi(u)
            if fu < fb:
                a, b, fb = b, u, fu
            else:
                c = u
        else:
            u = b - invgold * (b - a)
            fu = phi(u)
            if fu < fb:
                c, b, fb = b, u, fu
            else:
                a = u
        if dphi(a) < 0.0 < dphi(c):
            return float(brentq(dphi, a, c, xtol=_BRENTQ_XTOL, rtol=8.9e-16))
        if c - a < 1e-13 * max(1.0, abs(b)):
            break
    return float(b)


def line_local_min(obj: Objective, x: np.ndarray, d: np.ndarray,
                   region: TrustRegion,
                   grad_tol: float = GRAD_TOL_1D) -> LineExtremum:
    """First local minimizer of t -> f(x + t d) for t > 0.

    Requires d to be a unit descent direction at x (gradient(x)'d < 0, else
    BadDirection). If f decreases all the way to the region boundary the
    boundary point is returned with on_boundary set.
    """
    d = _check_unit(d)
    x = np.asarray(x, dtype=float)
    if float(obj.gradient(x) @ d) >= 0.0:
        raise BadDirection("d is not a descent direction at x")
    phi, dphi = _line_funcs(obj, x, d)
    _, t_hi = region.line_interval(x, d)
    hmax = _MAX_STEP_FRAC * region.radius
    h = min(_INIT_STEP_FRAC * region.radius, t_hi)
    if h <= 0:
        return LineExtremum(0.0, phi(0.0), on_boundary=True)

    a, fa = 0.0, phi(0.0)
    b = h
    fb = phi(b)
    if fb > fa:
        # The first minimum is already inside (0, h): locate the first sign
        # change of the directional derivative on a fixed subdivision.
        lo = 0.0
        for k in range(1, 17):
            t_k = k * b / 16.0
            if dphi(t_k) > 0.0:
                t = float(brentq(dphi, lo, t_k, xtol=_BRENTQ_XTOL, rtol=8.9e-16))
                return LineExtremum(t, phi(t))
            lo = t_k
        return LineExtremum(b, fb)  # flat wiggle; best available point
    d_prev = dphi(b)
    while True:
        h = min(2.0 * h, hmax)
        c = b + h
        at_bound = c >= t_hi
        if at_bound:
            c = t_hi
        fc = phi(c)
        d_next = dphi(c)
        if fc > fb:
            t = _refine_min(phi, dphi, a, b, c)
            return LineExtremum(t, phi(t))
        if d_prev < 0.0 < d_next:
            # Passed a minimum that did not show up in the values yet.
            t = float(brentq(dphi, b, c, xtol=_BRENTQ_XTOL, rtol=8.9e-16))
            return LineExtremum(t, phi(t))
        if at_bound:
            return LineExtremum(c, fc, on_boundary=True)
        a, b, fa, fb, d_prev = b, c, fb, fc, d_next
