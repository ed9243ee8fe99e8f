"""Building blocks of the level-set saddle search.

Four moves act on a pair of endpoints z, z' sitting on the level set
{f = l}: reduce the parallel distance by shifting the base point across the
chord direction (PD), re-align the chord by sliding one endpoint along the
level set (Av), lower the level after the segment collapses (l-down), and
raise the level to the value at the segment midpoint (l-up).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from . import quadmodel
from .errors import (AvStalled, CriticalCandidate, CrossingOutsideRegion,
                     DegenerateDenominator, LUpImpossible, NoLineMax)
from .line1d import (GRAD_TOL_1D, ROOT_TOL, LineSection, find_level_crossings,
                     line_local_max, line_local_min)
from .objective import Objective, TrustRegion
from .pardist import DENOM_TOL, derivatives_from_section

# Armijo parameters for the (PD) backtracking search.
ARMIJO_C1 = 1e-4
BACKTRACK_RATIO = 0.5
MAX_BACKTRACKS = 45
NEWTON_MIN_EIG = 1e-10  # reduced Hessian must be at least this definite


@dataclass(frozen=True)
class SolverState:
    """Endpoints on {f = level}, the chord direction and the base point."""

    z: np.ndarray
    zp: np.ndarray
    v: np.ndarray
    level: float
    x: np.ndarray
    region: TrustRegion
    iteration: int = 0
    last_step: str = "Init"

    @property
    def gap(self) -> float:
        return float(np.linalg.norm(self.z - self.zp))

    @property
    def midpoint(self) -> np.ndarray:
        return 0.5 * (self.z + self.zp)

    def section(self) -> LineSection:
        """The segment [z', z] as a line section through x along v."""
        t2 = float(self.v @ (self.z - self.x))
        t1 = float(self.v @ (self.zp - self.x))
        return LineSection(self.x, self.v, self.level, t1, t2)

    def validate(self, obj: Objective, root_tol: float = ROOT_TOL) -> None:
        """Re-assert the state invariants; raises ValueError on violation."""
        if abs(np.linalg.norm(self.v) - 1.0) > 1e-10:
            raise ValueError("v is not a unit vector")
        for name, p in (("z", self.z), ("z'", self.zp)):
            r = abs(obj.value(p) - self.level)
            if r > 10.0 * root_tol:
                raise ValueError(f"|f({name}) - level| = {r:.3e} exceeds tolerance")
        gap = self.gap
        if gap > 0:
            chord = (self.z - self.zp) / gap
            off = float(np.linalg.norm(chord - np.dot(chord, self.v) * self.v))
            if off > 1e-8:
                raise ValueError("endpoints are not collinear with v")


def state_from_section(section: LineSection, region: TrustRegion,
                       iteration: int, last_step: str) -> SolverState:
    return SolverState(z=section.z, zp=section.zp, v=section.v,
                       level=section.level, x=section.midpoint,
                       region=region, iteration=iteration, last_step=last_step)


@dataclass(frozen=True)
class ReducedSegment:
    """(PD) produced a shorter positive segment."""
    state: SolverState
    g_old: float
    g_new: float


@dataclass(frozen=True)
class HitZero:
    """(PD) drove the parallel distance to zero; x_prime is the line-local max."""
    x_prime: np.ndarray
    f_prime: float
    step_point: np.ndarray


@dataclass(frozen=True)
class PdStalled:
    """No backtracking step achieved the Armijo decrease."""
    g: float


PdOutcome = Union[ReducedSegment, HitZero, PdStalled]


def _complement_basis(v: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the hyperplane perpendicular to unit v (n x (n-1))."""
    n = v.size
    e = np.zeros(n)
    e[0] = 1.0 if v[0] >= 0 else -1.0
    u = v + e
    Hh = np.eye(n) - 2.0 * np.outer(u, u) / (u @ u)
    # Hh maps v to -e and is orthogonal symmetric; its other columns span v-perp.
    return Hh[:, 1:]


def step_pd(state: SolverState, obj: Objective,
            root_tol: float = ROOT_TOL,
            denom_tol: float = DENOM_TOL) -> PdOutcome:
    """One parallel-distance reduction step.

    Computes grad/hess of g^2 at the midpoint from the endpoint data, moves
    across v by a Newton step on the complement of v when the reduced Hessian
    is positive definite (steepest descent otherwise), and backtracks on
    g^2(x + t d) under the Armijo condition. A trial point whose section is
    empty wins immediately: the parallel distance has hit zero.
    """
    v = state.v
    region = state.region
    try:
        pe = derivatives_from_section(obj, state.section(), want_hessian=True,
                                      denom_tol=denom_tol)
    except DegenerateDenominator:
        # A (nearly) collapsed segment puts the endpoints at the line max,
        # where v is tangent to the level set. That is the zero-distance
        # case: report the collapse so the caller lowers the level. Genuine
        # tangency on a wide segment stays an error.
        lm = line_local_max(obj, state.x, v, region)
        if lm.value <= state.level + 10.0 * root_tol:
            return HitZero(state.x + lm.t * v, lm.value, state.x)
        raise
    g2_0 = pe.g2

    B = _complement_basis(v)
    grad_red = B.T @ pe.grad_g2
    H_red = B.T @ pe.hess_g2 @ B
    evals, _ = quadmodel.decompose(H_red)
    if evals[-1] > NEWTON_MIN_EIG:
        d = -B @ np.linalg.solve(H_red, grad_red)
        t0 = 1.0
    else:
        d = -B @ grad_red
        dn = float(np.linalg.norm(d))
        t0 = min(1.0, region.radius / dn) if dn > 0 else 1.0
    dn = float(np.linalg.norm(d))
    if dn == 0.0:
        return PdStalled(pe.g)
    slope = float(pe.grad_g2 @ d)
    if slope >= 0.0:
        return PdStalled(pe.g)

    t = t0
    for _ in range(MAX_BACKTRACKS):
        xt = state.x + t * d
        if region.contains(xt):
            try:
                sec = find_level_crossings(obj, xt, v, state.level, region,
                                           root_tol=root_tol)
            except (CrossingOutsideRegion, NoLineMax):
                sec = None
            if sec is not None:
                if sec.empty:
                    lm = line_local_max(obj, xt, v, region)
                    return HitZero(xt + lm.t * v, lm.value, xt)
                g2_t = sec.diam ** 2
                if g2_t <= g2_0 + ARMIJO_C1 * t * slope:
                    new_state = state_from_section(
                        sec, region, state.iteration, "PD")
                    return ReducedSegment(new_state, g_old=pe.g, g_new=sec.diam)
        t *= BACKTRACK_RATIO
    return PdStalled(pe.g)


def _project_to_level(obj: Objective, p: np.ndarray, level: float,
                      root_tol: float, max_newton: int = 50):
    """Pull p back onto {f = level} by 1-D Newton along the gradient."""
    p = p.copy()
    for _ in range(max_newton):
        r = obj.value(p) - level
        if abs(r) <= root_tol:
            return p
        grad = obj.gradient(p)
        gn2 = float(grad @ grad)
        if gn2 == 0.0 or not np.isfinite(gn2):
            return None
        p = p - (r / gn2) * grad
    return None


def step_av(state: SolverState, obj: Objective,
            root_tol: float = ROOT_TOL,
            max_backtracks: int = 30) -> SolverState:
    """Adjust the chord direction by sliding one endpoint along the level set.

    The endpoint with the larger gradient norm (ties go to z) is moved along
    the projection of the chord onto its tangent plane and re-projected onto
    {f = level}; the step is halved until the chord strictly shortens. Raises
    AvStalled when the tangential component vanishes or no step helps.
    """
    z, zp = state.z, state.zp
    gz = obj.gradient(z)
    gzp = obj.gradient(zp)
    if np.linalg.norm(gz) >= np.linalg.norm(gzp):
        this, other, gthis, move_z = z, zp, gz, True
    else:
        this, other, gthis, move_z = zp, z, gzp, False
    chord = other - this
    gap0 = float(np.linalg.norm(chord))
    gn2 = float(gthis @ gthis)
    if gn2 == 0.0:
        raise AvStalled("endpoint gradient vanishes; cannot define a tangent plane")
    w = chord - (float(gthis @ chord) / gn2) * gthis
    if float(np.linalg.norm(w)) <= 1e-12 * (1.0 + gap0):
        raise AvStalled("tangential component is negligible; v is aligned")

    t = 1.0
    for _ in range(max_backtracks):
        p = _project_to_level(obj, this + t * w, state.level, root_tol)
        if p is not None and state.region.contains(p):
            gap_new = float(np.linalg.norm(p - other))
            if gap_new < gap0:
                z_new, zp_new = (p, other) if move_z else (other, p)
                v_new = (z_new - zp_new) / gap_new
                return replace(state, z=z_new, zp=zp_new, v=v_new,
                               x=0.5 * (z_new + zp_new), last_step="Av")
        t *= 0.5
    raise AvStalled("no tangential step reduced the chord length")


def crossings_or_degenerate(obj: Objective, x: np.ndarray, v: np.ndarray,
                            level: float, region: TrustRegion,
                            root_tol: float = ROOT_TOL) -> LineSection:
    """Section of {f >= level} through x, allowing the degenerate point section.

    When the line-local max sits exactly at the level (within the root
    tolerance) the section is the single point at the max; this occurs right
    after a level change lands on the ridge.
    """
    section = find_level_crossings(obj, x, v, level, region, root_tol=root_tol)
    if not section.empty:
        return section
    lm = line_local_max(obj, x, v, region)
    if level - lm.value <= root_tol:
        return LineSection(x, v, level, lm.t, lm.t)
    raise CrossingOutsideRegion(
        f"no point at the level along v: line max is {level - lm.value:.3e} below")


def step_l_down(obj: Objective, x: np.ndarray, v: np.ndarray,
                region: TrustRegion,
                root_tol: float = ROOT_TOL,
                grad_tol: float = GRAD_TOL_1D) -> tuple[float, np.ndarray, LineSection]:
    """Decrease the level from a line-local max of f along v.

    Descends from x along the projection of -grad f(x) onto the complement
    of v to the first line-local minimum; the minimum value is the new level
    and the section at that level through the minimizer is returned (possibly
    degenerate). Raises CriticalCandidate when grad f(x) is parallel to v.
    """
    x = np.asarray(x, dtype=float)
    grad = obj.gradient(x)
    gn = float(np.linalg.norm(grad))
    if abs(float(grad @ v)) > 1e3 * grad_tol * (1.0 + gn):
        raise ValueError("x is not a line-local max of f along v")
    proj = grad - float(grad @ v) * v
    pn = float(np.linalg.norm(proj))
    if pn <= 1e-10 * (1.0 + gn):
        raise CriticalCandidate(x)
    d = -proj / pn
    mn = line_local_min(obj, x, d, region)
    x_new = x + mn.t * d
    level_new = mn.value
    section = crossings_or_degenerate(obj, x_new, v, level_new, region, root_tol)
    return level_new, x_new, section


def step_l_up(state: SolverState, obj: Objective,
              root_tol: float = ROOT_TOL) -> SolverState:
    """Raise the level to f at the segment midpoint and re-solve the endpoints.

    The direction v is unchanged; the new segment is the section of the new
    level on the same line, which may collapse to the midpoint itself.
    Raises LUpImpossible when the midpoint does not lie above the level.
    """
    m = state.midpoint
    fm = obj.value(m)
    if fm <= state.level:
        raise LUpImpossible(f"f(midpoint) = {fm:.6g} does not exceed level "
                            f"{state.level:.6g}")
    section = crossings_or_degenerate(obj, m, state.v, fm, state.region, root_tol)
    return replace(state, z=section.z, zp=section.zp, level=fm,
                   x=section.midpoint, last_step="LUp")
