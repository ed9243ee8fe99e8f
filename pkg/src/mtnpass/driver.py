"""Global saddle search: orchestrates the level-set subroutines.

The loop runs (PD) and dispatches on its outcome: a sufficient reduction is
followed by a chord re-alignment (Av); a small reduction raises the level
from the segment midpoint (l-up); a collapse to zero lowers the level along
a descent ray (l-down). Every gradient the solver evaluates is checked
against the gradient tolerance, and a Newton refinement takes over once the
endpoints are close. A found saddle is certified by Morse index one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import (AvStalled, BadEndpoints, CriticalCandidate,
                     CrossingOutsideRegion, DegenerateDenominator,
                     LUpImpossible, NewtonBreakdown, NoLineMax)
from .line1d import GRAD_TOL_1D, ROOT_TOL, LineSection
from .objective import Objective, TrustRegion
from .pardist import DENOM_TOL
from .quadmodel import newton_refine
from .subroutines import (HitZero, PdStalled, ReducedSegment, SolverState,
                          state_from_section, step_av, step_l_down, step_l_up,
                          step_pd)

logger = logging.getLogger(__name__)

_EXTRAPOLATION_SAMPLES = 11
_MAX_CONSECUTIVE_FAILURES = 3


@dataclass(frozen=True)
class SolveConfig:
    """Tolerances and limits of the global solve."""

    gtol: float = 1e-8            # gradient norm certifying a critical point
    xtol: float = 1e-6            # endpoint gap for the extrapolation stop
    hull_tol: float = 1e-6        # distance of 0 to the endpoint-gradient segment
    eta: float = 0.05             # sufficient-decrease fraction for (PD)
    max_iter: int = 500
    radius: float = 10.0          # trust-region radius around the initial midpoint
    newton_handoff_gap: float = 1e-2
    root_tol: float = ROOT_TOL
    denom_tol: float = DENOM_TOL
    seed: int = 0                 # recorded for reproducibility of reports

    def __post_init__(self):
        for name in ("gtol", "xtol", "hull_tol", "eta", "radius",
                     "newton_handoff_gap", "root_tol", "denom_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass
class TraceRecord:
    iteration: int
    step: str
    level: float
    g: float
    gap: float
    grad_norm_z: float
    grad_norm_zp: float
    x: list

    def to_dict(self) -> dict:
        return {"iteration": self.iteration, "step": self.step,
                "level": self.level, "g": self.g, "gap": self.gap,
                "grad_norm_z": self.grad_norm_z,
                "grad_norm_zp": self.grad_norm_zp, "x": self.x}


@dataclass
class SolveReport:
    status: str                   # SaddleFound | Stalled | MaxIter | Breakdown
    x: np.ndarray
    f: float
    grad_norm: float
    morse_index: int
    iterations: int
    eval_counts: dict
    trace: list = field(default_factory=list)
    message: str = ""

    @property
    def saddle_found(self) -> bool:
        return self.status == "SaddleFound"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "x": [float(c) for c in np.asarray(self.x)],
            "f": float(self.f),
            "grad_norm": float(self.grad_norm),
            "morse_index": int(self.morse_index),
            "iterations": int(self.iterations),
            "eval_counts": dict(self.eval_counts),
            "message": self.message,
        }


def hull_distance(g1: np.ndarray, g2: np.ndarray) -> float:
    """Euclidean distance from the origin to the segment [g1, g2]."""
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    d = g2 - g1
    dd = float(d @ d)
    t = 0.0 if dd == 0.0 else min(1.0, max(0.0, -float(g1 @ d) / dd))
    return float(np.linalg.norm(g1 + t * d))


class _GradientWatch:
    """Wraps an objective so every gradient evaluation is screened for
    small norms; the best point seen is a stopping candidate."""

    def __init__(self, inner: Objective):
        self.inner = inner
        self.best_x: Optional[np.ndarray] = None
        self.best_norm = np.inf
        self.obj = Objective(inner.n, value=inner.value,
                             gradient=self._gradient,
                             hessian=inner.hessian, name=inner.name)

    def _gradient(self, x: np.ndarray) -> np.ndarray:
        g = self.inner.gradient(x)
        gn = float(np.linalg.norm(g))
        if gn < self.best_norm:
            self.best_norm = gn
            self.best_x = np.asarray(x, dtype=float).copy()
        return g

    def reset(self):
        self.best_x = None
        self.best_norm = np.inf


def _bisect_chord_crossing(obj: Objective, m: np.ndarray, v: np.ndarray,
                           level: float, t_from: float, t_to: float,
                           root_tol: float) -> float:
    """Crossing of the level between the ridge max and a chord endpoint.

    The endpoint value never exceeds the level by construction; when it sits
    on the level within the root tolerance the endpoint itself is the root.
    """
    phi = lambda t: obj.value(m + t * v)
    r_to = phi(t_to) - level
    if r_to > 0.0:
        if r_to <= root_tol:
            return t_to
        raise BadEndpoints("chord endpoint lies above the initial level")
    lo, hi = t_from, t_to
    width = 1e-12 * max(1.0, abs(t_to - t_from))
    while abs(hi - lo) > width:
        mid = 0.5 * (lo + hi)
        r = phi(mid) - level
        if r > 0.0:
            lo = mid
        elif r < 0.0:
            hi = mid
        else:
            return mid
    return 0.5 * (lo + hi)


def init_state(obj: Objective, a: np.ndarray, b: np.ndarray,
               config: SolveConfig,
               region: Optional[TrustRegion] = None) -> SolverState:
    """Initial endpoints at level max(f(a), f(b)) around the ridge on [a, b].

    Locates the line-local max of f strictly between a and b, then solves the
    two crossings of the initial level on the chord. Raises BadEndpoints when
    f is monotone on [a, b] or the ridge does not rise above the level.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != (obj.n,) or b.shape != (obj.n,):
        raise BadEndpoints("endpoint dimension mismatch")
    L = float(np.linalg.norm(a - b))
    if L == 0.0:
        raise BadEndpoints("endpoints coincide")
    v0 = (a - b) / L
    if region is None:
        region = TrustRegion(0.5 * (a + b), config.radius)

    # Coarse scan of the chord for the interior maximum, then polish.
    ts = np.linspace(0.0, L, 65)
    vals = np.array([obj.value(b + t * v0) for t in ts])
    i = int(np.argmax(vals))
    if i == 0 or i == len(ts) - 1:
        raise BadEndpoints("f has no interior line-local max on [a, b]")
    lo, mid, hi = ts[i - 1], ts[i], ts[i + 1]
    phi = lambda t: obj.value(b + t * v0)
    dphi = lambda t: float(obj.gradient(b + t * v0) @ v0)
    from .line1d import _refine_max  # shared polishing kernel
    t_star = _refine_max(phi, dphi, lo, mid, hi, GRAD_TOL_1D)
    m = b + t_star * v0
    f_star = phi(t_star)

    fa, fb = obj.value(a), obj.value(b)
    level = max(fa, fb)
    if f_star <= level:
        raise BadEndpoints("ridge does not rise above the endpoint level")

    t2 = _bisect_chord_crossing(obj, m, v0, level, 0.0, L - t_star,
                                config.root_tol)
    t1 = _bisect_chord_crossing(obj, m, v0, level, 0.0, -t_star,
                                config.root_tol)
    section = LineSection(m, v0, level, float(t1), float(t2))
    return state_from_section(section, region, 0, "Init")


def solve(obj: Objective, a: np.ndarray, b: np.ndarray,
          config: Optional[SolveConfig] = None) -> SolveReport:
    """Run the level-set saddle search between the endpoints a and b.

    Returns a report whose status is SaddleFound only when the final point
    satisfies |grad f| <= gtol and its Hessian has Morse index one. The trace
    records one entry per iteration. The solve is deterministic: identical
    inputs produce identical traces.
    """
    if config is None:
        config = SolveConfig()
    watch = _GradientWatch(obj)
    wobj = watch.obj
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    region = TrustRegion(0.5 * (a + b), config.radius)
    trace: list[TraceRecord] = []

    def finish(status: str, x: np.ndarray, iterations: int, message: str) -> SolveReport:
        x = np.asarray(x, dtype=float)
        gn = float(np.linalg.norm(obj.gradient(x)))
        idx = _morse_at(obj, x)
        if status == "SaddleFound" and not (gn <= config.gtol and idx == 1):
            status = "Stalled"
            message = (message + "; candidate failed certification").strip("; ")
        return SolveReport(status=status, x=x, f=obj.value(x), grad_norm=gn,
                           morse_index=idx, iterations=iterations,
                           eval_counts=obj.eval_counts(), trace=trace,
                           message=message)

    def polish(x0: np.ndarray, iterations: int, origin: str) -> Optional[SolveReport]:
        try:
            nr = newton_refine(wobj, x0, region, gtol=config.gtol, max_iter=40)
        except NewtonBreakdown:
            return None
        if nr.converged and nr.morse_index == 1 and region.contains(nr.x):
            return finish("SaddleFound", nr.x, iterations, origin)
        return None

    state = init_state(wobj, a, b, config, region)
    failures = 0
    it = 0
    for it in range(config.max_iter):
        gz = wobj.gradient(state.z)
        gzp = wobj.gradient(state.zp)
        gap = state.gap
        trace.append(TraceRecord(
            iteration=it, step=state.last_step, level=state.level,
            g=gap, gap=gap,
            grad_norm_z=float(np.linalg.norm(gz)),
            grad_norm_zp=float(np.linalg.norm(gzp)),
            x=[float(c) for c in state.x]))
        logger.debug("it=%d step=%s level=%.6g gap=%.3e", it, state.last_step,
                     state.level, gap)

        # Stop 1: a small gradient was observed anywhere.
        if watch.best_norm <= config.gtol:
            report = polish(watch.best_x, it, "small gradient observed")
            if report is not None:
                return report
            watch.reset()  # candidate was not an index-one saddle; keep going

        # Stop 2: endpoints nearly coincide and the gradient hull reaches 0.
        if gap <= config.xtol and hull_distance(gz, gzp) <= config.hull_tol:
            samples = [state.zp + s * (state.z - state.zp)
                       for s in np.linspace(0.0, 1.0, _EXTRAPOLATION_SAMPLES)]
            norms = [float(np.linalg.norm(wobj.gradient(p))) for p in samples]
            x_best = samples[int(np.argmin(norms))]
            report = polish(x_best, it, "endpoint gap closed")
            if report is not None:
                return report
            # certification inside finish() downgrades to Stalled if the
            # extrapolated point is not an index-one saddle
            return finish("SaddleFound", x_best, it, "endpoint gap closed")

        # Newton handoff once the endpoints are close.
        if 0.0 < gap < config.newton_handoff_gap:
            report = polish(state.midpoint, it, "newton handoff")
            if report is not None:
                return report

        # Level-set step. A failed iteration leaves the state unchanged and
        # counts toward the consecutive-failure budget; any clean step resets.
        failed = None
        try:
            outcome = step_pd(state, wobj, root_tol=config.root_tol,
                              denom_tol=config.denom_tol)
        except (DegenerateDenominator, CrossingOutsideRegion, NoLineMax) as err:
            outcome = None
            failed = str(err)

        if isinstance(outcome, ReducedSegment):
            new_state = outcome.state
            if outcome.g_new <= (1.0 - config.eta) * outcome.g_old:
                # Case 1a: real progress; re-align the chord.
                try:
                    new_state = step_av(new_state, wobj, root_tol=config.root_tol)
                except AvStalled:
                    pass  # already aligned; the reduction still counts
            else:
                # Case 1b: little progress at this level; raise it.
                try:
                    new_state = step_l_up(new_state, wobj, root_tol=config.root_tol)
                except (LUpImpossible, CrossingOutsideRegion, NoLineMax) as err:
                    failed = f"level raise failed: {err}"
            state = replace(new_state, iteration=it + 1)
        elif isinstance(outcome, HitZero):
            # Case 1c: the segment collapsed; lower the level.
            try:
                _, _, section = step_l_down(
                    wobj, outcome.x_prime, state.v, region,
                    root_tol=config.root_tol)
                state = state_from_section(section, region, it + 1, "LDown")
            except CriticalCandidate as cand:
                report = polish(cand.x, it, "critical candidate from l-down")
                if report is not None:
                    return report
                failed = "critical candidate was not an index-one saddle"
                state = replace(state, iteration=it + 1, last_step="LDown")
            except (CrossingOutsideRegion, NoLineMax) as err:
                failed = f"l-down failed: {err}"
                state = replace(state, iteration=it + 1, last_step="LDown")
        elif isinstance(outcome, PdStalled):
            failed = "parallel-distance reduction stalled"
            rescued = _rescue_l_up(state, wobj, config)
            if rescued is not None:
                state = replace(rescued, iteration=it + 1)
            else:
                state = replace(state, iteration=it + 1)
        elif failed is not None:
            # (PD) itself raised; a level raise sometimes repairs the state.
            logger.debug("PD failed: %s", failed)
            rescued = _rescue_l_up(state, wobj, config)
            if rescued is not None:
                state = replace(rescued, iteration=it + 1)
            else:
                state = replace(state, iteration=it + 1)

        if failed is None:
            failures = 0
        else:
            failures += 1
            if failures >= _MAX_CONSECUTIVE_FAILURES:
                return finish("Breakdown", state.midpoint, it, failed)

    return finish("MaxIter", state.midpoint, config.max_iter,
                  "iteration limit reached")


def _rescue_l_up(state: SolverState, obj: Objective,
                 config: SolveConfig) -> Optional[SolverState]:
    """Attempt a level raise after a failed or stalled (PD) step."""
    try:
        return step_l_up(state, obj, root_tol=config.root_tol)
    except (LUpImpossible, CrossingOutsideRegion, NoLineMax):
        return None


def _morse_at(obj: Objective, x: np.ndarray) -> int:
    from .quadmodel import morse_index
    return morse_index(obj.hessian(x))
