"""Numerical verification suites for the parallel-distance machinery.

Three families of checks: derivative formulas of g^2 against finite
differences of the root-finding evaluation, stability of the Hessian of g^2
near a saddle against the constant reference Hessian predicted by the local
quadratic model, and convexity probes of g^2 (midpoint tests and reduced
eigenvalues). All suites are deterministic under a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CrossingOutsideRegion, MtnpassError, NoLineMax
from .line1d import find_level_crossings
from .objective import Objective, QuadraticObjective, TrustRegion, six_hump_camel
from .pardist import closed_form_g2_quadratic, eval_pardist
from .quadmodel import decompose, generate_morse1, saddle_of
from .subroutines import _complement_basis

ADMISSIBLE_MIN_G = 0.1
ADMISSIBLE_MIN_DENOM = 0.1
FD_G2_GRAD_STEP = 1e-5
FD_G2_HESS_STEP = 1e-4


def numeric_g2(obj: Objective, x: np.ndarray, v: np.ndarray, level: float,
               region: TrustRegion) -> Optional[float]:
    """g^2 by root finding alone; None when the section escapes the region."""
    try:
        section = find_level_crossings(obj, x, v, level, region)
    except (CrossingOutsideRegion, NoLineMax):
        return None
    return section.diam ** 2


def fd_grad_g2(obj, x, v, level, region, step=FD_G2_GRAD_STEP):
    """Central differences of the root-finding g^2; None if any probe fails."""
    x = np.asarray(x, dtype=float)
    h = step * max(1.0, float(np.max(np.abs(x))))
    grad = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        fp = numeric_g2(obj, x + e, v, level, region)
        fm = numeric_g2(obj, x - e, v, level, region)
        if fp is None or fm is None:
            return None
        grad[i] = (fp - fm) / (2.0 * h)
    return grad


def fd_hess_g2(obj, x, v, level, region, step=FD_G2_HESS_STEP):
    """Second central differences of the root-finding g^2 (upper triangle)."""
    x = np.asarray(x, dtype=float)
    h = step * max(1.0, float(np.max(np.abs(x))))
    n = x.size
    H = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            ei = np.zeros(n); ei[i] = h
            ej = np.zeros(n); ej[j] = h
            vals = [numeric_g2(obj, x + ei + ej, v, level, region),
                    numeric_g2(obj, x + ei - ej, v, level, region),
                    numeric_g2(obj, x - ei + ej, v, level, region),
                    numeric_g2(obj, x - ei - ej, v, level, region)]
            if any(val is None for val in vals):
                return None
            H[i, j] = H[j, i] = (vals[0] - vals[1] - vals[2] + vals[3]) / (4.0 * h * h)
    return H


@dataclass
class GradFormulaReport:
    n_cases: int = 0
    n_skipped: int = 0
    n_failures: int = 0
    max_rel_grad_err: float = 0.0
    max_rel_hess_err: float = 0.0
    grad_tol: float = 1e-4
    hess_tol: float = 1e-4

    def to_dict(self) -> dict:
        return {"n_cases": self.n_cases, "n_skipped": self.n_skipped,
                "n_failures": self.n_failures,
                "max_rel_grad_err": self.max_rel_grad_err,
                "max_rel_hess_err": self.max_rel_hess_err,
                "grad_tol": self.grad_tol, "hess_tol": self.hess_tol}


def _admissible(pe) -> bool:
    return (pe.g > ADMISSIBLE_MIN_G
            and abs(pe.denom_z) > ADMISSIBLE_MIN_DENOM
            and abs(pe.denom_zp) > ADMISSIBLE_MIN_DENOM)


def quadratic_sample_cases(n_cases: int = 50, seed: int = 0) -> list[dict]:
    """Admissible (objective, x, v, level, region) samples on random models."""
    rng = np.random.default_rng(seed)
    cases = []
    k = 0
    while len(cases) < n_cases and k < 50 * n_cases:
        k += 1
        n = 2 + k % 5
        model = generate_morse1(n, seed=seed * 100000 + k)
        xbar, fbar = saddle_of(model)
        vbar = model.negative_eigenvector
        lam_n = model.eigenvalues[-1]
        v = vbar + 0.2 * rng.standard_normal(n)
        v /= np.linalg.norm(v)
        if float(v @ model.H @ v) >= 0.2 * lam_n:
            continue
        x = xbar + 0.3 * rng.standard_normal(n) / np.sqrt(n)
        level = fbar - rng.uniform(0.05, 0.5)
        obj = model.as_objective()
        region = TrustRegion(x, 50.0)
        try:
            pe = eval_pardist(obj, x, v, level, region)
        except MtnpassError:
            continue
        if pe.section.empty or not _admissible(pe):
            continue
        cases.append({"obj": obj, "x": x, "v": v, "level": level,
                      "region": region, "label": f"quadratic-{k}"})
    return cases


def camel_sample_cases(n_cases: int = 20, seed: int = 0) -> list[dict]:
    """Admissible samples near the origin saddle of the camel function."""
    rng = np.random.default_rng(seed + 1)
    camel = six_hump_camel()
    _, evecs = decompose(camel.hessian(np.zeros(2)))
    vbar = evecs[:, -1]
    region = TrustRegion(np.zeros(2), 10.0)
    cases = []
    k = 0
    while len(cases) < n_cases and k < 50 * n_cases:
        k += 1
        v = vbar + 0.1 * rng.standard_normal(2)
        v /= np.linalg.norm(v)
        x = 0.25 * rng.standard_normal(2)
        level = -rng.uniform(0.05, 0.3)
        try:
            pe = eval_pardist(camel, x, v, level, region)
        except MtnpassError:
            continue
        if pe.section.empty or not _admissible(pe):
            continue
        cases.append({"obj": camel, "x": x, "v": v, "level": level,
                      "region": region, "label": f"camel-{k}"})
    return cases


def check_grad_formulas(cases: list[dict], grad_tol: float = 1e-4,
                        hess_tol: float = 1e-4) -> GradFormulaReport:
    """Compare the endpoint-formula grad/hess of g^2 with finite differences.

    Relative errors are guarded: |diff| / (1 + |analytic|). Samples where the
    denominators degenerate or a finite-difference probe escapes the region
    are counted as skipped, not failed.
    """
    report = GradFormulaReport(grad_tol=grad_tol, hess_tol=hess_tol)
    for case in cases:
        obj, x, v = case["obj"], case["x"], case["v"]
        level, region = case["level"], case["region"]
        try:
            pe = eval_pardist(obj, x, v, level, region, want_hessian=True)
        except MtnpassError:
            report.n_skipped += 1
            continue
        if pe.section.empty or not _admissible(pe):
            report.n_skipped += 1
            continue
        fd_g = fd_grad_g2(obj, x, v, level, region)
        fd_h = fd_hess_g2(obj, x, v, level, region)
        if fd_g is None or fd_h is None:
            report.n_skipped += 1
            continue
        ge = float(np.linalg.norm(pe.grad_g2 - fd_g)
                   / (1.0 + np.linalg.norm(pe.grad_g2)))
        he = float(np.linalg.norm(pe.hess_g2 - fd_h)
                   / (1.0 + np.linalg.norm(pe.hess_g2)))
        report.n_cases += 1
        report.max_rel_grad_err = max(report.max_rel_grad_err, ge)
        report.max_rel_hess_err = max(report.max_rel_hess_err, he)
        if ge > grad_tol or he > hess_tol:
            report.n_failures += 1
    return report


def reference_hessian(H: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Constant Hessian of g^2 predicted by the quadratic model at the saddle."""
    alpha = float(v @ H @ v)
    Hv = H @ v
    return (8.0 / alpha ** 2) * (np.outer(Hv, Hv) - alpha * H)


@dataclass
class QuadraticComparison:
    v_label: str
    scale: float
    offset: float
    level_gap: float
    vector_gap: float
    deviation: float
    href_norm: float
    href: Optional[np.ndarray] = field(default=None, repr=False)
    measured: Optional[np.ndarray] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        # matrices are kept on the object but left out of serialized reports
        return {"v_label": self.v_label, "scale": self.scale,
                "offset": self.offset, "level_gap": self.level_gap,
                "vector_gap": self.vector_gap, "deviation": self.deviation,
                "href_norm": self.href_norm}


@dataclass
class StabilityReport:
    applicable: bool
    reason: str = ""
    comparisons: list = field(default_factory=list)

    def by_v(self, v_label: str) -> list:
        return [c for c in self.comparisons if c.v_label == v_label]

    def trend_ok(self, v_label: str, growth_factor: float = 1.5,
                 final_frac: float = 1e-2) -> bool:
        """Deviations non-increasing within the factor and small at the end."""
        comps = self.by_v(v_label)
        if not comps:
            return False
        devs = [c.deviation for c in comps]
        for prev, cur in zip(devs, devs[1:]):
            if cur > growth_factor * max(prev, 1e-300):
                return False
        return devs[-1] <= final_frac * comps[-1].href_norm

    def to_dict(self) -> dict:
        return {"applicable": self.applicable, "reason": self.reason,
                "comparisons": [c.to_dict() for c in self.comparisons]}


def check_hessian_stability(obj: Objective, xbar: np.ndarray,
                            n_scales: int = 8, r0: float = 0.5,
                            e0: Optional[float] = None,
                            v_gap: float = 0.05,
                            region_radius: float = 2.0,
                            scale_start: int = 2) -> StabilityReport:
    """Deviation of the measured hess(g^2) from the quadratic-model reference.

    Sweeps a geometric sequence of scales s = 2^-scale_start, ... (factor
    1/2, n_scales levels): the base point is offset from the critical point
    by s*r0 along the leading positive eigenvector and the level sits s*e0
    below the critical value. Both the aligned direction (the negative
    eigenvector) and one perturbed by v_gap are measured. Reports
    NotApplicable when the critical point is degenerate or not of Morse
    index one. On an exact quadratic the measured Hessian is the closed
    form, so deviations are identically zero. The sweep must start inside
    the regime where the section is a single segment; the default skips the
    first octave, which on desk-scale functions can drop the level below
    neighboring basins.
    """
    xbar = np.asarray(xbar, dtype=float)
    H = obj.hessian(xbar)
    evals, evecs = decompose(H)
    scale = float(np.max(np.abs(evals)))
    if scale == 0.0 or float(np.min(np.abs(evals))) < 1e-8 * scale:
        return StabilityReport(False, "degenerate critical point")
    if int(np.sum(evals < 0)) != 1:
        return StabilityReport(False,
                               f"Morse index {int(np.sum(evals < 0))} is not one")
    vbar = evecs[:, -1]
    u = evecs[:, 0]
    lam_n = evals[-1]
    if e0 is None:
        e0 = 0.25 * abs(lam_n)
    fbar = obj.value(xbar)
    # Perturbed direction at chord distance v_gap from vbar, inside the span
    # of vbar and the leading eigenvector.
    theta = 2.0 * np.arcsin(v_gap / 2.0)
    v_pert = np.cos(theta) * vbar + np.sin(theta) * u

    report = StabilityReport(True)
    region = TrustRegion(xbar, region_radius)
    for v_label, v in (("aligned", vbar), ("perturbed", v_pert)):
        href = reference_hessian(H, v)
        href_norm = float(np.linalg.norm(href))
        for k in range(scale_start, scale_start + n_scales):
            s = 0.5 ** k
            x = xbar + s * r0 * u
            level = fbar - s * e0
            if isinstance(obj, QuadraticObjective):
                _, _, measured = closed_form_g2_quadratic(obj, x, v, level)
            else:
                pe = eval_pardist(obj, x, v, level, region, want_hessian=True)
                measured = pe.hess_g2
            dev = float(np.linalg.norm(measured - href))
            report.comparisons.append(QuadraticComparison(
                v_label=v_label, scale=s, offset=float(s * r0),
                level_gap=float(s * e0),
                vector_gap=float(np.linalg.norm(v - vbar)),
                deviation=dev, href_norm=href_norm,
                href=href, measured=measured))
    return report


@dataclass
class ConvexityReport:
    radius: float
    level: float
    n_pairs: int = 0
    n_skipped: int = 0
    n_violations: int = 0
    max_violation: float = 0.0
    min_reduced_eig: Optional[float] = None
    n_eig_samples: int = 0

    def to_dict(self) -> dict:
        return {"radius": self.radius, "level": self.level,
                "n_pairs": self.n_pairs, "n_skipped": self.n_skipped,
                "n_violations": self.n_violations,
                "max_violation": self.max_violation,
                "min_reduced_eig": self.min_reduced_eig,
                "n_eig_samples": self.n_eig_samples}


def check_convexity_region(obj: Objective, center: np.ndarray, level: float,
                           v: np.ndarray, radius: float, n_pairs: int = 100,
                           seed: int = 0, region: Optional[TrustRegion] = None,
                           slack: float = 1e-10,
                           with_eigenvalues: bool = False) -> ConvexityReport:
    """Midpoint-convexity probe of g^2 on random pairs in a ball.

    A pair (a, b) is a violation when g^2 at the midpoint exceeds the mean of
    the endpoint values by more than the slack. Points whose section escapes
    the region are skipped. Optionally also reports the minimum eigenvalue of
    hess(g^2) restricted to the complement of v over the sampled points with
    positive g (samples with degenerate denominators are skipped).
    """
    center = np.asarray(center, dtype=float)
    if region is None:
        region = TrustRegion(center, max(2.0, 4.0 * radius))
    rng = np.random.default_rng(seed)
    n = center.size
    report = ConvexityReport(radius=radius, level=level)
    B = _complement_basis(np.asarray(v, dtype=float))

    def draw() -> np.ndarray:
        u = rng.standard_normal(n)
        u /= np.linalg.norm(u)
        return center + radius * rng.uniform(0.0, 1.0) ** (1.0 / n) * u

    for _ in range(n_pairs):
        a, b = draw(), draw()
        vals = [numeric_g2(obj, p, v, level, region)
                for p in (a, b, 0.5 * (a + b))]
        if any(val is None for val in vals):
            report.n_skipped += 1
            continue
        report.n_pairs += 1
        violation = vals[2] - 0.5 * (vals[0] + vals[1])
        if violation > slack:
            report.n_violations += 1
            report.max_violation = max(report.max_violation, float(violation))
        if with_eigenvalues:
            for p in (a, b):
                try:
                    pe = eval_pardist(obj, p, v, level, region, want_hessian=True)
                except MtnpassError:
                    continue
                if pe.section.empty or pe.g <= 1e-6:
                    continue
                red = B.T @ pe.hess_g2 @ B
                lam_min = float(decompose(red)[0][-1])
                report.n_eig_samples += 1
                if report.min_reduced_eig is None or lam_min < report.min_reduced_eig:
                    report.min_reduced_eig = lam_min
    return report


def convexity_radius_sweep(obj: Objective, center: np.ndarray, v: np.ndarray,
                           levels: list[float], radii: Optional[np.ndarray] = None,
                           n_pairs: int = 60, seed: int = 0,
                           region: Optional[TrustRegion] = None) -> dict:
    """Largest prefix of the radius grid that is violation-free, per level.

    For each level the radii are probed in increasing order with identical
    seeds; the recorded radius is the largest one below the first violation.
    """
    center = np.asarray(center, dtype=float)
    if radii is None:
        radii = np.linspace(0.02, 0.8, 40)
    if region is None:
        region = TrustRegion(center, 2.0)
    out = {}
    for level in levels:
        r_clear = 0.0
        for r in radii:
            rep = check_convexity_region(obj, center, level, v, float(r),
                                         n_pairs=n_pairs, seed=seed,
                                         region=region)
            if rep.n_violations > 0:
                break
            r_clear = float(r)
        out[level] = r_clear
    return out


def quadratic_oracle_suite(n_models: int = 200, seed: int = 0,
                           tol: float = 1e-8) -> dict:
    """Root-finding g^2 against the closed form on seeded random models.

    The report carries no timings so identical seeds give identical output.
    """
    rng = np.random.default_rng(seed)
    max_err = 0.0
    failures = 0
    for k in range(n_models):
        n = 2 + k % 5
        model = generate_morse1(n, seed=seed * 100000 + 7919 + k)
        xbar, fbar = saddle_of(model)
        vbar = model.negative_eigenvector
        lam_n = model.eigenvalues[-1]
        while True:
            v = vbar + 0.2 * rng.standard_normal(n)
            v /= np.linalg.norm(v)
            if float(v @ model.H @ v) < 0.2 * lam_n:
                break
        x = xbar + 0.3 * rng.standard_normal(n) / np.sqrt(n)
        level = fbar - rng.uniform(0.05, 0.5)
        obj = model.as_objective()
        region = TrustRegion(x, 50.0)
        pe = eval_pardist(obj, x, v, level, region)
        g2_closed, _, _ = closed_form_g2_quadratic(model, x, v, level)
        err = abs(pe.g2 - g2_closed) / (1.0 + g2_closed)
        max_err = max(max_err, err)
        if err > tol:
            failures += 1
    return {"suite": "quadratic-oracle", "n_models": n_models, "seed": seed,
            "tol": tol, "max_rel_err": max_err, "failures": failures}


def run_suite(name: str, seed: int = 0) -> dict:
    """Run a named verification suite; the result carries a failure count."""
    if name == "quadratic-oracle":
        return quadratic_oracle_suite(seed=seed)
    if name == "grad-formulas":
        cases = quadratic_sample_cases(50, seed) + camel_sample_cases(20, seed)
        report = check_grad_formulas(cases)
        out = report.to_dict()
        out.update({"suite": "grad-formulas", "seed": seed,
                    "failures": report.n_failures})
        return out
    if name == "hessian-stability":
        camel = six_hump_camel()
        rep_camel = check_hessian_stability(camel, np.zeros(2))
        model = generate_morse1(3, seed=seed + 11)
        xbar, _ = saddle_of(model)
        rep_quad = check_hessian_stability(model.as_objective(), xbar)
        failures = 0
        for rep in (rep_camel, rep_quad):
            if not rep.applicable:
                failures += 1
                continue
            for v_label in ("aligned", "perturbed"):
                if not rep.trend_ok(v_label):
                    failures += 1
        quad_devs = [c.deviation for c in rep_quad.comparisons]
        if any(d != 0.0 for d in quad_devs):
            failures += 1
        return {"suite": "hessian-stability", "seed": seed, "failures": failures,
                "camel": rep_camel.to_dict(), "quadratic": rep_quad.to_dict()}
    if name == "convexity":
        failures = 0
        model = generate_morse1(3, seed=seed + 23)
        xbar, fbar = saddle_of(model)
        rep_q = check_convexity_region(
            model.as_objective(), xbar, fbar - 0.3,
            model.negative_eigenvector, radius=0.5, n_pairs=100, seed=seed,
            region=TrustRegion(xbar, 50.0), with_eigenvalues=True)
        if rep_q.n_violations > 0:
            failures += 1
        if rep_q.min_reduced_eig is not None and rep_q.min_reduced_eig <= 0:
            failures += 1
        camel = six_hump_camel()
        _, evecs = decompose(camel.hessian(np.zeros(2)))
        rep_c = check_convexity_region(
            camel, np.zeros(2), -0.05, evecs[:, -1], radius=0.1,
            n_pairs=100, seed=seed, region=TrustRegion(np.zeros(2), 10.0))
        if rep_c.n_violations > 0:
            failures += 1
        from .objective import tightness2d
        tight = tightness2d()
        _, tevecs = decompose(tight.hessian(np.zeros(2)))
        sweep = convexity_radius_sweep(
            tight, np.zeros(2), tevecs[:, -1],
            levels=[-0.1, -0.01, -0.001], seed=seed)
        radii = [sweep[l] for l in (-0.1, -0.01, -0.001)]
        if not (radii[0] > radii[1] > radii[2]):
            failures += 1
        return {"suite": "convexity", "seed": seed, "failures": failures,
                "quadratic": rep_q.to_dict(), "camel": rep_c.to_dict(),
                "tightness_sweep": {str(k): v for k, v in sweep.items()}}
    raise ValueError(f"unknown verification suite {name!r}")
