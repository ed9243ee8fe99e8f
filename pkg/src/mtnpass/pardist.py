"""Parallel distance: diameter of the line section of a super-level set.

For a unit direction v and level l, g(x) is the diameter of the section of
{f >= l} cut by the line through x along v (zero when the section is empty).
This module evaluates g, g^2 and the first and second derivatives of g^2
from the gradients and Hessians of f at the two section endpoints, and
provides the exact closed form of g^2 for quadratic objectives.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import quadmodel
from .errors import DegenerateDenominator, NoEstimate, NotConcaveAlongV
from .line1d import ROOT_TOL, LineSection, find_level_crossings
from .objective import Objective, TrustRegion

DENOM_TOL = 1e-8  # relative to |grad f(z)|; below this the division is meaningless


@dataclass(frozen=True)
class ParallelDistanceEval:
    """g, g^2 and derivatives of g^2, plus the endpoint data they came from.

    Derivative fields are None when the section is empty. hess_g2 is None
    unless requested. The denominators are v'grad f at the two endpoints;
    they carry opposite signs for a proper segment (f is decreasing in v at
    z and increasing at z').
    """

    section: LineSection
    g: float
    g2: float
    grad_g: Optional[np.ndarray] = None
    grad_g2: Optional[np.ndarray] = None
    hess_g2: Optional[np.ndarray] = None
    grad_f_z: Optional[np.ndarray] = None
    grad_f_zp: Optional[np.ndarray] = None
    denom_z: Optional[float] = None
    denom_zp: Optional[float] = None


def _endpoint_denominator(grad_f: np.ndarray, v: np.ndarray, denom_tol: float,
                          where: str) -> float:
    d = float(grad_f @ v)
    gn = float(np.linalg.norm(grad_f))
    if gn == 0.0 or abs(d) < denom_tol * gn:
        raise DegenerateDenominator(
            f"v is nearly tangent to the level set at {where} "
            f"(|v'grad f| = {abs(d):.3e}, |grad f| = {gn:.3e})")
    return d


def derivatives_from_section(obj: Objective, section: LineSection,
                             want_hessian: bool = False,
                             denom_tol: float = DENOM_TOL) -> ParallelDistanceEval:
    """Evaluate g, g^2 and derivatives of g^2 from an existing section."""
    if section.empty:
        return ParallelDistanceEval(section=section, g=0.0, g2=0.0)
    v = section.v
    z, zp = section.z, section.zp
    gz = obj.gradient(z)
    gzp = obj.gradient(zp)
    dz = _endpoint_denominator(gz, v, denom_tol, "z")
    dzp = _endpoint_denominator(gzp, v, denom_tol, "z'")
    g = section.diam
    grad_g = -gz / dz + gzp / dzp
    grad_g2 = 2.0 * g * grad_g
    hess_g2 = None
    if want_hessian:
        n = v.size
        I = np.eye(n)
        Az = I - np.outer(gz, v) / dz
        Azp = I - np.outer(gzp, v) / dzp
        Hz = obj.hessian(z)
        Hzp = obj.hessian(zp)
        hess_g = -Az @ Hz @ Az.T / dz + Azp @ Hzp @ Azp.T / dzp
        hess_g2 = 2.0 * np.outer(grad_g, grad_g) + 2.0 * g * hess_g
        hess_g2 = 0.5 * (hess_g2 + hess_g2.T)
    return ParallelDistanceEval(
        section=section, g=g, g2=g * g,
        grad_g=grad_g, grad_g2=grad_g2, hess_g2=hess_g2,
        grad_f_z=gz, grad_f_zp=gzp, denom_z=dz, denom_zp=dzp)


def eval_pardist(obj: Objective, x: np.ndarray, v: np.ndarray, level: float,
                 region: TrustRegion, want_hessian: bool = False,
                 root_tol: float = ROOT_TOL,
                 denom_tol: float = DENOM_TOL) -> ParallelDistanceEval:
    """Parallel distance at x: root-find the section, then apply the formulas.

    Raises DegenerateDenominator when v is nearly tangent to the level set at
    an endpoint; callers should adjust the level or the direction. An empty
    section gives g = 0 with no derivatives.
    """
    section = find_level_crossings(obj, x, v, level, region, root_tol=root_tol)
    return derivatives_from_section(obj, section, want_hessian=want_hessian,
                                    denom_tol=denom_tol)


def _coefficients(model) -> tuple[np.ndarray, np.ndarray, float]:
    H = np.asarray(model.H, dtype=float)
    g = np.asarray(model.g, dtype=float)
    return H, g, float(model.c)


def closed_form_g2_quadratic(model, x: np.ndarray, v: np.ndarray,
                             level: float) -> tuple[float, np.ndarray, np.ndarray]:
    """Exact g^2 with gradient and Hessian for a quadratic 0.5 x'Hx + g'x + c.

    `model` is anything carrying H, g, c (a QuadraticModel or a
    QuadraticObjective). Requires v'Hv < 0, else NotConcaveAlongV. On the
    branch where the section is empty, g^2 and its derivatives are zero (the
    minimal-norm subgradient at the seam).

        g^2 = max(0, 4/(v'Hv)^2 [ x'(Hvv'H - (v'Hv)H)x
                                  + 2((g'v)v'H - (v'Hv)g')x
                                  + (g'v)^2 + (v'Hv)(2*level - 2c) ])
    """
    H, g, c = _coefficients(model)
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    n = x.size
    alpha = float(v @ H @ v)
    if alpha >= 0.0:
        raise NotConcaveAlongV(f"v'Hv = {alpha:.3e} is not negative")
    Hv = H @ v
    gv = float(g @ v)
    A = np.outer(Hv, Hv) - alpha * H
    b = gv * Hv - alpha * g
    kappa = gv * gv + alpha * (2.0 * level - 2.0 * c)
    bracket = float(x @ A @ x + 2.0 * b @ x + kappa)
    scale = 4.0 / alpha ** 2
    if bracket <= 0.0:
        return 0.0, np.zeros(n), np.zeros((n, n))
    g2 = scale * bracket
    grad = scale * (2.0 * A @ x + 2.0 * b)
    hess = 2.0 * scale * A
    return g2, grad, 0.5 * (hess + hess.T)


def estimate_critical_level(model, v: np.ndarray) -> float:
    """Level at which the minimum of the closed-form bracket equals zero.

    For an exact quadratic this recovers the critical value of the model:
    the minimizer of g^2 touches zero exactly when the level reaches the
    value of f at the saddle. Raises NoEstimate when the quadratic part of
    the bracket is not positive semidefinite on the complement of v.
    """
    H, g, c = _coefficients(model)
    v = np.asarray(v, dtype=float)
    alpha = float(v @ H @ v)
    if alpha >= 0.0:
        raise NotConcaveAlongV(f"v'Hv = {alpha:.3e} is not negative")
    Hv = H @ v
    gv = float(g @ v)
    A = np.outer(Hv, Hv) - alpha * H
    b = gv * Hv - alpha * g
    evals, evecs = quadmodel.decompose(A)
    scale = float(np.max(np.abs(evals))) if evals.size else 0.0
    if scale == 0.0:
        raise NoEstimate("quadratic part of the bracket vanishes")
    zero_tol = 1e-10 * scale
    if evals[-1] < -zero_tol:
        raise NoEstimate("quadratic part of the bracket is indefinite")
    # Pseudo-inverse solve of A y = b on the range of A.
    coeffs = evecs.T @ b
    keep = evals > zero_tol
    y = evecs[:, keep] @ (coeffs[keep] / evals[keep])
    if np.linalg.norm(A @ y - b) > 1e-8 * max(1.0, np.linalg.norm(b)):
        raise NoEstimate("linear term is outside the range of the quadratic part")
    return c + (float(b @ y) - gv * gv) / (2.0 * alpha)
