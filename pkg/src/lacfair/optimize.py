"""Box-constrained least-squares refinement of the discrete LAC parameters."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .discrete import (
    THETA_FIELDS,
    ThetaParams,
    point_jacobian,
    reconstruct,
    segment_from_theta,
    value_and_gradient,
)
from .errors import FeasibilityError, LacError
from .geometry import CanonicalTransform, DiscreteCurve, apply_transform, transform_points
from .recovery import initial_guess


@dataclass(frozen=True)
class BoxConstraints:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        if not np.all(self.lower <= self.upper):
            raise LacError("box lower bounds exceed upper bounds")

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def project(self, x):
        return np.clip(x, self.lower, self.upper)


def make_box(theta_bar: ThetaParams, fraction: float = 0.1, diag: float = 1.0) -> BoxConstraints:
    """Box of relative half-width ``fraction`` around the initial guess.

    Bounds are ``theta_i -/+ fraction*|theta_i|``. A zero component gets an
    absolute half-width instead: ``fraction*max(1, diag)`` for the start point
    (``diag`` is the curve's bounding-box diagonal), ``fraction`` otherwise.
    """
    if not fraction > 0:
        raise LacError("box fraction must be positive")
    x = theta_bar.as_array()
    width = fraction * np.abs(x)
    fallback = np.full(7, fraction)
    fallback[:2] = fraction * max(1.0, diag)
    width = np.where(width > 0, width, fallback)
    return BoxConstraints(lower=x - width, upper=x + width)


@dataclass(frozen=True)
class OptimizerSettings:
    max_iterations: int = 5000
    grad_tol: float = 1e-8
    step_shrink: float = 0.5
    armijo_c: float = 1e-4
    min_step: float = 1e-16

    def __post_init__(self):
        if not (self.max_iterations > 0 and self.grad_tol > 0 and self.min_step > 0):
            raise LacError("optimizer settings must be positive")
        if not 0 < self.step_shrink < 1:
            raise LacError("step_shrink must lie in (0, 1)")
        if not 0 < self.armijo_c < 1:
            raise LacError("armijo_c must lie in (0, 1)")


class Termination(str, enum.Enum):
    GRAD_TOL = "GradTol"
    MAX_ITER = "MaxIter"
    STEP_UNDERFLOW = "StepUnderflow"
    BOX_BOUND = "BoxBound"


@dataclass
class FitReport:
    theta_initial: ThetaParams
    theta_final: ThetaParams
    transform: CanonicalTransform
    objective_trace: list = field(default_factory=list)
    rms_distance: float = math.nan
    termination: Termination = Termination.MAX_ITER
    iterations: int = 0

    @property
    def objective(self):
        return self.objective_trace[-1]

    def to_dict(self):
        def seg(theta):
            try:
                return segment_from_theta(theta).to_dict()
            except LacError:
                return None

        return {
            "transform": self.transform.value,
            "theta_order": list(THETA_FIELDS),
            "theta_initial": self.theta_initial.to_dict(),
            "theta_final": self.theta_final.to_dict(),
            "segment_initial": seg(self.theta_initial),
            "segment_final": seg(self.theta_final),
            "objective_initial": self.objective_trace[0],
            "objective_final": self.objective_trace[-1],
            "rms_distance": self.rms_distance,
            "iterations": self.iterations,
            "termination": self.termination.value,
        }


def minimize(target, theta0: ThetaParams, box: BoxConstraints,
             settings: OptimizerSettings | None = None, transform=CanonicalTransform.IDENTITY) -> FitReport:
    """Projected gradient descent with Armijo backtracking inside ``box``.

    Each variable is scaled by the inverse norm of its Jacobian column at
    ``theta0`` (diagonal Gauss-Newton preconditioning); trial steps use the
    Barzilai-Borwein length and shrink until the Armijo condition holds.
    Points outside the admissible set score +inf and are backtracked from.
    """
    settings = settings or OptimizerSettings()
    pts = target.points if isinstance(target, DiscreteCurve) else np.asarray(target, float)
    N = theta0.N
    if len(pts) != N:
        raise LacError(f"target has {len(pts)} points, parameters expect N={N}")
    theta0.check_feasible()
    x = theta0.as_array()
    if not box.contains(x):
        raise FeasibilityError("initial parameters lie outside the box")

    d = _scales(x, N)
    lo, hi = box.lower / d, box.upper / d

    def evaluate(u):
        f, g = value_and_gradient(u * d, N, pts)
        return f, (None if g is None else g * d)

    u = x / d
    f, g = evaluate(u)
    trace = [f]
    termination = Termination.MAX_ITER
    step = 1.0 / max(np.max(np.abs(g)), 1e-300)
    k = 0
    for k in range(settings.max_iterations):
        if np.max(np.abs(g / d)) <= settings.grad_tol:
            termination = Termination.GRAD_TOL
            break
        # bounds holding back the descent; stationary once the free part is flat
        active = (u <= lo) & (g > 0) | (u >= hi) & (g < 0)
        if active.any() and np.max(np.abs(g / d)[~active], initial=0.0) <= settings.grad_tol:
            termination = Termination.BOX_BOUND
            break
        t = step
        while True:
            u_new = np.clip(u - t * g, lo, hi)
            f_new, g_new = evaluate(u_new)
            if f_new <= f + settings.armijo_c * np.dot(g, u_new - u):
                break
            t *= settings.step_shrink
            if t < settings.min_step:
                g_new = None
                break
        if g_new is None:
            termination = Termination.STEP_UNDERFLOW
            break
        s, y = u_new - u, g_new - g
        sy = float(np.dot(s, y))
        step = float(np.dot(s, s)) / sy if sy > 0 else 2.0 * t
        u, f, g = u_new, f_new, g_new
        trace.append(f)
    else:
        k = settings.max_iterations

    theta = ThetaParams.from_array(np.clip(u * d, box.lower, box.upper), N)
    final = trace[-1]
    return FitReport(
        theta_initial=theta0,
        theta_final=theta,
        transform=transform,
        objective_trace=trace,
        rms_distance=math.sqrt(2.0 * final / N),
        termination=termination,
        iterations=k,
    )


def fit_curve(curve: DiscreteCurve, box_fraction: float = 0.1,
              settings: OptimizerSettings | None = None, alpha: float | None = None) -> FitReport:
    """Initial guess followed by box-constrained refinement.

    The returned parameters describe the canonicalized curve; use
    :func:`fitted_points` to map the fit back onto the input's frame.
    """
    guess = initial_guess(curve, alpha=alpha)
    canon = apply_transform(curve, guess.transform)
    box = make_box(guess.theta, box_fraction, diag=curve.bbox_diagonal())
    return minimize(canon, guess.theta, box, settings, transform=guess.transform)


def fitted_points(theta: ThetaParams, transform: CanonicalTransform) -> np.ndarray:
    """Reconstructed points in the frame of the original (untransformed) curve."""
    return transform_points(reconstruct(theta).points, transform)



def _scales(x, N):
    # inverse Jacobian column norms: unit curvature of the objective along each axis
    _, jac = point_jacobian(x, N)
    norms = np.sqrt(np.einsum("ink,ink->i", jac, jac))
    return 1.0 / np.where(norms > 0, norms, 1.0)
