"""Discrete LAC model, the L2 fitting objective and its exact gradient.

The discrete curve is built from the parameter vector
``Theta = (x0, y0, h, phi, z, s0, alpha)`` and a point count ``N`` by::

    lam_0 = (x0, y0)
    lam_n = lam_{n-1} + h * (cos a_n, sin a_n),   a_n = theta_xi(z*n + s0) + phi

for ``n = 1 .. N-1``, where ``theta_xi`` is the turning angle of the basic LAC.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import FeasibilityError, LacError
from .geometry import (
    ALPHA_EPS,
    DOMAIN_MARGIN,
    DiscreteCurve,
    LacSegmentParams,
    basic_lac_curvature,
    basic_lac_turning_angle,
    dtheta_dalpha,
)

THETA_FIELDS = ("x0", "y0", "h", "phi", "z", "s0", "alpha")


@dataclass(frozen=True)
class ThetaParams:
    """Fitting parameters of the discrete LAC plus the point count ``N``."""

    x0: float
    y0: float
    h: float
    phi: float
    z: float
    s0: float
    alpha: float
    N: int

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, f) for f in THETA_FIELDS], dtype=float)

    @classmethod
    def from_array(cls, values, N: int) -> "ThetaParams":
        return cls(*(float(v) for v in values), N=int(N))

    def replace(self, **changes) -> "ThetaParams":
        return replace(self, **changes)

    def feasibility_problem(self) -> str | None:
        """Describe why the parameters are not admissible, or return None."""
        vals = self.as_array()
        if not np.all(np.isfinite(vals)):
            return "non-finite parameter"
        if self.N < 2:
            return f"need N >= 2, got {self.N}"
        if not self.h > 0:
            return f"h must be positive, got {self.h}"
        if not self.z > 0:
            return f"z must be positive, got {self.z}"
        a = self.alpha
        if abs(a) < ALPHA_EPS or abs(a - 1.0) < ALPHA_EPS:
            return f"alpha={a} is excluded (0 and 1 are not recoverable)"
        # 1 + alpha*s is affine in n, so the two ends bound it
        ends = 1.0 + a * (self.s0 + self.z * np.array([0.0, self.N - 1]))
        if not np.all(ends >= DOMAIN_MARGIN):
            return f"arc lengths [{self.s0}, {self.s0 + self.z * (self.N - 1)}] leave the domain of alpha={a}"
        return None

    def is_feasible(self) -> bool:
        return self.feasibility_problem() is None

    def check_feasible(self):
        problem = self.feasibility_problem()
        if problem is not None:
            raise FeasibilityError(problem)

    def to_dict(self):
        d = {f: getattr(self, f) for f in THETA_FIELDS}
        d["phi"] = d["phi"] % (2 * math.pi)
        d["N"] = self.N
        return d


class GradientVector(NamedTuple):
    d_x0: float
    d_y0: float
    d_h: float
    d_phi: float
    d_z: float
    d_s0: float
    d_alpha: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


def theta_from_segment(p: LacSegmentParams, N: int) -> ThetaParams:
    """Discrete parameters whose reconstruction tracks segment ``p`` to O(h**2).

    The basic-arc offset is moved back half a step so each chord direction is
    sampled at the midpoint of its arc (midpoint rule). Sampling at the arc end
    instead leaves an O(h) drift.
    """
    z = p.l / (N - 1)
    return ThetaParams(
        x0=p.x0, y0=p.y0, h=p.S * z, phi=p.phi, z=z, s0=p.s0 - 0.5 * z,
        alpha=p.alpha, N=N,
    )


def segment_from_theta(theta: ThetaParams) -> LacSegmentParams:
    """Inverse of :func:`theta_from_segment`."""
    return LacSegmentParams(
        alpha=theta.alpha,
        S=theta.h / theta.z,
        s0=theta.s0 + 0.5 * theta.z,
        l=(theta.N - 1) * theta.z,
        phi=theta.phi % (2 * math.pi),
        x0=theta.x0,
        y0=theta.y0,
    )


def _directions(x, N):
    _, _, _, phi, z, s0, alpha = x
    n = np.arange(1, N, dtype=float)
    arg = z * n + s0
    return n, arg, basic_lac_turning_angle(alpha, arg) + phi


def _points(x, N):
    x0, y0, h = x[0], x[1], x[2]
    _, _, ang = _directions(x, N)
    pts = np.empty((N, 2))
    pts[0] = (x0, y0)
    pts[1:, 0] = x0 + h * np.cumsum(np.cos(ang))
    pts[1:, 1] = y0 + h * np.cumsum(np.sin(ang))
    return pts


def reconstruct(theta: ThetaParams) -> DiscreteCurve:
    """Discrete LAC with ``N`` points and constant step ``h``."""
    theta.check_feasible()
    return DiscreteCurve.unchecked(_points(theta.as_array(), theta.N), theta.h)


def _target_points(theta, target):
    pts = target.points if isinstance(target, DiscreteCurve) else np.asarray(target, float)
    if len(pts) != theta.N:
        raise LacError(f"target has {len(pts)} points, parameters expect N={theta.N}")
    return pts


def objective(theta: ThetaParams, target) -> float:
    """Half the sum of squared distances between ``reconstruct(theta)`` and ``target``."""
    theta.check_feasible()
    pts = _target_points(theta, target)
    r = _points(theta.as_array(), theta.N) - pts
    return 0.5 * float(np.sum(r * r))


def point_jacobian(x, N):
    """Points and their derivatives w.r.t. the seven parameters.

    Returns ``(pts, jac)`` with ``jac[i]`` of shape ``(N, 2)`` holding
    ``d lam_n / d Theta_i``, accumulated forward along the recursion.
    """
    h, alpha = x[2], x[6]
    n, arg, ang = _directions(x, N)
    T = np.column_stack([np.cos(ang), np.sin(ang)])
    P = np.column_stack([-T[:, 1], T[:, 0]])  # Rot(pi/2) T
    kappa = basic_lac_curvature(alpha, arg)
    dth_da = dtheta_dalpha(alpha, arg)

    pts = np.empty((N, 2))
    pts[0] = x[:2]
    pts[1:] = x[:2] + h * np.cumsum(T, axis=0)

    jac = np.zeros((7, N, 2))
    jac[0, :, 0] = 1.0
    jac[1, :, 1] = 1.0
    jac[2, 1:] = np.cumsum(T, axis=0)
    jac[3, 1:] = h * np.cumsum(P, axis=0)
    jac[4, 1:] = h * np.cumsum((n * kappa)[:, None] * P, axis=0)
    jac[5, 1:] = h * np.cumsum(kappa[:, None] * P, axis=0)
    jac[6, 1:] = h * np.cumsum(dth_da[:, None] * P, axis=0)
    return pts, jac


def value_and_gradient(x, N, target_pts):
    """Objective and gradient at the raw parameter array ``x``.

    Infeasible ``x`` yields ``(inf, None)`` so that line searches can back off.
    """
    theta = ThetaParams.from_array(x, N)
    if not theta.is_feasible():
        return math.inf, None
    pts, jac = point_jacobian(theta.as_array(), N)
    r = pts - target_pts
    value = 0.5 * float(np.sum(r * r))
    grad = np.einsum("ink,nk->i", jac, r)
    return value, grad


def gradient(theta: ThetaParams, target) -> GradientVector:
    """Exact gradient of :func:`objective` in the ``(x0, y0, h, phi, z, s0, alpha)`` order."""
    theta.check_feasible()
    pts = _target_points(theta, target)
    _, grad = value_and_gradient(theta.as_array(), theta.N, pts)
    return GradientVector(*(float(g) for g in grad))

