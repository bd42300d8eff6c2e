"""Discrete curvature and the least-squares initial guess of the LAC parameters.

The guess runs in three steps on a curve whose curvature is positive and
strictly decreasing (see :func:`choose_canonical_transform`):

1. ``alpha`` and the scale ``S`` from a line fit of ``log dR`` against ``R``,
   where ``R = -log kappa``;
2. the basic-arc offset ``s0`` and per-step advance ``z``;
3. the rotation ``phi`` and translation ``(x0, y0)`` by averaging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discrete import ThetaParams, _points, segment_from_theta
from .errors import (
    CuspError,
    DegenerateInputError,
    NoisyDataError,
    NotLacSegmentError,
)
from .geometry import (
    ALPHA_EPS,
    DOMAIN_MARGIN,
    CanonicalTransform,
    DiscreteCurve,
    apply_transform,
    basic_lac_turning_angle,
)

CUSP_EPS = 1e-12
MIN_POINTS = 5


@dataclass(frozen=True)
class CurvatureProfile:
    """Discrete differential quantities of an equal-step curve.

    Index ``k`` of ``kappa``, ``R`` corresponds to vertex ``k + 1``; index ``k`` of
    ``tangents``/``theta`` to the edge from vertex ``k`` to ``k + 1``.
    ``R`` is NaN wherever ``kappa <= 0``.
    """

    h: float
    tangents: np.ndarray  # (N-1, 2)
    theta: np.ndarray  # (N-1,), unwrapped
    kappa: np.ndarray  # (N-2,)
    R: np.ndarray  # (N-2,)
    dR: np.ndarray  # (N-3,)

    @property
    def N(self):
        return len(self.tangents) + 1


def curvature_profile(c: DiscreteCurve) -> CurvatureProfile:
    """Tangents, turning angles, curvature and log radius of curvature.

    Curvature at vertex n is the inverse radius of the circle tangent to both
    adjacent edges at their midpoints::

        kappa_n = (2/h) * det(T_{n-1}, T_n) / (1 + <T_{n-1}, T_n>)
    """
    h = c.h
    T = np.diff(c.points, axis=0) / h
    if len(T) < 2:
        raise DegenerateInputError("need at least 3 points for curvature")
    a, b = T[:-1], T[1:]
    det = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    dot = np.einsum("ij,ij->i", a, b)
    # scale-free test so raw (non-unit) edges are judged the same way
    denom = 1.0 + dot / (np.hypot(*a.T) * np.hypot(*b.T))
    bad = np.flatnonzero(~(denom > CUSP_EPS))
    if bad.size:
        raise CuspError(int(bad[0]) + 1)
    kappa = (2.0 / h) * det / (1.0 + dot)
    theta = np.empty(len(T))
    theta[0] = math.atan2(T[0, 1], T[0, 0])
    theta[1:] = theta[0] + np.cumsum(np.arctan2(det, dot))
    with np.errstate(divide="ignore", invalid="ignore"):
        R = np.where(kappa > 0, -np.log(np.where(kappa > 0, kappa, 1.0)), np.nan)
        dR = -(kappa[1:] - kappa[:-1]) / kappa[:-1]
    return CurvatureProfile(h=h, tangents=T, theta=theta, kappa=kappa, R=R, dR=dR)


_TRANSFORM_TABLE = {
    (1, -1): CanonicalTransform.IDENTITY,
    (1, 1): CanonicalTransform.REFLECT_REVERSE,
    (-1, 1): CanonicalTransform.REFLECT,
    (-1, -1): CanonicalTransform.REVERSE,
}


def choose_canonical_transform(kappa) -> CanonicalTransform:
    """Pick the map that makes the curvature positive and strictly decreasing.

    ``kappa`` may be a :class:`CurvatureProfile` or a plain curvature sequence.
    """
    k = np.asarray(getattr(kappa, "kappa", kappa), dtype=float)
    if k.size == 0:
        raise DegenerateInputError("empty curvature profile")
    if np.all(k == 0):
        raise DegenerateInputError("curvature vanishes identically (straight line)")
    if np.all(k > 0):
        sign = 1
    elif np.all(k < 0):
        sign = -1
    else:
        raise NotLacSegmentError("curvature changes sign; segment the curve first")
    d = np.diff(k)
    if np.all(d < 0):
        trend = -1
    elif np.all(d > 0):
        trend = 1
    else:
        raise NotLacSegmentError("curvature is not strictly monotone; segment or smooth first")
    return _TRANSFORM_TABLE[sign, trend]


def _usable(profile):
    """R_n and log dR_n over n = 1..N-3, validated."""
    if profile.N < MIN_POINTS:
        raise DegenerateInputError(f"need at least {MIN_POINTS} points, got {profile.N}")
    R = profile.R[:-1]
    dR = profile.dR
    if np.all(profile.kappa == 0):
        raise DegenerateInputError("curvature vanishes identically (straight line)")
    if not np.all(profile.kappa > 0):
        raise NoisyDataError("curvature is not positive everywhere")
    if not np.all(dR > 0):
        n = int(np.flatnonzero(~(dR > 0))[0]) + 1
        raise NoisyDataError(f"curvature is not strictly decreasing (first at vertex {n})")
    return R, np.log(dR)


def _alpha_from(R, logdR):
    M = len(R)
    den = R.sum() ** 2 - M * np.dot(R, R)
    if abs(den) < 1e-14:
        raise DegenerateInputError("log radius of curvature is constant; alpha is undetermined")
    return float((M * np.dot(R, logdR) - R.sum() * logdR.sum()) / den)


def guess_alpha(profile: CurvatureProfile) -> float:
    """Least-squares shape parameter from ``log dR_n + alpha R_n = const``."""
    return _alpha_from(*_usable(profile))


def guess_scale(profile: CurvatureProfile, alpha: float, h: float | None = None) -> float:
    """Scale ``S`` from the intercept of the same line fit, for a given ``alpha``."""
    if abs(alpha - 1.0) < ALPHA_EPS or abs(alpha) < ALPHA_EPS:
        raise DegenerateInputError(f"alpha={alpha} cannot be used for recovery")
    h = profile.h if h is None else h
    R, logdR = _usable(profile)
    mean = float(np.mean(logdR + alpha * R))
    return h ** (1.0 / (1.0 - alpha)) * math.exp(mean / (alpha - 1.0))


def guess_s0_z(profile: CurvatureProfile, alpha: float, S: float, h: float, N: int):
    """Offset ``s0`` of the segment start on the basic LAC and per-step advance ``z``.

    ``s0`` refers to the continuous segment (curvature at vertex n is taken at
    basic arc length ``s0 + n*h/S``). Returns ``(s0, z)`` with ``z = h / S``.
    """
    kappa = profile.kappa
    if not np.all(kappa > 0):
        raise NoisyDataError("curvature is not positive everywhere")
    s0 = (
        np.mean(kappa ** (-alpha)) / (alpha * S**alpha)
        - 1.0 / alpha
        - (N - 1) * h / (2.0 * S)
    )
    return float(s0), h / S


def guess_phi_origin(c: DiscreteCurve, profile: CurvatureProfile, alpha, S, s0, z, h):
    """Rotation and start point by averaging.

    ``phi`` is the mean over edges n = 0..N-2 of ``theta_n - theta_xi(z*n + s0)``;
    the start point is the mean offset between ``c`` and the zero-translation
    reconstruction. ``s0`` is the continuous-segment offset from
    :func:`guess_s0_z`. Returns ``(phi, x0, y0)`` with ``phi`` in [0, 2*pi).
    """
    N = len(c)
    n = np.arange(N - 1)
    phi = float(np.mean(profile.theta - basic_lac_turning_angle(alpha, z * n + s0)))
    base = np.array([0.0, 0.0, h, phi, z, s0 - 0.5 * z, alpha])
    offset = np.mean(c.points - _points(base, N), axis=0)
    return phi % (2 * math.pi), float(offset[0]), float(offset[1])


@dataclass(frozen=True)
class InitialGuess:
    """Result of :func:`initial_guess`.

    ``theta`` describes the curve after ``transform`` has been applied;
    ``clamped`` records whether ``s0`` had to be moved to stay in the domain.
    """

    theta: ThetaParams
    transform: CanonicalTransform
    clamped: bool = False

    @property
    def segment(self):
        return segment_from_theta(self.theta)


def _clamp_s0(alpha, s0, z, N):
    # keep 1 + alpha*(s0 + z*n) >= margin for n in [0, N-1]
    margin = 1e3 * DOMAIN_MARGIN
    if alpha > 0:
        lo = (margin - 1.0) / alpha
        return (lo, True) if s0 < lo else (s0, False)
    hi = (margin - 1.0) / alpha - z * (N - 1)
    return (hi, True) if s0 > hi else (s0, False)


def initial_guess(c: DiscreteCurve, alpha: float | None = None) -> InitialGuess:
    """Canonicalize ``c`` and recover all seven parameters.

    Pass ``alpha`` to skip its estimation and use a hand-picked value; the
    remaining steps are unchanged.
    """
    N = len(c)
    if N < MIN_POINTS:
        raise DegenerateInputError(f"need at least {MIN_POINTS} points, got {N}")
    transform = choose_canonical_transform(curvature_profile(c))
    curve = apply_transform(c, transform)
    profile = curvature_profile(curve)
    h = curve.h
    a = guess_alpha(profile) if alpha is None else float(alpha)
    if abs(a) < ALPHA_EPS or abs(a - 1.0) < ALPHA_EPS:
        raise DegenerateInputError(f"alpha={a} cannot be used for recovery")
    S = guess_scale(profile, a, h)
    s0, z = guess_s0_z(profile, a, S, h, N)
    s0_disc, clamped = _clamp_s0(a, s0 - 0.5 * z, z, N)
    phi, x0, y0 = guess_phi_origin(curve, profile, a, S, s0_disc + 0.5 * z, z, h)
    theta = ThetaParams(x0=x0, y0=y0, h=h, phi=phi, z=z, s0=s0_disc, alpha=a, N=N)
    theta.check_feasible()
    return InitialGuess(theta=theta, transform=transform, clamped=clamped)
