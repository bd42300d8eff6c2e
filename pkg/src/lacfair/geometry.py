"""Basic log-aesthetic curves and the seven-parameter segment model.

The basic LAC with shape parameter ``alpha`` is the arc-length
parameterized curve with curvature ``kappa(0) = 1``, ``kappa' = -kappa**(alpha+1)``,
turning angle ``theta(0) = 0`` and position ``xi(0) = (0, 0)``. Every LAC segment
with positive decreasing curvature (and ``alpha != 1``) is a similarity image
of a piece of it::

    gamma(s) = (x0, y0) + S * Rot(phi) @ xi(s / S + s0),   s in [0, S*l]

which is what :class:`LacSegmentParams` stores.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, LacError, QuadratureError

#: branch-switch guard for the closed forms at alpha = 0 and alpha = 1
ALPHA_EPS = 1e-12
#: smallest admissible value of 1 + alpha*s
DOMAIN_MARGIN = 1e-12
QUAD_TOL = 1e-10
QUAD_MAX_DEPTH = 40


def domain_interval(alpha: float) -> tuple[float, float]:
    """Maximal open arc-length interval on which the basic LAC is defined."""
    if abs(alpha) < ALPHA_EPS:
        return (-math.inf, math.inf)
    if alpha < 0:
        return (-math.inf, -1.0 / alpha)
    return (-1.0 / alpha, math.inf)


def _check_domain(alpha, s):
    if abs(alpha) < ALPHA_EPS:
        return
    s = np.atleast_1d(np.asarray(s, dtype=float))
    ok = 1.0 + alpha * s >= DOMAIN_MARGIN
    if not np.all(ok):
        lo, hi = domain_interval(alpha)
        raise DomainError(
            f"arc length {s[~ok][0]!r} outside ({lo}, {hi}) for alpha={alpha}"
        )


def basic_lac_curvature(alpha, s):
    """Curvature of the basic LAC, ``(1 + alpha*s)**(-1/alpha)``.

    Accepts scalars or arrays for ``s``. Raises :class:`DomainError` when any
    ``s`` lies outside the maximal interval (never returns NaN).
    """
    s = np.asarray(s, dtype=float)
    _check_domain(alpha, s)
    if abs(alpha) < ALPHA_EPS:
        out = np.exp(-s)
    else:
        out = (1.0 + alpha * s) ** (-1.0 / alpha)
    return out[()] if out.ndim == 0 else out


def basic_lac_turning_angle(alpha, s):
    """Turning angle of the basic LAC (tangent angle from the x axis)."""
    s = np.asarray(s, dtype=float)
    _check_domain(alpha, s)
    if abs(alpha) < ALPHA_EPS:
        out = -np.expm1(-s)
    elif abs(alpha - 1.0) < ALPHA_EPS:
        out = np.log1p(s)
    else:
        out = ((1.0 + alpha * s) ** ((alpha - 1.0) / alpha) - 1.0) / (alpha - 1.0)
    return out[()] if out.ndim == 0 else out


def dtheta_dalpha(alpha, s):
    """Partial derivative of the basic turning angle with respect to ``alpha``.

    Closed form, valid for ``alpha`` not in {0, 1}.
    """
    if abs(alpha) < ALPHA_EPS or abs(alpha - 1.0) < ALPHA_EPS:
        raise DomainError(f"dtheta/dalpha undefined at alpha={alpha}")
    s = np.asarray(s, dtype=float)
    _check_domain(alpha, s)
    a = alpha
    u = 1.0 + a * s
    num = u ** (-1.0 / a) * ((a - 1.0) * u * np.log(u) - a * (a + 2.0 * s * a - s))
    out = num / (a * a * (a - 1.0) ** 2) + 1.0 / (a - 1.0) ** 2
    return out[()] if out.ndim == 0 else out


def _theta_scalar_fn(alpha):
    """Fast scalar turning-angle closure for the quadrature inner loop."""
    if abs(alpha) < ALPHA_EPS:
        return lambda t: -math.expm1(-t)
    if abs(alpha - 1.0) < ALPHA_EPS:
        return math.log1p
    e = (alpha - 1.0) / alpha
    d = alpha - 1.0
    return lambda t: ((1.0 + alpha * t) ** e - 1.0) / d


def _adaptive_simpson(f, a, b, tol, max_depth):
    # f returns a 2-tuple; error is measured in the max norm
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    h6 = (b - a) / 6.0
    whole = (h6 * (fa[0] + 4 * fm[0] + fb[0]), h6 * (fa[1] + 4 * fm[1] + fb[1]))
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    sx = sy = 0.0
    while stack:
        a, b, fa, fm, fb, whole, tol, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        h12 = (b - a) / 12.0
        left = (h12 * (fa[0] + 4 * flm[0] + fm[0]), h12 * (fa[1] + 4 * flm[1] + fm[1]))
        right = (h12 * (fm[0] + 4 * frm[0] + fb[0]), h12 * (fm[1] + 4 * frm[1] + fb[1]))
        dx = left[0] + right[0] - whole[0]
        dy = left[1] + right[1] - whole[1]
        if max(abs(dx), abs(dy)) <= 15.0 * tol:
            sx += left[0] + right[0] + dx / 15.0
            sy += left[1] + right[1] + dy / 15.0
            continue
        if depth >= max_depth:
            raise QuadratureError(
                f"adaptive Simpson exceeded depth {max_depth} on [{a}, {b}]"
            )
        stack.append((m, b, fm, frm, fb, right, 0.5 * tol, depth + 1))
        stack.append((a, m, fa, flm, fm, left, 0.5 * tol, depth + 1))
    return sx, sy


def integrate_tangent(alpha, a, b, quad_tol=QUAD_TOL, max_depth=QUAD_MAX_DEPTH):
    """Return ``xi(b) - xi(a)`` for the basic LAC by adaptive Simpson quadrature."""
    _check_domain(alpha, np.array([a, b], dtype=float))
    if a == b:
        return 0.0, 0.0
    theta = _theta_scalar_fn(alpha)

    def tangent(t):
        th = theta(t)
        return math.cos(th), math.sin(th)

    return _adaptive_simpson(tangent, float(a), float(b), quad_tol, max_depth)


def basic_lac_position(alpha, s, quad_tol=QUAD_TOL):
    """Position ``xi(s)`` of the basic LAC, with ``xi(0) = (0, 0)``."""
    return integrate_tangent(alpha, 0.0, s, quad_tol)


def rotation(phi):
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class LacSegmentParams:
    """The seven parameters ``(alpha, S, s0, l, phi, x0, y0)`` of an LAC segment.

    ``S`` is the scale, ``s0`` and ``l`` the start and length of the piece of the
    basic LAC (in basic arc length), ``phi`` the rotation and ``(x0, y0)`` the
    start point. The Euclidean length of the segment is ``S * l``.
    """

    alpha: float
    S: float
    s0: float
    l: float
    phi: float
    x0: float
    y0: float

    def __post_init__(self):
        vals = (self.alpha, self.S, self.s0, self.l, self.phi, self.x0, self.y0)
        if not all(math.isfinite(v) for v in vals):
            raise LacError(f"non-finite segment parameters {vals}")
        if self.S <= 0 or self.l <= 0:
            raise LacError("scale S and length l must be positive")
        lo, hi = domain_interval(self.alpha)
        if not (lo < self.s0 and self.s0 + self.l < hi):
            raise DomainError(
                f"segment ({self.s0}, {self.s0 + self.l}) not inside ({lo}, {hi})"
            )

    @property
    def length(self) -> float:
        return self.S * self.l

    def as_tuple(self):
        return (self.alpha, self.S, self.s0, self.l, self.phi, self.x0, self.y0)

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "S": self.S,
            "s0": self.s0,
            "l": self.l,
            "phi": self.phi % (2 * math.pi),
            "x0": self.x0,
            "y0": self.y0,
        }


def lac_segment_position(p: LacSegmentParams, s, quad_tol=QUAD_TOL):
    """Point at Euclidean arc length ``s`` along the segment ``p``."""
    x, y = basic_lac_position(p.alpha, s / p.S + p.s0, quad_tol)
    x0, y0 = basic_lac_position(p.alpha, p.s0, quad_tol)
    c, sn = math.cos(p.phi), math.sin(p.phi)
    dx, dy = p.S * (x - x0), p.S * (y - y0)
    return (p.x0 + c * dx - sn * dy, p.y0 + sn * dx + c * dy)


class DiscreteCurve:
    """Ordered planar points with constant spacing ``h``.

    ``points`` is stored as a read-only ``(N, 2)`` float array. Construction
    checks that every chord equals ``h`` to relative tolerance ``rtol``; use
    :meth:`unchecked` for raw measurement data whose spacing is only nominal.
    """

    __slots__ = ("points", "h")

    def __init__(self, points, h, rtol=1e-6):
        pts = np.array(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise LacError(f"expected an (N>=2, 2) point array, got shape {pts.shape}")
        h = float(h)
        if not (h > 0 and math.isfinite(h)):
            raise LacError(f"step must be positive, got {h}")
        if rtol is not None:
            chords = np.hypot(*np.diff(pts, axis=0).T)
            worst = np.max(np.abs(chords - h)) / h
            if not worst <= rtol:
                raise LacError(
                    f"chords deviate from h={h:g} by relative {worst:.3g} (> {rtol:g})"
                )
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "h", h)

    def __setattr__(self, name, value):
        raise AttributeError("DiscreteCurve is immutable")

    @classmethod
    def unchecked(cls, points, h):
        """Wrap raw points with a nominal step, skipping the spacing check."""
        return cls(points, h, rtol=None)

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"DiscreteCurve(N={len(self)}, h={self.h!r})"

    @property
    def length(self) -> float:
        return (len(self) - 1) * self.h

    def bbox_diagonal(self) -> float:
        span = self.points.max(axis=0) - self.points.min(axis=0)
        return float(np.hypot(*span))


class CanonicalTransform(enum.Enum):
    """Reversal and/or diagonal reflection bringing curvature to positive-decreasing.

    Each map is an involution, so it is its own inverse.
    """

    IDENTITY = "Identity"
    REVERSE = "Reverse"
    REFLECT = "Reflect"
    REFLECT_REVERSE = "ReflectReverse"

    @property
    def reverses(self):
        return self in (CanonicalTransform.REVERSE, CanonicalTransform.REFLECT_REVERSE)

    @property
    def reflects(self):
        return self in (CanonicalTransform.REFLECT, CanonicalTransform.REFLECT_REVERSE)


def transform_points(points, t: CanonicalTransform):
    pts = np.asarray(points, dtype=float)
    if t.reverses:
        pts = pts[::-1]
    if t.reflects:
        pts = pts[:, ::-1]
    return np.array(pts)


def apply_transform(c: DiscreteCurve, t: CanonicalTransform) -> DiscreteCurve:
    """Apply one of the four canonicalizing maps; the step size is unchanged."""
    if t is CanonicalTransform.IDENTITY:
        return c
    return DiscreteCurve.unchecked(transform_points(c.points, t), c.h)
