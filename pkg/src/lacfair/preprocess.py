"""Noise reduction and segmentation of raw discrete curves.

Smoothing loop: keep the ``k`` most significant points by Ramer-Douglas-Peucker
refinement, interpolate them with a cubic spline, resample the spline with the
original point count and step, and grow ``k`` until the normalized residual
against the raw data drops below ``eta``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DegenerateInputError, LacError, NotLacSegmentError
from .geometry import CanonicalTransform, DiscreteCurve
from .recovery import MIN_POINTS, choose_canonical_transform, curvature_profile
from .synth import equal_chord_walk, landing_step

SPLINE_BC = "not-a-knot"


def _as_points(c):
    return np.asarray(getattr(c, "points", c), dtype=float)


def _line_distances(pts, a, b):
    """Perpendicular distances of pts to the line through a and b."""
    d = b - a
    norm = math.hypot(d[0], d[1])
    rel = pts - a
    if norm == 0:
        return np.hypot(rel[:, 0], rel[:, 1])
    return np.abs(rel[:, 0] * d[1] - rel[:, 1] * d[0]) / norm


def rdp_order(c) -> list[int]:
    """Point indices in the order a priority-driven RDP refinement inserts them.

    Starts with both end points, then repeatedly inserts the point farthest from
    the chord of the span containing it. Ties go to the lower index.
    """
    pts = _as_points(c)
    N = len(pts)
    order = [0, N - 1] if N > 1 else [0]
    heap = []

    def push(i, j):
        if j - i < 2:
            return
        dist = _line_distances(pts[i + 1 : j], pts[i], pts[j])
        k = int(np.argmax(dist))
        heapq.heappush(heap, (-float(dist[k]), i + 1 + k, i, j))

    push(0, N - 1)
    while heap:
        _, k, i, j = heapq.heappop(heap)
        order.append(k)
        push(i, k)
        push(k, j)
    return order


def rdp_select(c, n_keep: int) -> np.ndarray:
    """The ``n_keep`` most significant points (end points included), in curve order."""
    pts = _as_points(c)
    if not 2 <= n_keep <= len(pts):
        raise LacError(f"n_keep must lie in [2, {len(pts)}], got {n_keep}")
    idx = sorted(rdp_order(pts)[:n_keep])
    return pts[idx]


def _spline(control):
    control = np.asarray(control, dtype=float)
    if len(control) < 3:
        raise LacError("need at least 3 control points")
    t = np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(control, axis=0).T))])
    if np.any(np.diff(t) <= 0):
        raise DegenerateInputError("repeated control points")
    return CubicSpline(t, control, bc_type=SPLINE_BC, axis=0), t[-1]


@dataclass(frozen=True)
class Resampled:
    curve: DiscreteCurve
    end_gap: float


def _resample(control, N, h=None) -> Resampled:
    spline, t_end = _spline(control)
    end = np.asarray(control[-1], dtype=float)

    def advance(t_from, p_from, t_to):
        return spline(t_to)

    if h is None:
        t = np.linspace(0.0, t_end, 64 * len(control) + 1)
        arc = float(np.sum(np.hypot(*np.diff(spline(t), axis=0).T)))
        h = landing_step(
            lambda h: equal_chord_walk(advance, 0.0, control[0], N, h, h, 2.0 * t_end)[1][-1],
            t_end, arc / (N - 1),
        )
    # the walk may run past the last knot by at most one step (extrapolated)
    pts, _ = equal_chord_walk(advance, 0.0, control[0], N, h, h, t_limit=t_end + h)
    pts[0] = control[0]
    gap = float(np.hypot(*(pts[-1] - end)))
    return Resampled(DiscreteCurve(pts, h), gap)


def spline_resample(control, N: int, h: float) -> DiscreteCurve:
    """Interpolating cubic spline through ``control``, resampled at equal chords ``h``.

    The spline is parameterized by cumulative chord length. The first output
    point is ``control[0]``; the last lands within ``h`` of ``control[-1]``
    when the spline length matches ``(N-1)*h``.
    """
    return _resample(control, N, h).curve


def residual(smooth, raw, h: float | None = None) -> float:
    """Normalized mean deviation ``sum(|smooth_n - raw_n|) * h / L**2``, ``L = (N-1)*h``."""
    a, b = _as_points(smooth), _as_points(raw)
    if len(a) != len(b):
        raise LacError(f"point counts differ: {len(a)} vs {len(b)}")
    if h is None:
        h = getattr(smooth, "h", None) or getattr(raw, "h")
    L = (len(a) - 1) * h
    return float(np.sum(np.hypot(*(a - b).T)) * h / L**2)


@dataclass(frozen=True)
class SmoothingSettings:
    eta: float = 1e-3
    max_control_points: int | None = None
    growth: int = 1

    def __post_init__(self):
        if not self.eta > 0:
            raise LacError("eta must be positive")
        if self.growth < 1:
            raise LacError("growth must be at least 1")


@dataclass(frozen=True)
class SmoothResult:
    curve: DiscreteCurve
    residual: float
    n_control: int
    below_threshold: bool
    end_gap: float
    trace: list = field(default_factory=list)


def smooth(raw, settings: SmoothingSettings | None = None, h: float | None = None) -> SmoothResult:
    """Run the RDP / spline / resample loop until the residual is at most ``eta``.

    ``raw`` is a :class:`DiscreteCurve` or an ``(N, 2)`` array. The output keeps
    ``N`` and the step ``h`` (``raw.h`` or the argument). With no step known,
    each pass picks the ``h`` that lands the last sample on the end of the
    spline, and the output carries that value. If the
    threshold is never met the last attempt is returned with
    ``below_threshold=False``. ``trace`` lists ``(n_control, residual)``.
    """
    settings = settings or SmoothingSettings()
    pts = _as_points(raw)
    N = len(pts)
    if h is None:
        h = getattr(raw, "h", None)
    if N < 3:
        raise DegenerateInputError("need at least 3 points")
    limit = min(settings.max_control_points or N, N)
    order = rdp_order(pts)
    trace = []
    k = 3
    while True:
        control = pts[sorted(order[:k])]
        out = _resample(control, N, h)
        r = residual(out.curve.points, pts, out.curve.h)
        trace.append((k, r))
        if r <= settings.eta or k >= limit:
            return SmoothResult(out.curve, r, k, r <= settings.eta, out.end_gap, trace)
        k = min(k + settings.growth, limit)


@dataclass(frozen=True)
class SegmentationResult:
    """Point index ranges ``[start, stop)`` with the transform of each piece."""

    segments: list

    def __iter__(self):
        return iter(self.segments)

    def __len__(self):
        return len(self.segments)


def _split_vertices(kappa, flat_tol):
    """Vertex indices (into the curve) where a new monotone piece must start."""
    cuts = []
    mag = np.abs(kappa)
    for k in range(1, len(kappa) - 1):
        v = k + 1  # kappa[k] sits at vertex k + 1
        if kappa[k - 1] * kappa[k] <= 0 and kappa[k - 1] != kappa[k]:
            cuts.append(v)
            continue
        left = mag[k] - mag[k - 1]
        right = mag[k + 1] - mag[k]
        if abs(left) > flat_tol and abs(right) > flat_tol and left * right < 0:
            cuts.append(v)
    if len(kappa) > 1 and kappa[-2] * kappa[-1] <= 0 and kappa[-2] != kappa[-1]:
        cuts.append(len(kappa))
    return sorted(set(cuts))


def segment_monotone(c: DiscreteCurve) -> SegmentationResult:
    """Split ``c`` where the curvature changes sign or ``|kappa|`` has a local extremum.

    Ranges partition the point indices. Pieces with fewer than 5 points, or
    whose curvature is not strictly monotone (e.g. constant), are dropped.
    """
    profile = curvature_profile(c)
    kappa = profile.kappa
    if kappa.size == 0:
        return SegmentationResult([])
    flat_tol = 1e-12 * float(np.max(np.abs(kappa)))
    bounds = [0, *_split_vertices(kappa, flat_tol), len(c)]
    segments = []
    for start, stop in zip(bounds[:-1], bounds[1:]):
        if stop - start < MIN_POINTS:
            continue
        piece = DiscreteCurve.unchecked(c.points[start:stop], c.h)
        try:
            tag = choose_canonical_transform(curvature_profile(piece))
        except (NotLacSegmentError, DegenerateInputError):
            continue
        segments.append(((start, stop), tag))
    return SegmentationResult(segments)


__all__ = [
    "CanonicalTransform",
    "SegmentationResult",
    "SmoothResult",
    "SmoothingSettings",
    "rdp_order",
    "rdp_select",
    "residual",
    "segment_monotone",
    "smooth",
    "spline_resample",
]
