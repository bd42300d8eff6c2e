"""Synthetic test curves: exact LAC samples, Bezier samples and seeded noise."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import LacError, LengthDeficitError
from .geometry import (
    DOMAIN_MARGIN,
    DiscreteCurve,
    LacSegmentParams,
    domain_interval,
    integrate_tangent,
)

CHORD_RTOL = 1e-12


def equal_chord_walk(advance, t0, p0, n_points, h, dt0, t_limit=math.inf, xtol=None):
    """Walk a parametric curve emitting points at exact chord distance ``h``.

    ``advance(t_from, p_from, t_to)`` returns the point at ``t_to`` given the
    point ``p_from`` at ``t_from`` (lets integrated curves work incrementally).
    ``dt0`` is a parameter increment expected to give a chord close to ``h``.
    Returns ``(points, params)``. Raises :class:`LengthDeficitError` when the
    walk would have to pass ``t_limit``.
    """
    if xtol is None:
        xtol = CHORD_RTOL * dt0
    pts = [np.asarray(p0, dtype=float)]
    ts = [float(t0)]
    t, p = float(t0), pts[0]
    for _ in range(n_points - 1):

        def gap(t_to, t=t, p=p):
            q = advance(t, p, t_to)
            return math.hypot(q[0] - p[0], q[1] - p[1]) - h

        lo, step = t, dt0
        hi = min(t + step, t_limit)
        while gap(hi) < 0:
            if hi >= t_limit:
                raise LengthDeficitError(
                    f"curve ends after {len(pts)} of {n_points} points at step {h:g}"
                )
            lo, step = hi, 1.5 * step
            hi = min(t + step, t_limit)
        t_new = brentq(gap, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)
        p = np.asarray(advance(t, p, t_new), dtype=float)
        t = t_new
        pts.append(p)
        ts.append(t)
    return np.array(pts), np.array(ts)


def sample_lac(p: LacSegmentParams, N: int, quad_tol=1e-12) -> DiscreteCurve:
    """``N`` points on segment ``p`` with equal chords ``h = S*l/(N-1)``.

    The chords are exact, so the walk covers slightly more than ``S*l`` of arc;
    it runs on along the same basic LAC past the nominal end.
    """
    if N < 2:
        raise LacError("need N >= 2")
    h = p.length / (N - 1)
    c, s = math.cos(p.phi), math.sin(p.phi)
    S = p.S

    def advance(t_from, p_from, t_to):
        dx, dy = integrate_tangent(p.alpha, t_from / S + p.s0, t_to / S + p.s0, quad_tol / S)
        return (p_from[0] + S * (c * dx - s * dy), p_from[1] + S * (s * dx + c * dy))

    _, hi = domain_interval(p.alpha)
    t_limit = (hi - p.s0) * S - DOMAIN_MARGIN if math.isfinite(hi) else math.inf
    pts, _ = equal_chord_walk(advance, 0.0, (p.x0, p.y0), N, h, h, t_limit)
    return DiscreteCurve(pts, h)


def de_casteljau(control, t):
    """Evaluate a Bezier curve at parameter(s) ``t`` by repeated interpolation."""
    P = np.asarray(control, dtype=float)
    t = np.asarray(t, dtype=float)
    pts = np.broadcast_to(P, t.shape + P.shape).copy()
    tt = t[..., None, None]
    for k in range(len(P) - 1, 0, -1):
        pts = (1 - tt) * pts[..., :k, :] + tt * pts[..., 1 : k + 1, :]
    return pts[..., 0, :]


def bezier_derivative(control, t):
    P = np.asarray(control, dtype=float)
    n = len(P) - 1
    return n * de_casteljau(np.diff(P, axis=0), t)


@dataclass(frozen=True)
class BezierSpec:
    """Control polygon, sample count and step. ``h=None`` picks the step so
    the last sample lands on the curve's end point."""

    control: tuple
    N: int
    h: float | None = None

    def __post_init__(self):
        if len(self.control) < 3:
            raise LacError("need at least 3 control points")
        if self.N < 2:
            raise LacError("need N >= 2")


def _bezier_walk(control, N, h, t_limit):
    speed0 = np.linalg.norm(bezier_derivative(control, 0.0))

    def advance(t_from, p_from, t_to):
        return de_casteljau(control, t_to)

    dt0 = h / max(speed0, 1e-300)
    return equal_chord_walk(advance, 0.0, de_casteljau(control, 0.0), N, h, dt0, t_limit)


def _bezier_length(control, n=4096):
    pts = de_casteljau(control, np.linspace(0.0, 1.0, n + 1))
    return float(np.sum(np.hypot(*np.diff(pts, axis=0).T)))


def sample_bezier(spec: BezierSpec) -> DiscreteCurve:
    """Equal-chord samples of a Bezier curve, starting at its first control point."""
    control = np.asarray(spec.control, dtype=float)
    N = spec.N
    if spec.h is not None:
        pts, _ = _bezier_walk(control, N, spec.h, 1.0)
        return DiscreteCurve(pts, spec.h)

    h = landing_step(lambda h: _bezier_walk(control, N, h, 4.0)[1][-1], 1.0,
                     _bezier_length(control) / (N - 1))
    pts, _ = _bezier_walk(control, N, h, 4.0)
    return DiscreteCurve(pts, h)


def landing_step(end_param, t_end, h_guess):
    """Step ``h`` for which an equal-chord walk ends exactly at parameter ``t_end``.

    ``end_param(h)`` runs the walk and returns its final parameter, which grows
    with ``h``. ``h_guess`` is usually arc length over ``N - 1``; chords are
    shorter than arcs, so the answer lies slightly above it.
    """

    def overshoot(h):
        return end_param(h) - t_end

    lo, hi = 0.9 * h_guess, 1.01 * h_guess
    while overshoot(lo) > 0:
        lo *= 0.9
    while overshoot(hi) < 0:
        hi *= 1.1
    return brentq(overshoot, lo, hi, xtol=1e-15 * h_guess, rtol=4 * np.finfo(float).eps)


_MASK64 = (1 << 64) - 1


def splitmix64(seed: int):
    """Infinite stream of 64-bit integers (SplitMix64)."""
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def uniform_stream(seed: int):
    for v in splitmix64(seed):
        yield (v >> 11) * (1.0 / (1 << 53))


def add_noise(points, amplitude: float, seed: int) -> np.ndarray:
    """Displace interior points uniformly in a disc of radius ``amplitude``.

    End points stay fixed. The result is raw point data (spacing no longer
    constant). Deterministic across platforms for a given seed.
    """
    pts = np.array(getattr(points, "points", points), dtype=float)
    if amplitude < 0:
        raise LacError("amplitude must be non-negative")
    if amplitude == 0:
        return pts
    u = uniform_stream(seed)
    for i in range(1, len(pts) - 1):
        r = amplitude * math.sqrt(next(u))
        a = 2.0 * math.pi * next(u)
        pts[i, 0] += r * math.cos(a)
        pts[i, 1] += r * math.sin(a)
    return pts
