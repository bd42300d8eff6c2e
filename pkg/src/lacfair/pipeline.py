"""End-to-end helpers: recover or fit a curve, segmenting it first when needed."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .discrete import reconstruct, segment_from_theta
from .errors import LacError, NotLacSegmentError
from .geometry import DiscreteCurve, transform_points
from .optimize import OptimizerSettings, fit_curve
from .preprocess import segment_monotone
from .recovery import choose_canonical_transform, curvature_profile, initial_guess


def curve_from_points(points, h=None, rtol=1e-6) -> DiscreteCurve:
    """Build a constant-step curve; ``h`` defaults to the mean chord."""
    pts = np.asarray(points, dtype=float)
    if h is None:
        if len(pts) < 2:
            raise LacError("need at least 2 points")
        h = float(np.mean(np.hypot(*np.diff(pts, axis=0).T)))
    return DiscreteCurve(pts, h, rtol=rtol)


def _pieces(curve):
    """Whole curve if it is a single monotone piece, else its monotone segments."""
    try:
        choose_canonical_transform(curvature_profile(curve))
        return [((0, len(curve)), curve)]
    except NotLacSegmentError:
        pass
    pieces = []
    for (a, b), _ in segment_monotone(curve):
        pieces.append(((a, b), DiscreteCurve.unchecked(curve.points[a:b], curve.h)))
    if not pieces:
        raise NotLacSegmentError("no curvature-monotone segment with at least 5 points")
    return pieces


def recover(curve: DiscreteCurve, alpha=None) -> dict:
    out = []
    for (a, b), piece in _pieces(curve):
        g = initial_guess(piece, alpha=alpha)
        out.append({
            "range": [a, b],
            "transform": g.transform.value,
            "clamped": g.clamped,
            "theta": g.theta.to_dict(),
            "segment": segment_from_theta(g.theta).to_dict(),
        })
    return {"h": curve.h, "N": len(curve), "segments": out}


def fit(curve: DiscreteCurve, box_fraction=0.1, settings: OptimizerSettings | None = None,
        alpha=None, workers=1):
    """Fit every monotone piece. Returns ``(report_dict, overlays)``.

    ``overlays`` maps ``"guess"``/``"fit"`` to lists of point arrays in the
    input frame, for plotting.
    """
    pieces = _pieces(curve)

    def one(item):
        return fit_curve(item[1], box_fraction, settings, alpha)

    if workers > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(workers) as pool:
            reports = list(pool.map(one, pieces))
    else:
        reports = [one(p) for p in pieces]
    segments, guesses, fits = [], [], []
    for ((a, b), _), rep in zip(pieces, reports):
        segments.append({"range": [a, b], **rep.to_dict()})
        guesses.append(transform_points(reconstruct(rep.theta_initial).points, rep.transform))
        fits.append(transform_points(reconstruct(rep.theta_final).points, rep.transform))
    report = {"h": curve.h, "N": len(curve), "segments": segments}
    return report, {"guess": guesses, "fit": fits}
