"""Reproducible experiments behind the ``eval`` command.

Each function returns plain data (dicts, lists of floats) so results can be
serialized and compared byte for byte across runs.
"""

from __future__ import annotations

import math

import numpy as np

from .discrete import ThetaParams, objective, reconstruct, theta_from_segment, value_and_gradient
from .errors import NoisyDataError
from .geometry import DiscreteCurve, LacSegmentParams, apply_transform, lac_segment_position
from .optimize import OptimizerSettings, fit_curve
from .preprocess import SmoothingSettings, smooth
from .recovery import choose_canonical_transform, curvature_profile, guess_alpha
from .synth import add_noise, sample_lac

ROUND_TRIP_ALPHAS = (-1.0, -0.5, 0.5, 2.0, 3.0)
# (s0 range, l range) keeping each segment well inside the domain of alpha
_ARC_RANGES = {
    -1.0: ((0.1, 0.3), (0.4, 0.6)),
    -0.5: ((0.1, 0.4), (0.6, 1.2)),
    0.5: ((0.1, 0.4), (0.8, 1.5)),
    2.0: ((0.1, 0.3), (0.6, 1.2)),
    3.0: ((0.1, 0.3), (0.6, 1.2)),
}
SMOOTHING_SEGMENT = LacSegmentParams(alpha=2.0, S=1.0, s0=0.0, l=1.0, phi=0.4, x0=0.0, y0=0.0)


def random_segment(alpha, rng) -> LacSegmentParams:
    (s_lo, s_hi), (l_lo, l_hi) = _ARC_RANGES.get(alpha, ((0.1, 0.3), (0.5, 1.0)))
    return LacSegmentParams(
        alpha=alpha,
        S=rng.uniform(0.5, 3.0),
        s0=rng.uniform(s_lo, s_hi),
        l=rng.uniform(l_lo, l_hi),
        phi=rng.uniform(0.5, 5.5),
        x0=rng.uniform(1.0, 5.0),
        y0=rng.uniform(1.0, 5.0),
    )


def round_trip(alpha, seed, N=400, box_fraction=0.1, settings=None):
    rng = np.random.default_rng([seed, int(round(alpha * 1000)) & 0xFFFF])
    p = random_segment(alpha, rng)
    curve = sample_lac(p, N)
    report = fit_curve(curve, box_fraction, settings or OptimizerSettings())
    return {"segment": p, "curve": curve, "report": report}


def round_trip_summary(seed=0, N=400):
    rows = []
    for a in ROUND_TRIP_ALPHAS:
        r = round_trip(a, seed, N)
        rep = r["report"]
        rows.append({
            "alpha_true": a,
            "alpha_guess": rep.theta_initial.alpha,
            "alpha_fit": rep.theta_final.alpha,
            "rms_over_length": rep.rms_distance / r["curve"].length,
            "objective_initial": rep.objective_trace[0],
            "objective_final": rep.objective_trace[-1],
            "termination": rep.termination.value,
            "report": rep.to_dict(),
        })
    return rows


def gradient_check(count=20, N=50, seed=0):
    """Worst relative error of the analytic gradient against central differences."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        alpha = rng.uniform(-2.0, 3.0)
        while min(abs(alpha), abs(alpha - 1.0)) < 0.05:
            alpha = rng.uniform(-2.0, 3.0)
        z = rng.uniform(0.005, 0.02)
        span = z * (N - 1)
        # pick 1 + alpha*s in [0.5, 2] at the end nearest the domain boundary
        u = rng.uniform(0.5, 2.0)
        s0 = (u - 1.0) / alpha if alpha > 0 else (u - 1.0) / alpha - span
        theta = ThetaParams(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.01, 0.05),
                            rng.uniform(0, 2 * math.pi), z, s0, alpha, N)
        target = reconstruct(theta.replace(phi=theta.phi + 0.1, h=theta.h * 1.05)).points
        target = target + rng.normal(0.0, 0.01, target.shape)
        x = theta.as_array()
        _, g = value_and_gradient(x, N, target)
        for i in range(7):
            e = 1e-6 * max(1.0, abs(x[i]))
            xp, xm = x.copy(), x.copy()
            xp[i] += e
            xm[i] -= e
            fd = (objective(ThetaParams.from_array(xp, N), target)
                  - objective(ThetaParams.from_array(xm, N), target)) / (2 * e)
            worst = max(worst, abs(g[i] - fd) / max(abs(fd), 1e-12))
    return worst


def reconstruction_errors(p=None, steps=(100, 200, 400, 800)):
    p = p or LacSegmentParams(alpha=2.0, S=1.0, s0=0.0, l=1.0, phi=0.0, x0=0.0, y0=0.0)
    errs = []
    for m in steps:
        theta = theta_from_segment(p, m + 1)
        pts = reconstruct(theta).points
        exact = np.array([lac_segment_position(p, theta.h * n) for n in range(m + 1)])
        errs.append(float(np.max(np.hypot(*(pts - exact).T))))
    return errs


def circle_curvature_errors(counts=(32, 64, 128, 256)):
    """Max |kappa_n - 1| for unit-circle samples with ``n`` points per half turn."""
    errs = []
    for n in counts:
        t = np.linspace(0.0, math.pi, n + 1)
        pts = np.column_stack([np.cos(t), np.sin(t)])
        h = 2.0 * math.sin(math.pi / (2 * n))
        errs.append(float(np.max(np.abs(curvature_profile(DiscreteCurve(pts, h)).kappa - 1.0))))
    return errs


def _alpha_of(curve, transform):
    return guess_alpha(curvature_profile(apply_transform(curve, transform)))


def smoothing_trials(trials=10, N=200, eta=1e-3, p=SMOOTHING_SEGMENT):
    """Noise of amplitude ``1e-3 * L`` on exact samples, then the smoothing loop.

    Each row records whether ``guess_alpha`` rejects the raw points as noisy
    and whether it succeeds on the smoothed curve. Both use the transform
    that canonicalizes the noiseless curve.
    """
    clean = sample_lac(p, N)
    transform = choose_canonical_transform(curvature_profile(clean))
    rows = []
    for seed in range(trials):
        raw = add_noise(clean, 1e-3 * clean.length, seed)
        try:
            _alpha_of(DiscreteCurve.unchecked(raw, clean.h), transform)
            raw_rejected = False
        except NoisyDataError:
            raw_rejected = True
        res = smooth(raw, SmoothingSettings(eta=eta), h=clean.h)
        try:
            alpha = _alpha_of(res.curve, transform)
        except NoisyDataError:
            alpha = None
        rows.append({
            "seed": seed,
            "raw_rejected": raw_rejected,
            "residual": res.residual,
            "n_control": res.n_control,
            "below_threshold": res.below_threshold,
            "alpha_smoothed": alpha,
        })
    return rows


def run_all(seed=0):
    rec = reconstruction_errors()
    circ = circle_curvature_errors()
    trials = smoothing_trials()
    return {
        "gradient_max_rel_error": gradient_check(seed=seed),
        "reconstruction_errors": rec,
        "reconstruction_ratios": [a / b for a, b in zip(rec, rec[1:])],
        "circle_curvature_errors": circ,
        "circle_curvature_ratios": [a / b for a, b in zip(circ, circ[1:])],
        "round_trip": [
            {k: v for k, v in row.items() if k != "report"} for row in round_trip_summary(seed)
        ],
        "smoothing": trials,
        "smoothing_successes": sum(
            r["raw_rejected"] and r["below_threshold"] and r["alpha_smoothed"] is not None
            for r in trials
        ),
    }
