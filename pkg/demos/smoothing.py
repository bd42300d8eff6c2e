"""Add noise to an exact LAC, show that recovery rejects it, then smooth and recover.

Run: python3 demos/smoothing.py
"""

import numpy as np

from lacfair import (
    LacSegmentParams,
    NoisyDataError,
    add_noise,
    curvature_profile,
    guess_alpha,
    sample_lac,
    smooth,
)
from lacfair.pipeline import curve_from_points

clean = sample_lac(LacSegmentParams(2.0, 1.0, 0.0, 1.0, 0.4, 0.0, 0.0), 200)
raw = add_noise(clean, 1e-3 * clean.length, seed=0)

try:
    guess_alpha(curvature_profile(curve_from_points(raw, rtol=1.0)))
except NoisyDataError as exc:
    print("raw data rejected:", exc)

res = smooth(raw, h=clean.h)
print(f"smoothed with {res.n_control} control points, residual {res.residual:.2e}")
print("residual per pass:", ", ".join(f"{n}:{r:.2e}" for n, r in res.trace))

kappa = curvature_profile(res.curve).kappa
print("curvature strictly decreasing:", bool(np.all(np.diff(kappa) < 0)))
# recovery now succeeds, but a spline through a handful of control points only
# roughly follows the original shape, so alpha can land far from the true value
print(f"alpha from the smoothed curve: {guess_alpha(curvature_profile(res.curve)):.3f} (true value 2)")
