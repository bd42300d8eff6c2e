"""Sample an exact LAC segment, guess its parameters, then refine them.

Run: python3 demos/round_trip.py
"""

from lacfair import LacSegmentParams, fit_curve, initial_guess, sample_lac, segment_from_theta

truth = LacSegmentParams(alpha=2.0, S=1.0, s0=0.1, l=1.0, phi=0.5, x0=1.0, y0=2.0)
curve = sample_lac(truth, 300)
print(f"sampled {len(curve)} points, step h = {curve.h:.6g}")

guess = initial_guess(curve)
print("initial guess:", segment_from_theta(guess.theta).to_dict())

rep = fit_curve(curve)
print("fitted      :", segment_from_theta(rep.theta_final).to_dict())
print("truth       :", truth.to_dict())
print(f"termination {rep.termination.value} after {rep.iterations} iterations")
print(f"rms distance {rep.rms_distance:.3e} (curve length {truth.length:.3f})")
