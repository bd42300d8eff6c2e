"""Split an S-shaped Bezier curve into curvature-monotone pieces, fit each,
and write an overlay plot (input black, guesses blue, fits red).

Run: python3 demos/bezier_segments.py [out.svg]
"""

import sys

from lacfair import BezierSpec, sample_bezier
from lacfair.optimize import OptimizerSettings
from lacfair.pipeline import fit
from lacfair.svg import overlay_svg

curve = sample_bezier(BezierSpec(((0, 0), (1, 2), (2, -2), (3, 0)), 200))
report, overlays = fit(curve, settings=OptimizerSettings(max_iterations=2000))

for seg in report["segments"]:
    a, b = seg["range"]
    print(f"points {a:3d}-{b - 1:3d}  {seg['transform']:<15} alpha={seg['theta_final']['alpha']:+.3f}"
          f"  rms={seg['rms_distance']:.2e}  ({seg['termination']})")

layers = {"input": curve.points}
for i, (g, f) in enumerate(zip(overlays["guess"], overlays["fit"])):
    layers[f"guess{i}"] = (g, "#0000ff")
    layers[f"fit{i}"] = (f, "#ff0000")
out = sys.argv[1] if len(sys.argv) > 1 else "bezier_segments.svg"
with open(out, "w") as fh:
    fh.write(overlay_svg(layers))
print("wrote", out)
