"""Command-line front end.

Subcommands: ``smooth``, ``segment``, ``recover``, ``fit``, ``synth``, ``eval``.
Exit codes: 0 success, 2 parse error, 3 degenerate input, 4 optimizer
failure, 5 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import evaluation, pipeline
from .errors import (
    DegenerateInputError,
    FeasibilityError,
    LacError,
    LengthDeficitError,
    ParseError,
    QuadratureError,
)
from .geometry import LacSegmentParams
from .io import dumps_report, format_points, read_points, write_atomic
from .optimize import OptimizerSettings
from .preprocess import SmoothingSettings, segment_monotone, smooth
from .svg import overlay_svg
from .synth import BezierSpec, add_noise, sample_bezier, sample_lac

EXIT_OK, EXIT_PARSE, EXIT_DEGENERATE, EXIT_OPTIMIZER, EXIT_IO = 0, 2, 3, 4, 5


class UsageError(ParseError):
    pass


def _floats(text, count=None, name="value"):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{name}: expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise UsageError(f"{name}: expected {count} numbers, got {len(vals)}")
    return vals


def _emit(args, files, stdout_text=None):
    write_atomic(files)
    if stdout_text is not None:
        sys.stdout.write(stdout_text)


def _output_or_stdout(args, text, extra=None):
    files = dict(extra or {})
    if args.output:
        files[args.output] = text
        _emit(args, files)
    else:
        _emit(args, files, text)


def cmd_smooth(args):
    pts = read_points(args.input)
    res = smooth(pts, SmoothingSettings(eta=args.eta), h=args.step)
    summary = dumps_report({
        "N": len(pts),
        "h": res.curve.h,
        "residual": res.residual,
        "n_control": res.n_control,
        "below_threshold": res.below_threshold,
        "end_gap": res.end_gap,
    })
    if args.output:
        _emit(args, {args.output: format_points(res.curve.points)}, summary)
    else:
        _emit(args, {}, format_points(res.curve.points))


def _curve(args):
    return pipeline.curve_from_points(read_points(args.input), args.step)


def cmd_segment(args):
    curve = _curve(args)
    result = segment_monotone(curve)
    out = {"N": len(curve), "h": curve.h,
           "segments": [{"range": list(r), "transform": t.value} for r, t in result]}
    _output_or_stdout(args, dumps_report(out))


def cmd_recover(args):
    _output_or_stdout(args, dumps_report(pipeline.recover(_curve(args), alpha=args.alpha)))


def cmd_fit(args):
    curve = _curve(args)
    settings = OptimizerSettings(max_iterations=args.max_iters, grad_tol=args.grad_tol)
    report, overlays = pipeline.fit(curve, args.box_fraction, settings, args.alpha)
    layers = {"input": curve.points}
    for kind in ("guess", "fit"):
        for i, pts in enumerate(overlays[kind]):
            layers[f"{kind}{i}"] = (pts, "#0000ff" if kind == "guess" else "#ff0000")
    extra = {}
    plot = args.plot or (str(Path(args.output).with_suffix(".svg")) if args.output else None)
    if plot:
        extra[plot] = overlay_svg(layers)
    _output_or_stdout(args, dumps_report(report), extra)


def cmd_synth(args):
    if args.kind == "lac":
        vals = _floats(args.params or "2,1,0,1,0,0,0", 7, "--params")
        curve = sample_lac(LacSegmentParams(*vals), args.n_points)
    else:
        if not args.control:
            raise UsageError("--control is required for bezier curves")
        ctrl = [_floats(pair, 2, "--control") for pair in args.control.split(";")]
        curve = sample_bezier(BezierSpec(tuple(map(tuple, ctrl)), args.n_points, args.step))
    pts = curve.points
    if args.noise:
        pts = add_noise(pts, args.noise * curve.length, args.seed)
    _output_or_stdout(args, format_points(pts))


def cmd_eval(args):
    _output_or_stdout(args, dumps_report(evaluation.run_all(seed=args.seed)))


def build_parser():
    ap = argparse.ArgumentParser(prog="lacfair", description="Fair planar curves by log-aesthetic curves.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="points file, one 'x,y' per line")
        p.add_argument("--output", help="output file (default: stdout)")
        return p

    p = common(sub.add_parser("smooth", help="noise reduction (RDP + spline + resampling)"))
    p.add_argument("--eta", type=float, default=1e-3)
    p.add_argument("--step", type=float, help="step h of the output (default: land on the last point)")
    p.set_defaults(func=cmd_smooth)

    p = common(sub.add_parser("segment", help="split into curvature-monotone pieces"))
    p.add_argument("--step", type=float)
    p.set_defaults(func=cmd_segment)

    p = common(sub.add_parser("recover", help="initial guess of the LAC parameters"))
    p.add_argument("--step", type=float)
    p.add_argument("--alpha", type=float, help="use this shape parameter instead of estimating it")
    p.set_defaults(func=cmd_recover)

    p = common(sub.add_parser("fit", help="initial guess + box-constrained L2 fit"))
    p.add_argument("--step", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--box-fraction", type=float, default=0.1)
    p.add_argument("--max-iters", type=int, default=OptimizerSettings.max_iterations)
    p.add_argument("--grad-tol", type=float, default=OptimizerSettings.grad_tol)
    p.add_argument("--plot", help="SVG overlay (default: output path with .svg)")
    p.set_defaults(func=cmd_fit)

    p = common(sub.add_parser("synth", help="generate test curves"), needs_input=False)
    p.add_argument("--kind", choices=("lac", "bezier"), default="lac")
    p.add_argument("--params", help="alpha,S,s0,l,phi,x0,y0 for --kind lac")
    p.add_argument("--control", help="'x,y;x,y;...' control points for --kind bezier")
    p.add_argument("--n-points", type=int, default=200)
    p.add_argument("--step", type=float)
    p.add_argument("--noise", type=float, default=0.0, help="noise amplitude relative to length")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = common(sub.add_parser("eval", help="rerun the acceptance experiments"), needs_input=False)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_eval)
    return ap


def exit_code(exc) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, (FeasibilityError, QuadratureError)):
        return EXIT_OPTIMIZER
    if isinstance(exc, (DegenerateInputError, LengthDeficitError, LacError)):
        return EXIT_DEGENERATE
    if isinstance(exc, OSError):
        return EXIT_IO
    raise exc


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    for name in ("eta", "box_fraction", "grad_tol"):
        v = getattr(args, name, None)
        if v is not None and not v > 0:
            print(f"lacfair: --{name.replace('_', '-')} must be positive", file=sys.stderr)
            return EXIT_PARSE
    try:
        args.func(args)
    except (LacError, OSError) as exc:
        print(f"lacfair {args.command}: {exc}", file=sys.stderr)
        return exit_code(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
