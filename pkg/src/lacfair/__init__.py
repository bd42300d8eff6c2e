"""Fairing of planar curves by log-aesthetic curve (LAC) segments."""

from .discrete import (
    GradientVector,
    ThetaParams,
    gradient,
    objective,
    reconstruct,
    segment_from_theta,
    theta_from_segment,
)
from .errors import (
    CuspError,
    DegenerateInputError,
    DomainError,
    FeasibilityError,
    LacError,
    LengthDeficitError,
    NoisyDataError,
    NotLacSegmentError,
    ParseError,
    QuadratureError,
)
from .geometry import (
    CanonicalTransform,
    DiscreteCurve,
    LacSegmentParams,
    apply_transform,
    basic_lac_curvature,
    basic_lac_position,
    basic_lac_turning_angle,
    domain_interval,
    dtheta_dalpha,
    lac_segment_position,
)
from .optimize import (
    BoxConstraints,
    FitReport,
    OptimizerSettings,
    Termination,
    fit_curve,
    make_box,
    minimize,
)
from .preprocess import (
    SmoothingSettings,
    rdp_select,
    residual,
    segment_monotone,
    smooth,
    spline_resample,
)
from .recovery import (
    CurvatureProfile,
    InitialGuess,
    choose_canonical_transform,
    curvature_profile,
    guess_alpha,
    guess_phi_origin,
    guess_s0_z,
    guess_scale,
    initial_guess,
)
from .synth import BezierSpec, add_noise, sample_bezier, sample_lac

__version__ = "0.1.0"
