import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lacfair.discrete import ThetaParams, objective, reconstruct
from lacfair.errors import CuspError, DegenerateInputError, NoisyDataError, NotLacSegmentError
from lacfair.geometry import (
    CanonicalTransform,
    DiscreteCurve,
    LacSegmentParams,
    apply_transform,
    basic_lac_turning_angle,
)
from lacfair.recovery import (
    CurvatureProfile,
    choose_canonical_transform,
    curvature_profile,
    guess_alpha,
    guess_phi_origin,
    guess_s0_z,
    guess_scale,
    initial_guess,
)
from lacfair.synth import add_noise, sample_lac

import oracles


def rot(psi):
    return np.array([[math.cos(psi), -math.sin(psi)], [math.sin(psi), math.cos(psi)]])


# -- curvature profile ----------------------------------------------------


def test_straight_line_has_zero_curvature():
    pts = np.column_stack([np.linspace(0, 1, 11), np.linspace(0, 2, 11)])
    prof = curvature_profile(DiscreteCurve(pts, math.hypot(0.1, 0.2)))
    assert np.all(prof.kappa == 0.0)


def test_circle_curvature_closed_form_and_order():
    errs = []
    for n in (20, 40, 80):
        d = 2 * math.pi / n
        t = d * np.arange(n // 2 + 1)
        prof = curvature_profile(DiscreteCurve(np.column_stack([np.cos(t), np.sin(t)]), 2 * math.sin(d / 2)))
        assert np.allclose(prof.kappa, 1 / math.cos(d / 2), rtol=1e-12)
        assert np.allclose(np.hypot(*prof.tangents.T), 1.0, atol=1e-12)
        errs.append(np.max(np.abs(prof.kappa - 1)))
    assert 3 <= errs[0] / errs[1] <= 5 and 3 <= errs[1] / errs[2] <= 5


def test_reflection_negates_curvature():
    c = sample_lac(LacSegmentParams(2.0, 1.0, 0.0, 1.0, 0.4, 0.0, 0.0), 50)
    k = curvature_profile(c).kappa
    k_ref = curvature_profile(apply_transform(c, CanonicalTransform.REFLECT)).kappa
    assert np.allclose(k_ref, -k, rtol=1e-12)


def test_turning_angle_unwrapped_past_full_turn():
    # 1.5 turns of a circle: theta must grow monotonically beyond 2*pi
    n = 60
    d = 2 * math.pi / n
    t = d * np.arange(int(1.5 * n) + 1)
    prof = curvature_profile(DiscreteCurve(np.column_stack([np.cos(t), np.sin(t)]), 2 * math.sin(d / 2)))
    assert np.all(np.diff(prof.theta) > 0)
    assert prof.theta[-1] - prof.theta[0] == pytest.approx(d * (len(prof.theta) - 1), rel=1e-12)


def test_R_and_dR_definitions():
    c = sample_lac(LacSegmentParams(2.0, 1.0, 0.0, 1.0, 0.4, 0.0, 0.0), 30)
    prof = curvature_profile(c)
    assert np.allclose(prof.R, -np.log(prof.kappa))
    assert np.allclose(prof.dR, -(prof.kappa[1:] - prof.kappa[:-1]) / prof.kappa[:-1])
    # independent check of the first curvature value from the edge vectors
    a, b = (c.points[1] - c.points[0]) / c.h, (c.points[2] - c.points[1]) / c.h
    k1 = 2 / c.h * (a[0] * b[1] - a[1] * b[0]) / (1 + a @ b)
    assert prof.kappa[0] == pytest.approx(k1, rel=1e-14)


def test_cusp_is_reported_with_its_index():
    pts = np.array([[0, 0], [1, 0], [2, 0], [1, 0], [0, 0]], dtype=float)
    with pytest.raises(CuspError) as exc:
        curvature_profile(DiscreteCurve(pts, 1.0))
    assert exc.value.index == 2


# -- canonicalization -----------------------------------------------------------


@pytest.mark.parametrize("kappa, tag", [
    ([3, 2, 1], CanonicalTransform.IDENTITY),
    ([1, 2, 3], CanonicalTransform.REFLECT_REVERSE),
    ([-1, -2, -3], CanonicalTransform.REVERSE),
    ([-3, -2, -1], CanonicalTransform.REFLECT),
])
def test_canonical_table(kappa, tag):
    assert choose_canonical_transform(kappa) is tag


@pytest.mark.parametrize("kappa, exc", [
    ([1, -1, -2], NotLacSegmentError),
    ([3, 2, 2.5], NotLacSegmentError),
    ([2, 2, 2], NotLacSegmentError),
    ([0, 0, 0], DegenerateInputError),
])
def test_canonical_errors(kappa, exc):
    with pytest.raises(exc):
        choose_canonical_transform(kappa)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(list(CanonicalTransform)), st.floats(-3, 3), st.sampled_from([-1.0, -0.5, 0.5, 2.0, 3.0]))
def test_canonicalized_curvature_is_positive_decreasing(moved_by, psi, alpha):
    c = sample_lac(LacSegmentParams(alpha, 1.0, 0.1, 0.4, 0.0, 0.0, 0.0), 30)
    c = apply_transform(DiscreteCurve.unchecked(c.points @ rot(psi).T, c.h), moved_by)
    tag = choose_canonical_transform(curvature_profile(c))
    k = curvature_profile(apply_transform(c, tag)).kappa
    assert np.all(k > 0) and np.all(np.diff(k) < 0)


# -- alpha and scale ----------------------------------------------------------


def _profile(kappa, h=0.1):
    """Profile with prescribed curvatures (the other fields are unused by the fits)."""
    kappa = np.asarray(kappa, float)
    n = len(kappa) + 1
    return CurvatureProfile(h=h, tangents=np.zeros((n, 2)), theta=np.zeros(n), kappa=kappa,
                            R=-np.log(kappa), dR=-(kappa[1:] - kappa[:-1]) / kappa[:-1])


def test_alpha_from_two_point_line_fit():
    # R = [1, 2] and log dR = [-1, -2]; build the curvatures that realize them
    k1 = math.exp(-1.0)
    k2 = k1 * (1 - math.exp(-1.0))
    k3 = k2 * (1 - math.exp(-2.0))
    prof = _profile([k1, k2, k3])
    prof = CurvatureProfile(prof.h, prof.tangents, prof.theta, prof.kappa,
                            np.array([1.0, 2.0, prof.R[2]]), np.exp([-1.0, -2.0]))
    slope, _ = oracles.normal_equations_slope([1.0, 2.0], [-1.0, -2.0])
    assert guess_alpha(prof) == pytest.approx(slope, rel=1e-12)
    assert slope == pytest.approx(1.0, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.01, 0.3), min_size=4, max_size=30))
def test_alpha_matches_normal_equations(drops):
    kappa = 5.0 * np.cumprod([1.0] + [1 - d for d in drops])
    prof = _profile(kappa)
    R, y = prof.R[:-1], np.log(prof.dR)
    if np.ptp(R) < 1e-6:
        return
    slope, _ = oracles.normal_equations_slope(R, y)
    assert guess_alpha(prof) == pytest.approx(slope, rel=1e-8, abs=1e-8)


@pytest.mark.parametrize("alpha", [2.0, -1.0])
def test_alpha_from_dense_exact_samples(alpha):
    c = sample_lac(LacSegmentParams(alpha, 1.0, 0.1, 0.5, 0.3, 0.0, 0.0), 400)
    assert guess_alpha(curvature_profile(c)) == pytest.approx(alpha, abs=0.05)


def test_alpha_rejects_noise_and_short_curves():
    c = sample_lac(LacSegmentParams(2.0, 1.0, 0.0, 1.0, 0.4, 0.0, 0.0), 200)
    noisy = DiscreteCurve.unchecked(add_noise(c, 1e-3 * c.length, 0), c.h)
    with pytest.raises(NoisyDataError):
        guess_alpha(curvature_profile(noisy))
    with pytest.raises(DegenerateInputError):
        guess_alpha(curvature_profile(DiscreteCurve(c.points[:4], c.h)))
    # R constant over the fitted range leaves the slope undetermined
    prof = _profile([2.0, 1.0, 0.5, 0.25])
    flat = CurvatureProfile(prof.h, prof.tangents, prof.theta, prof.kappa,
                            np.array([0.5, 0.5, 0.5, 1.0]), prof.dR)
    with pytest.raises(DegenerateInputError):
        guess_alpha(flat)


@pytest.mark.parametrize("S", [1.0, 2.0])
def test_scale_from_dense_exact_samples(S):
    c = sample_lac(LacSegmentParams(2.0, S, 0.1, 1.0, 0.3, 0.0, 0.0), 400)
    prof = curvature_profile(c)
    assert guess_scale(prof, guess_alpha(prof), c.h) == pytest.approx(S, rel=0.05)


@pytest.mark.parametrize("k", [0.1, 3.0, 40.0])
def test_scale_covariance(k):
    c = sample_lac(LacSegmentParams(2.0, 1.0, 0.1, 1.0, 0.3, 0.0, 0.0), 300)
    prof = curvature_profile(c)
    a = guess_alpha(prof)
    S = guess_scale(prof, a, c.h)
    big = DiscreteCurve.unchecked(k * c.points, k * c.h)
    prof_k = curvature_profile(big)
    assert guess_scale(prof_k, guess_alpha(prof_k), big.h) == pytest.approx(k * S, rel=1e-8)


def test_s0_and_length_from_dense_exact_samples():
    p = LacSegmentParams(2.0, 1.0, 0.1, 1.0, 0.0, 0.0, 0.0)
    c = sample_lac(p, 400)
    prof = curvature_profile(c)
    a = guess_alpha(prof)
    S = guess_scale(prof, a, c.h)
    s0, z = guess_s0_z(prof, a, S, c.h, len(c))
    assert s0 == pytest.approx(0.1, abs=0.02)
    assert z * (len(c) - 1) == pytest.approx(p.l, rel=0.05)
    assert z * S == pytest.approx(c.h, rel=1e-14)


# -- rotation and origin --------------------------------------------------------


def test_phi_origin_in_basic_pose():
    th = ThetaParams(0.0, 0.0, 0.004, 0.0, 0.004, 0.0, 2.0, 250)
    g = initial_guess(reconstruct(th))
    phi = (g.theta.phi + math.pi) % (2 * math.pi) - math.pi
    assert abs(phi) <= 10 * th.h
    assert math.hypot(g.theta.x0, g.theta.y0) <= 10 * th.h


def test_phi_origin_equivariance():
    th = ThetaParams(0.0, 0.0, 0.004, 0.2, 0.004, 0.1, 2.0, 250)
    c = reconstruct(th)
    g = initial_guess(c)
    psi, t = 1.1, np.array([2.0, -3.0])
    moved = DiscreteCurve.unchecked(c.points @ rot(psi).T + t, c.h)
    gm = initial_guess(moved)
    dphi = (gm.theta.phi - g.theta.phi - psi + math.pi) % (2 * math.pi) - math.pi
    assert abs(dphi) <= 1e-9
    # the moved guess reconstructs the moved curve as well as the original did
    e0 = np.max(np.hypot(*(reconstruct(g.theta).points - c.points).T))
    e1 = np.max(np.hypot(*(reconstruct(gm.theta).points - moved.points).T))
    assert e1 == pytest.approx(e0, rel=1e-6, abs=1e-12)


def test_phi_single_segment():
    theta0 = 0.8
    prof = CurvatureProfile(h=1.0, tangents=np.array([[math.cos(theta0), math.sin(theta0)]]),
                            theta=np.array([theta0]), kappa=np.array([]), R=np.array([]), dR=np.array([]))
    c = DiscreteCurve([[0.0, 0.0], [math.cos(theta0), math.sin(theta0)]], 1.0)
    phi, _, _ = guess_phi_origin(c, prof, 2.0, 1.0, 0.3, 0.1, 1.0)
    assert phi == pytest.approx((theta0 - basic_lac_turning_angle(2.0, 0.3)) % (2 * math.pi), rel=1e-14)


# -- full initial guess -------------------------------------------------------


CASES = [(2.0, 0.1, 0.0025, 0.7), (2.0, 0.3, 0.002, 5.0), (-1.0, 0.2, 0.001, 2.0),
         (0.5, 0.3, 0.003, 4.0), (3.0, 0.2, 0.002, 1.0), (-0.5, 0.5, 0.003, 3.0)]


@pytest.mark.parametrize("alpha, s0, z, phi", CASES)
def test_initial_guess_round_trip(alpha, s0, z, phi):
    th = ThetaParams(1.0, -2.0, 0.004, phi, z, s0, alpha, 400)
    g = initial_guess(reconstruct(th))
    assert g.transform is CanonicalTransform.IDENTITY and not g.clamped
    assert g.theta.h == th.h
    bar, ref = g.theta.as_array(), th.as_array()
    assert np.all(np.abs(bar - ref) <= 0.05 * np.abs(ref)), (bar - ref) / ref


def test_initial_guess_of_reflected_curve():
    th = ThetaParams(1.0, -2.0, 0.004, 0.7, 0.002, 0.3, 2.0, 300)
    c = reconstruct(th)
    g = initial_guess(c)
    gr = initial_guess(apply_transform(c, CanonicalTransform.REFLECT))
    assert gr.transform is CanonicalTransform.REFLECT
    assert gr.theta == g.theta


def test_initial_guess_rejects_straight_line():
    pts = np.column_stack([np.linspace(0, 1, 20), np.zeros(20)])
    with pytest.raises(DegenerateInputError):
        initial_guess(DiscreteCurve(pts, 1 / 19))


def test_initial_guess_alpha_override():
    th = ThetaParams(1.0, -2.0, 0.004, 0.7, 0.002, 0.3, 2.0, 300)
    g = initial_guess(reconstruct(th), alpha=2.5)
    assert g.theta.alpha == 2.5
    assert g.theta.is_feasible()
    for bad in (0.0, 1.0):
        with pytest.raises(DegenerateInputError):
            initial_guess(reconstruct(th), alpha=bad)


def test_initial_guess_clamps_into_domain():
    # a strongly mis-specified alpha pushes s0 outside the domain
    th = ThetaParams(0.0, 0.0, 0.004, 0.0, 0.004, 0.0, -1.0, 200)
    g = initial_guess(reconstruct(th), alpha=-3.0)
    assert g.clamped
    assert g.theta.is_feasible()
    reconstruct(g.theta)


def test_round_trip_objective_vanishes_with_refinement():
    # fixed length, halving h: the per-point misfit of the guess goes to zero
    ratios = []
    for N in (101, 201, 401):
        L = 1.0
        th = ThetaParams(0.0, 0.0, L / (N - 1), 0.3, 0.8 / (N - 1), 0.2, 2.0, N)
        c = reconstruct(th)
        g = initial_guess(c)
        ratios.append(objective(g.theta, c) / (N * th.h**2))
    assert ratios[2] < ratios[1] < ratios[0]
