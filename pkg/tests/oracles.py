"""Reference computations that share no code with the package.

Closed forms are re-typed from their definitions, positions come from
scipy's QUADPACK or a brute-force composite Simpson rule.
"""

import math

import numpy as np
from scipy.integrate import quad


def turning_angle(alpha, s):
    if alpha == 0:
        return 1.0 - math.exp(-s)
    if alpha == 1:
        return math.log1p(s)
    return ((1.0 + alpha * s) ** ((alpha - 1.0) / alpha) - 1.0) / (alpha - 1.0)


def curvature(alpha, s):
    return math.exp(-s) if alpha == 0 else (1.0 + alpha * s) ** (-1.0 / alpha)


def xi_quad(alpha, s):
    """Basic-curve position by adaptive Gauss-Kronrod quadrature."""
    opts = dict(epsabs=1e-13, epsrel=1e-13, limit=200)
    x = quad(lambda t: math.cos(turning_angle(alpha, t)), 0.0, s, **opts)[0]
    y = quad(lambda t: math.sin(turning_angle(alpha, t)), 0.0, s, **opts)[0]
    return np.array([x, y])


def xi_simpson(alpha, s, n=1_000_000):
    """Composite Simpson rule with ``n`` (even) subintervals."""
    t = np.linspace(0.0, s, n + 1)
    if alpha == 0:
        th = 1.0 - np.exp(-t)
    else:
        th = ((1.0 + alpha * t) ** ((alpha - 1.0) / alpha) - 1.0) / (alpha - 1.0)
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    dt = s / n
    return np.array([np.dot(w, np.cos(th)), np.dot(w, np.sin(th))]) * dt / 3.0


def segment_point(alpha, S, s0, phi, x0, y0, s):
    """Point at arc length ``s`` of the scaled, rotated, shifted basic curve piece."""
    d = xi_quad(alpha, s / S + s0) - xi_quad(alpha, s0)
    c, sn = math.cos(phi), math.sin(phi)
    return np.array([x0 + S * (c * d[0] - sn * d[1]), y0 + S * (sn * d[0] + c * d[1])])


def direct_objective(points, target):
    """Half sum of squared distances, accumulated point by point."""
    total = 0.0
    for p, q in zip(points, target):
        total += 0.5 * ((p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2)
    return total


def normal_equations_slope(R, y):
    """Slope ``a`` of the least-squares fit ``y = c - a*R`` via a 2x2 solve."""
    A = np.column_stack([np.ones_like(R), -np.asarray(R, float)])
    c, a = np.linalg.solve(A.T @ A, A.T @ np.asarray(y, float))
    return a, c
