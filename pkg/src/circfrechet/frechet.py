"""Exact Fréchet functional, its one-sided derivatives and the centred gap G.

Everything is evaluated from partial moments of the charted measure, so
densities are integrated in closed form cell by cell and atoms are summed
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import PI, TWO_PI, Angle, PointLike, as_angle, wrap
from .measures import ATOM_MERGE_TOL, CircularMeasure, LineMeasure

CRITICAL_TOL = 1e-8


class NotCriticalError(ValueError):
    """Raised when a routine needs a critical point and did not get one."""

    def __init__(self, measured_mean: float, tol: float):
        self.measured_mean = measured_mean
        super().__init__(
            f"point is not a critical point: |m| = {abs(measured_mean):.3e} exceeds {tol:.1e}"
        )


@dataclass(frozen=True)
class FrechetEvaluation:
    theta: Angle
    value: float
    left_derivative: float
    right_derivative: float
    # right minus left; the derivative only ever drops, by 2 pi times the
    # mass sitting at the cut locus
    jump: float


def _split(theta: np.ndarray):
    """Cut-locus coordinate and the two shifts of the piecewise formula."""
    upper = theta >= 0
    cut = np.where(upper, theta - PI, theta + PI)
    s_low = np.where(upper, theta - TWO_PI, theta)
    s_high = np.where(upper, theta, theta + TWO_PI)
    return upper, cut, s_low, s_high


def functional_values(nu: LineMeasure, theta) -> np.ndarray:
    """F at chart coordinates ``theta`` (array in [-pi, pi))."""
    theta = np.asarray(theta, dtype=float)
    _, cut, s1, s2 = _split(theta)
    m0, m1, m2 = nu.partial_moments(cut)
    t0, t1, t2 = nu.total_mass, nu.mean(), nu.second_moment()
    low = m2 - 2.0 * s1 * m1 + s1 * s1 * m0
    high = (t2 - m2) - 2.0 * s2 * (t1 - m1) + s2 * s2 * (t0 - m0)
    # nonnegative by definition; cancellation can leave a tiny negative
    return np.maximum(0.5 * (low + high), 0.0)


def derivative_values(nu: LineMeasure, theta, tol: float = ATOM_MERGE_TOL):
    """(left, right) derivatives of F at chart coordinates ``theta``."""
    theta = np.asarray(theta, dtype=float)
    upper, cut, _, _ = _split(theta)
    m = nu.mean()
    below = nu.mass_below(cut, inclusive=False, tol=tol)
    upto = nu.mass_below(cut, inclusive=True, tol=tol)
    t0 = nu.total_mass
    left = np.where(upper, theta - m - TWO_PI * below, theta - m + TWO_PI * (t0 - below))
    right = np.where(upper, theta - m - TWO_PI * upto, theta - m + TWO_PI * (t0 - upto))
    return left, right


def functional(mu: CircularMeasure, p: PointLike) -> float:
    """F_mu(p) = 1/2 * integral of d(x, p)^2 dmu(x)."""
    return float(functional_values(mu.chart(0.0), as_angle(p)))


def functional_in_chart(mu: CircularMeasure, theta, base: PointLike = 0.0) -> np.ndarray:
    return functional_values(mu.chart(base), theta)


def derivative(mu: CircularMeasure, p0: PointLike, theta: float) -> FrechetEvaluation:
    """Both one-sided derivatives of F in the chart centred at ``p0``.

    The left value is the left-continuous extension used for critical
    points; an atom at the cut locus of e_{p0}(theta) makes the right value
    smaller by 2 pi times its mass.
    """
    theta = wrap(theta)
    nu = mu.chart(p0)
    left, right = derivative_values(nu, theta)
    return FrechetEvaluation(
        theta=theta,
        value=float(functional_values(nu, theta)),
        left_derivative=float(left),
        right_derivative=float(right),
        jump=float(right - left),
    )


def check_critical(nu: LineMeasure, tol: float = CRITICAL_TOL) -> None:
    if abs(nu.mean()) > tol:
        raise NotCriticalError(nu.mean(), tol)


def g_centered_values(nu: LineMeasure, theta) -> np.ndarray:
    """G(theta) = F(theta) - F(0) in a chart centred at a critical point."""
    theta = np.asarray(theta, dtype=float)
    upper, cut, _, _ = _split(theta)
    m0, m1, _ = nu.partial_moments(cut)
    t0, t1 = nu.total_mass, nu.mean()
    g_plus = (PI - theta) * m0 + m1
    g_minus = (PI + theta) * (t0 - m0) - (t1 - m1)
    return 0.5 * theta * theta - theta * t1 + TWO_PI * np.where(upper, g_plus, g_minus)


def g_centered(mu: CircularMeasure, p_star: PointLike, theta, tol: float = CRITICAL_TOL):
    """Centred functional G about a critical point ``p_star``."""
    nu = mu.chart(p_star)
    check_critical(nu, tol)
    out = g_centered_values(nu, np.asarray(theta, dtype=float))
    return float(out) if np.ndim(theta) == 0 else out
