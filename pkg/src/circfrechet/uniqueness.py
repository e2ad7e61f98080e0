"""Certify or refute uniqueness of the Fréchet mean at a critical point.

In the chart centred at a critical point p*, uniqueness is equivalent to
strict positivity, for every theta != 0, of

    I(theta) = integral_0^theta (t / 2pi - nu([-pi, -pi + t))) dt     (theta > 0)

and of its mirror image for theta < 0. Written in terms of the cut-locus
coordinate x of e_{p*}(theta), both branches are piecewise quadratic in x
with breakpoints at atoms and density edges, so the minimum over competing
basins can be located exactly. The integral is built here from the running
integral of the CDF; :func:`circfrechet.frechet.g_centered_values` computes
the same quantity (times 2 pi) from partial moments and serves as a cross
check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .frechet import CRITICAL_TOL, check_critical, g_centered_values
from .geometry import PI, TWO_PI, CirclePoint, PointLike, as_angle
from .measures import CircularMeasure, LineMeasure
from .solver import DEFAULT_TIE_TOL, MeanResult, frechet_mean, grid_oracle

BOUNDARY_TOL = 1e-12
# candidates this close to x = -pi or x = pi are the trivial zero at theta = 0
END_TOL = 1e-9


class VerdictMismatch(RuntimeError):
    """Solver multiplicity and certificate disagree (a tolerance conflict)."""

    def __init__(self, result: MeanResult, certificate: "UniquenessCertificate"):
        self.result = result
        self.certificate = certificate
        super().__init__(
            f"solver says unique={result.unique} (runner-up gap {result.runner_up_gap!r}) "
            f"but certificate says holds={certificate.holds} (margin {certificate.margin!r})"
        )


@dataclass(frozen=True)
class UniquenessCertificate:
    critical_point: CirclePoint
    angle: float
    holds: bool
    # min of the integral over competing basins; inf when there is none
    margin: float
    violating_theta: Optional[float]
    at_boundary: bool
    consistency_error: float

    def to_dict(self) -> dict:
        return {
            "critical_point": self.angle,
            "holds": self.holds,
            "margin": None if math.isinf(self.margin) else self.margin,
            "competing_basin": not math.isinf(self.margin),
            "violating_theta": self.violating_theta,
            "at_boundary": self.at_boundary,
            "consistency_error": self.consistency_error,
        }


class CutProfile:
    """The centred integral as a piecewise quadratic in the cut coordinate x.

    On piece k, ``[b[k], b[k+1])``, the CDF is ``cdf_at[k] + slope[k] * (x - b[k])``
    where ``cdf_at[k]`` includes any atom sitting at ``b[k]``. ``J`` is the
    running integral of the CDF from -pi.
    """

    def __init__(self, nu: LineMeasure):
        pts = np.concatenate([[-PI, PI], nu.atom_pos, nu.edges])
        b = np.unique(pts[(pts >= -PI) & (pts <= PI)])
        widths = np.diff(b)
        mids = 0.5 * (b[:-1] + b[1:])
        k = np.clip(np.searchsorted(nu.edges, mids, side="right") - 1, 0, nu.dens.size - 1)
        slope = nu.dens[k]
        atom_at = np.zeros(b.size)
        if nu.atom_pos.size:
            idx = np.searchsorted(b, nu.atom_pos)
            np.add.at(atom_at, idx, nu.atom_mass)
        # accumulate the CDF across pieces: atom jump at the left end, then density
        cdf_at = np.empty(b.size - 1)
        run = 0.0
        for i in range(b.size - 1):
            run += atom_at[i]
            cdf_at[i] = run
            run += slope[i] * widths[i]
        J = np.concatenate([[0.0], np.cumsum(widths * cdf_at + 0.5 * slope * widths ** 2)])
        self.b, self.slope, self.cdf_at, self.J = b, slope, cdf_at, J
        self.total = float(nu.total_mass)

    def cdf_integral(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        k = np.clip(np.searchsorted(self.b, x, side="right") - 1, 0, self.slope.size - 1)
        dx = x - self.b[k]
        return self.J[k] + dx * self.cdf_at[k] + 0.5 * self.slope[k] * dx * dx

    def integral(self, x) -> np.ndarray:
        """Uniqueness integral at the point whose cut coordinate is ``x``."""
        x = np.asarray(x, dtype=float)
        Jx = self.cdf_integral(x)
        theta_plus = x + PI
        theta_minus = x - PI
        plus = theta_plus ** 2 / (4 * PI) - Jx
        minus = theta_minus ** 2 / (4 * PI) + theta_minus * self.total + self.J[-1] - Jx
        return np.where(x < 0, plus, minus)

    def basin_candidates(self) -> np.ndarray:
        """Cut coordinates of interior local minima of the integral."""
        b, s, a = self.b, 1.0 / TWO_PI - self.slope, self.cdf_at
        d_left = (b[:-1] + PI) / TWO_PI - a  # derivative at the start of each piece
        d_right = d_left + s * np.diff(b)
        flat = (np.abs(s) <= 1e-12) & (np.abs(d_left) <= 1e-12) & (np.abs(d_right) <= 1e-12)
        out = [b[:-1][flat], b[1:][flat]]
        rising = (s > 1e-12) & ~flat
        with np.errstate(divide="ignore", invalid="ignore"):
            xs = b[:-1] - d_left / s
        inside = rising & (xs >= b[:-1]) & (xs <= b[1:])
        out.append(xs[inside])
        x = np.concatenate(out)
        return np.unique(x[(x > -PI + END_TOL) & (x < PI - END_TOL)])

    def minimum_on(self, lo: float, hi: float) -> Tuple[float, float]:
        """Exact minimum of the integral over the closed interval [lo, hi]."""
        b, s, a = self.b, 1.0 / TWO_PI - self.slope, self.cdf_at
        inner = b[(b > lo) & (b < hi)]
        d_left = (b[:-1] + PI) / TWO_PI - a
        with np.errstate(divide="ignore", invalid="ignore"):
            xs = b[:-1] - d_left / s
        ok = np.isfinite(xs) & (xs >= b[:-1]) & (xs <= b[1:]) & (xs >= lo) & (xs <= hi)
        # left limits at atoms: the integral is continuous, so breakpoints suffice
        cand = np.concatenate([[lo, hi], inner, xs[ok]])
        vals = self.integral(cand)
        i = int(np.argmin(vals))
        return float(vals[i]), float(cand[i])


def theta_from_cut(x):
    """Chart coordinate of the point whose cut locus sits at ``x``."""
    x = np.asarray(x, dtype=float)
    return np.where(x < 0, x + PI, x - PI)


def centred_integral(mu: CircularMeasure, p_star: PointLike, theta) -> np.ndarray:
    """Uniqueness integral at chart coordinates ``theta`` around ``p_star``."""
    nu = mu.chart(p_star)
    theta = np.asarray(theta, dtype=float)
    x = np.where(theta >= 0, theta - PI, theta + PI)
    return CutProfile(nu).integral(x)


def certify(mu: CircularMeasure, p_star: PointLike, tol: float = CRITICAL_TOL) -> UniquenessCertificate:
    """Decide whether the critical point ``p_star`` is the unique Fréchet mean.

    Raises :class:`~circfrechet.frechet.NotCriticalError` if ``p_star`` is
    not a critical point. The certificate is meaningful at a global argmin;
    at other critical points the verdict is not defined.
    """
    theta0 = as_angle(p_star)
    nu = mu.chart(theta0)
    check_critical(nu, tol)
    prof = CutProfile(nu)
    cands = prof.basin_candidates()
    if cands.size:
        vals = prof.integral(cands)
        i = int(np.argmin(vals))
        margin, x_star = float(vals[i]), float(cands[i])
    else:
        margin, x_star = math.inf, None
    at_boundary = abs(margin) <= BOUNDARY_TOL
    if at_boundary:
        margin = 0.0
    holds = margin > 0
    violating = None if holds else float(theta_from_cut(x_star))

    # 2 pi * integral must reproduce F(theta) - F(0) computed from moments
    probe = np.concatenate([np.linspace(-PI + 1e-9, PI - 1e-9, 257), cands])
    lhs = TWO_PI * prof.integral(probe)
    rhs = g_centered_values(nu, theta_from_cut(probe))
    err = float(np.max(np.abs(lhs - rhs)))
    if err > 1e-9 + 10.0 * abs(nu.mean()):
        raise RuntimeError(f"integral identity violated by {err:.3e}")
    return UniquenessCertificate(
        critical_point=CirclePoint.from_angle(theta0),
        angle=theta0,
        holds=holds,
        margin=margin,
        violating_theta=violating,
        at_boundary=at_boundary,
        consistency_error=err,
    )


def outer_branch_minimum(mu: CircularMeasure, p_star: PointLike, phi: float) -> float:
    """min of G = F(theta) - F(0) over |theta| >= pi - phi, computed exactly."""
    nu = mu.chart(p_star)
    check_critical(nu)
    val, _ = CutProfile(nu).minimum_on(-phi, phi)
    return TWO_PI * val


def find_mean_and_certify(mu: CircularMeasure, tie_tol: float = DEFAULT_TIE_TOL,
                          resolution: int = 8192) -> Tuple[MeanResult, UniquenessCertificate]:
    """Locate the mean (exact solver or grid oracle) and certify it.

    Raises :class:`VerdictMismatch` if the two verdicts disagree.
    """
    if mu.is_atomic:
        res = frechet_mean(mu, tie_tol)
    else:
        res = grid_oracle(mu, resolution, tie_tol, polish=True)
    cert = certify(mu, res.best.angle)
    if res.unique != cert.holds:
        raise VerdictMismatch(res, cert)
    return res, cert


def boundary_hemisphere_measure(theta_hat: float) -> CircularMeasure:
    """(1 - eps) delta_{theta_hat - pi/2} + eps delta_{theta_hat + pi/2} with 0 critical.

    The weight eps = 1/2 - theta_hat / pi puts the barycenter at 0; the
    functional then has two global argmins, 0 and wrap(2 theta_hat - pi).
    """
    if not -PI / 2 < theta_hat < PI / 2:
        raise ValueError("theta_hat must lie in (-pi/2, pi/2)")
    eps = 0.5 - theta_hat / PI
    return CircularMeasure.atomic([theta_hat - PI / 2, theta_hat + PI / 2], [1.0 - eps, eps])
