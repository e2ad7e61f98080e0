"""The P(alpha, phi) density criterion and the existence guarantee built on it.

A density f satisfies P(p, alpha, phi) when, in the chart centred at p,
f_p(theta) <= (1 - alpha) / (2 pi) for every |theta| >= phi. Such a density
has a unique Fréchet mean near p as soon as phi < phi_alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .geometry import PI, TWO_PI, CirclePoint, PointLike, as_point, coord_distance, wrap_array
from .measures import CircularMeasure

DENSITY_SLACK = 1e-15
N_CENTERS = 720
ALPHA_STEP = 0.01


@dataclass(frozen=True)
class CriterionParams:
    p: CirclePoint
    alpha: float
    phi: float

    def __post_init__(self):
        if not isinstance(self.p, CirclePoint):
            object.__setattr__(self, "p", as_point(self.p))
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0.0 < self.phi < PI:
            raise ValueError(f"phi must lie in (0, pi), got {self.phi}")

    @property
    def center(self) -> float:
        return self.p.angle

    @property
    def bound(self) -> float:
        """Allowed density value outside the window."""
        return (1.0 - self.alpha) / TWO_PI

    def to_dict(self) -> dict:
        return {"center": self.center, "alpha": self.alpha, "phi": self.phi}


def _require_density(mu: CircularMeasure) -> np.ndarray:
    if mu.has_atoms or mu.density is None:
        raise ValueError("the P(alpha, phi) criterion applies to atomless densities only")
    return mu.density


def _reach(M: int, center: float) -> np.ndarray:
    """sup of |theta| over each grid cell, in the chart centred at ``center``.

    Cells are half-open, so a cell ending exactly at phi does not reach it.
    """
    h = TWO_PI / M
    a = wrap_array(-PI + h * np.arange(M) - center)
    end = a + h
    # a cell running past pi contains points arbitrarily close to -pi
    r = np.maximum(-a, np.nextafter(end, -np.inf))
    return np.where(end > PI, PI, r)


def satisfies_P(mu: CircularMeasure, params: CriterionParams) -> bool:
    """True iff every cell meeting {|theta| >= phi} respects the density bound."""
    dens = _require_density(mu)
    outer = _reach(dens.size, params.center) >= params.phi
    if not outer.any():
        return True
    return bool(dens[outer].max() <= params.bound + DENSITY_SLACK)


def phi_alpha(alpha: float) -> float:
    """Largest admissible window, pi sqrt(alpha) / (1 + sqrt(alpha))."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    r = math.sqrt(alpha)
    return PI * r / (1.0 + r)


def _cubic(x: float, delta: float) -> float:
    d = delta
    return ((5 - 6 * d + d * d) * x + (1 - d * d)) * x * x - (2 * d + 1) * x - 1


def alpha_delta(delta: float, tol: float = 1e-12) -> float:
    """Concentration threshold: squared root in (0, 1] of the cubic in delta."""
    if not 0.0 < delta <= 0.5:
        raise ValueError(f"delta must lie in (0, 1/2], got {delta}")
    lo, hi = 0.0, 1.0
    flo, fhi = _cubic(lo, delta), _cubic(hi, delta)
    if fhi == 0.0:
        return 1.0
    if flo * fhi > 0:
        raise ArithmeticError(f"cubic has no sign change on (0, 1] for delta={delta}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (_cubic(mid, delta) < 0) == (flo < 0):
            lo = mid
        else:
            hi = mid
    r = 0.5 * (lo + hi)
    return r * r


def translate(params: CriterionParams, p2: PointLike) -> CriterionParams:
    """Move the centre to ``p2``, widening the window by the distance moved."""
    p2 = as_point(p2)
    d = coord_distance(params.center, p2.angle)
    if params.phi >= PI / 2:
        raise ValueError("translation needs phi < pi/2")
    if d >= PI - params.phi:
        raise ValueError(f"new centre too far: distance {d} >= pi - phi")
    return CriterionParams(p2, params.alpha, params.phi + d)


def weaken(params: CriterionParams, alpha: float, phi: float) -> CriterionParams:
    """Looser parameters (smaller alpha, wider window) implied by ``params``."""
    if alpha > params.alpha or phi < params.phi:
        raise ValueError("weaken needs alpha <= params.alpha and phi >= params.phi")
    return CriterionParams(params.p, alpha, phi)


def mean_bound(alpha: Union[float, CriterionParams], phi: Optional[float] = None) -> float:
    """Bound on |m(mu_p)| for densities in P(p, alpha, phi).

    Accepts either a :class:`CriterionParams` or the pair (alpha, phi); the
    pair form also allows the degenerate alpha = 0.
    """
    if isinstance(alpha, CriterionParams):
        alpha, phi = alpha.alpha, alpha.phi
    if phi is None:
        raise TypeError("phi is required when alpha is given as a number")
    if not 0.0 <= alpha <= 1.0 or not 0.0 <= phi <= PI:
        raise ValueError("need 0 <= alpha <= 1 and 0 <= phi <= pi")
    return phi + (1.0 - alpha) * (PI - phi) ** 2 / (4.0 * PI)


def gamma(alpha: float, phi: float) -> float:
    """Lower bound for G on the outer branches, (alpha (pi - phi)^2 - phi^2) / 2."""
    return 0.5 * (alpha * (PI - phi) ** 2 - phi * phi)


def alpha_grid(delta: float) -> np.ndarray:
    a0 = alpha_delta(delta)
    steps = int(math.floor((1.0 - a0) / ALPHA_STEP + 1e-9))
    grid = a0 + ALPHA_STEP * np.arange(steps + 1)
    return grid[grid <= 1.0]


def guarantee_existence(mu: CircularMeasure, delta: float,
                        n_centers: int = N_CENTERS) -> Optional[CriterionParams]:
    """Search for (p, alpha, phi) with alpha >= alpha_delta and phi = delta * phi_alpha.

    Centres are scanned in increasing angle from -pi and alpha in increasing
    order; the first hit is returned. ``None`` means no witness on the grid,
    which says nothing against uniqueness.
    """
    if not 0.0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
    dens = _require_density(mu)
    alphas = alpha_grid(delta)
    phis = np.array([delta * phi_alpha(a) for a in alphas])
    bounds = (1.0 - alphas) / TWO_PI + DENSITY_SLACK
    for j in range(n_centers):
        c = -PI + TWO_PI * j / n_centers
        r = _reach(dens.size, c)
        order = np.argsort(r)
        r_sorted = r[order]
        # worst density over cells whose reach is at least phi
        suffix_max = np.maximum.accumulate(dens[order][::-1])[::-1]
        k = np.searchsorted(r_sorted, phis, side="left")
        worst = np.where(k < r.size, suffix_max[np.minimum(k, r.size - 1)], 0.0)
        ok = np.nonzero(worst <= bounds)[0]
        if ok.size:
            i = int(ok[0])
            return CriterionParams(CirclePoint.from_angle(c), float(alphas[i]), float(phis[i]))
    return None
