"""Global minimisation of the Fréchet functional.

For atomic measures the left-continuous derivative, read as a function of
the cut-locus coordinate c of the evaluation point, is

    D(c) = c + pi - m - 2 pi nu([-pi, c))

which is affine with unit slope between consecutive atoms. Each gap between
sorted atoms therefore holds at most one critical point, found by solving one
affine equation; comparing the functional at those points gives every global
argmin exactly. :func:`grid_oracle` is a brute-force check that works for any
measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .frechet import derivative_values, functional_values
from .geometry import PI, TWO_PI, CirclePoint, PointLike, as_angle, coord_distance_array, wrap, wrap_array
from .measures import ATOM_MERGE_TOL, CircularMeasure

DEFAULT_TIE_TOL = 1e-9


@dataclass(frozen=True)
class CriticalPoint:
    angle: float  # absolute coordinate (chart at (1, 0))
    coord: float  # coordinate in the working chart
    value: float
    left_derivative: float
    right_derivative: float
    is_local_min: bool
    branch_index: int

    @property
    def point(self) -> CirclePoint:
        return CirclePoint.from_angle(self.angle)


@dataclass
class MeanResult:
    argmins: List[CriticalPoint]
    unique: bool
    min_value: float
    runner_up_gap: float
    local_minima: List[CriticalPoint] = field(default_factory=list)
    boundary_points: List[CriticalPoint] = field(default_factory=list)
    method: str = "exact"

    @property
    def best(self) -> CriticalPoint:
        return self.argmins[0]

    def to_dict(self, max_listed: int = 64) -> dict:
        # a flat functional (uniform measure) has a continuum of argmins
        gap = self.runner_up_gap
        shown = self.argmins[:max_listed]
        return {
            "method": self.method,
            "argmins": [cp.angle for cp in shown],
            "argmin_values": [cp.value for cp in shown],
            "n_argmins": len(self.argmins),
            "min_value": self.min_value,
            "unique": self.unique,
            "runner_up_gap": None if math.isinf(gap) else gap,
            "n_local_minima": len(self.local_minima),
        }


def _summarise(local_minima: List[CriticalPoint], tie_tol: float, method: str,
               boundary: Optional[List[CriticalPoint]] = None) -> MeanResult:
    if not local_minima:
        raise RuntimeError("no local minimum found; the functional must attain its minimum")
    ranked = sorted(local_minima, key=lambda cp: cp.value)
    best = ranked[0].value
    argmins = [cp for cp in ranked if cp.value <= best + tie_tol]
    gap = ranked[1].value - best if len(ranked) > 1 else math.inf
    return MeanResult(
        argmins=argmins,
        unique=len(argmins) == 1,
        min_value=best,
        runner_up_gap=gap,
        local_minima=sorted(local_minima, key=lambda cp: cp.angle),
        boundary_points=boundary or [],
        method=method,
    )


def critical_points(mu: CircularMeasure, base: Optional[PointLike] = None) -> List[CriticalPoint]:
    """All critical points of F for an atomic measure, sorted by angle.

    Regular critical points (no mass at their cut locus) are exactly the
    local minima. A solution landing on an atom is kept as a boundary
    critical point with ``is_local_min=False``.
    """
    if not mu.is_atomic:
        raise ValueError("the exact solver handles atomic measures only; use grid_oracle")
    theta0 = mu.atom_positions[0] if base is None else as_angle(base)
    nu = mu.chart(theta0)
    t, w = nu.atom_pos, nu.atom_mass
    n = t.size
    cum = np.cumsum(w)[:-1]
    m = nu.mean()
    tol = ATOM_MERGE_TOL
    # gap i (1 <= i < n) is (t[i-1], t[i]); gap 0 is the arc from t[n-1] round to t[0]
    c = np.empty(n)
    c[0] = wrap(m - PI)
    c[1:] = m - PI + TWO_PI * cum
    lo = np.roll(t, 1)
    hi = t
    width = np.mod(hi - lo, TWO_PI)
    width[width == 0] = TWO_PI
    into = np.mod(c - lo, TWO_PI)
    to_end = np.mod(hi - c, TWO_PI)
    inside = (into > tol) & (into < width + tol)
    # only gap 0 crosses the seam; elsewhere a shift by 2 pi is not a solution
    inside[1:] &= (c[1:] > -PI) & (c[1:] < PI + tol)
    interior = inside & (to_end > tol) & (to_end < TWO_PI - tol)
    # solutions sitting on the upper atom: mass at their own cut locus
    boundary = inside & ~interior & (np.minimum(to_end, TWO_PI - to_end) <= tol)
    keep = np.nonzero(interior | boundary)[0]
    if keep.size == 0:
        return []
    cc = c[keep]
    theta = wrap_array(cc + PI)
    values = functional_values(nu, theta)
    left, right = derivative_values(nu, theta)
    out = []
    for k, i in enumerate(keep):
        out.append(CriticalPoint(
            angle=wrap(theta0 + theta[k]),
            coord=float(theta[k]),
            value=float(values[k]),
            left_derivative=float(left[k]),
            right_derivative=float(right[k]),
            is_local_min=bool(interior[i]),
            branch_index=int(i),
        ))
    return sorted(out, key=lambda cp: cp.angle)


def frechet_mean(mu: CircularMeasure, tie_tol: float = DEFAULT_TIE_TOL,
                 base: Optional[PointLike] = None) -> MeanResult:
    """Every global argmin of F for an atomic measure."""
    if tie_tol < 0:
        raise ValueError("tie_tol must be nonnegative")
    cps = critical_points(mu, base)
    minima = [cp for cp in cps if cp.is_local_min]
    return _summarise(minima, tie_tol, "exact", [cp for cp in cps if not cp.is_local_min])


_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


def _golden(f, a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    """Vectorised golden-section search on the brackets [a, b]."""
    c = b - _GOLD * (b - a)
    d = a + _GOLD * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(200):
        if np.max(b - a) <= tol:
            break
        left = fc < fd
        a, b = np.where(left, a, c), np.where(left, d, b)
        new = np.where(left, b - _GOLD * (b - a), a + _GOLD * (b - a))
        fnew = f(new)
        c, d, fc, fd = (
            np.where(left, new, d),
            np.where(left, c, new),
            np.where(left, fnew, fd),
            np.where(left, fc, fnew),
        )
        # keep c < d
        swap = c > d
        c, d = np.where(swap, d, c), np.where(swap, c, d)
        fc, fd = np.where(swap, fd, fc), np.where(swap, fc, fd)
    pts = np.stack([a, b, c, d, 0.5 * (a + b)])
    vals = np.stack([f(p) for p in pts])
    return pts[np.argmin(vals, axis=0), np.arange(a.size)]


def _polish(nu, x: np.ndarray, h: float, iters: int = 80) -> np.ndarray:
    """Bisection on the sign change of the derivative inside [x - h, x + h]."""
    lo, hi = x - h, x + h
    dlo = derivative_values(nu, wrap_array(lo))[0]
    dhi = derivative_values(nu, wrap_array(hi))[0]
    ok = (dlo < 0) & (dhi > 0)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        dm = derivative_values(nu, wrap_array(mid))[0]
        lo = np.where(ok & (dm < 0), mid, lo)
        hi = np.where(ok & (dm >= 0), mid, hi)
    return np.where(ok, 0.5 * (lo + hi), x)


def grid_oracle(mu: CircularMeasure, resolution: int = 4096, tie_tol: float = DEFAULT_TIE_TOL,
                tol: float = 1e-10, polish: bool = False) -> MeanResult:
    """Brute-force global minimiser: grid scan then golden-section refinement.

    With ``polish`` the refined points are moved onto the zero of the
    derivative by bisection, which makes them critical to rounding accuracy.
    """
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    nu = mu.chart(0.0)
    h = TWO_PI / resolution
    grid = -PI + h * np.arange(resolution)
    f = functional_values(nu, grid)
    is_min = (f <= np.roll(f, 1)) & (f <= np.roll(f, -1))
    x0 = grid[is_min]

    def F(x):
        return functional_values(nu, wrap_array(x))

    x = _golden(F, x0 - h, x0 + h, tol)
    if polish:
        px = _polish(nu, x, h)
        # F is flat to rounding here, so only reject a clearly worse point
        better = F(px) <= F(x) + 1e-12 * np.maximum(1.0, F(x))
        x = np.where(better, px, x)
    x = wrap_array(x)
    vals = F(x)
    order = np.argsort(vals, kind="stable")
    kept: List[int] = []
    for i in order:
        if kept and np.min(coord_distance_array(x[kept], x[i])) < 1e-7:
            continue
        kept.append(int(i))
    left, right = derivative_values(nu, x[kept])
    minima = [
        CriticalPoint(angle=float(x[i]), coord=float(x[i]), value=float(vals[i]),
                      left_derivative=float(left[k]), right_derivative=float(right[k]),
                      is_local_min=True, branch_index=-1)
        for k, i in enumerate(kept)
    ]
    return _summarise(minima, tie_tol, "grid_oracle")
