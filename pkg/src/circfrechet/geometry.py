"""Angles, points and the arclength metric on the unit circle.

Every chart coordinate lives in the half-open interval [-pi, pi); pi itself is
always folded onto -pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

PI = math.pi
TWO_PI = 2.0 * math.pi

# A chart coordinate in [-pi, pi). Plain floats are used throughout.
Angle = float


def wrap(t: float) -> Angle:
    """Canonical representative of ``t`` modulo 2*pi in [-pi, pi)."""
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"cannot wrap non-finite angle {t!r}")
    r = math.remainder(t, TWO_PI)
    if r >= PI:
        r -= TWO_PI
    return r


def wrap_array(t) -> np.ndarray:
    """Vectorised :func:`wrap` (not exact for huge multiples of 2*pi)."""
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("cannot wrap non-finite angles")
    r = np.mod(t + PI, TWO_PI) - PI
    return np.where(r >= PI, r - TWO_PI, r)


@dataclass(frozen=True)
class CirclePoint:
    x: float
    y: float

    def __post_init__(self):
        if abs(self.x * self.x + self.y * self.y - 1.0) > 1e-12:
            raise ValueError(f"({self.x}, {self.y}) is not on the unit circle")

    @classmethod
    def from_angle(cls, theta: float) -> "CirclePoint":
        return cls(math.cos(theta), math.sin(theta))

    @property
    def angle(self) -> Angle:
        """Coordinate in the chart centred at (1, 0)."""
        return wrap(math.atan2(self.y, self.x))

    def __neg__(self) -> "CirclePoint":
        return CirclePoint(-self.x, -self.y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


PointLike = Union[CirclePoint, float]


def as_angle(p: PointLike) -> Angle:
    """Absolute coordinate of a point given either as CirclePoint or angle."""
    if isinstance(p, CirclePoint):
        return p.angle
    return wrap(p)


def as_point(p: PointLike) -> CirclePoint:
    if isinstance(p, CirclePoint):
        return p
    return CirclePoint.from_angle(float(p))


def arclength_distance(p1: CirclePoint, p2: CirclePoint) -> float:
    """Geodesic distance 2 asin(|p1 - p2| / 2), always in [0, pi]."""
    chord = math.hypot(p1.x - p2.x, p1.y - p2.y)
    return 2.0 * math.asin(min(1.0, chord / 2.0))


def coord_distance(t1: float, t2: float) -> float:
    """min_k |t1 - t2 + 2 pi k|."""
    return abs(wrap(t1 - t2))


def coord_distance_array(t1, t2) -> np.ndarray:
    return np.abs(wrap_array(np.asarray(t1, dtype=float) - np.asarray(t2, dtype=float)))


def exp_map(p0: CirclePoint, t: float) -> CirclePoint:
    """Rotate ``p0`` by ``t`` radians."""
    c, s = math.cos(t), math.sin(t)
    x = c * p0.x - s * p0.y
    y = s * p0.x + c * p0.y
    # renormalise so the unit-norm invariant survives repeated rotations
    r = math.hypot(x, y)
    return CirclePoint(x / r, y / r)


def log_map(p0: CirclePoint, p: CirclePoint) -> Angle:
    """Coordinate of ``p`` in the normal chart centred at ``p0``."""
    cross = p0.x * p.y - p0.y * p.x
    dot = p0.x * p.x + p0.y * p.y
    return wrap(math.atan2(cross, dot))


def cut_locus_coord(t: float) -> Angle:
    """Chart coordinate of the antipode of the point with coordinate ``t``."""
    t = wrap(t)
    if t >= 0.0:
        return t - PI
    return t + PI
