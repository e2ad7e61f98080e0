"""Probability measures on the circle and their images in normal charts.

A :class:`CircularMeasure` is a mixture of finitely many atoms and a
piecewise-constant density on a uniform grid over [-pi, pi). Pushing it
through the chart centred at some point gives a :class:`LineMeasure` on
[-pi, pi) whose CDF, partial moments and Fréchet functional are all available
in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .geometry import PI, TWO_PI, PointLike, as_angle, wrap, wrap_array

DEFAULT_GRID = 4096
ATOM_MERGE_TOL = 1e-12


def _merge_atoms(positions: np.ndarray, weights: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Sort atoms and merge those closer than ATOM_MERGE_TOL (cyclically)."""
    if positions.size == 0:
        return positions, weights
    order = np.argsort(positions, kind="stable")
    pos, w = positions[order], weights[order]
    groups = np.concatenate([[True], np.diff(pos) > ATOM_MERGE_TOL])
    ids = np.cumsum(groups) - 1
    merged_pos = pos[groups]
    merged_w = np.bincount(ids, weights=w)
    if merged_pos.size > 1 and merged_pos[0] + TWO_PI - merged_pos[-1] <= ATOM_MERGE_TOL:
        merged_w[0] += merged_w[-1]
        merged_pos, merged_w = merged_pos[:-1], merged_w[:-1]
    return merged_pos, merged_w


@dataclass(frozen=True, eq=False)
class CircularMeasure:
    """Mixture ``atom_weight * atoms + (1 - atom_weight) * density``.

    Atom positions are absolute angles (chart at (1, 0)) and ``atom_weights``
    sums to one over the atomic part. ``density`` holds cell values of a
    probability density on ``len(density)`` equal cells covering [-pi, pi).
    """

    atom_positions: np.ndarray
    atom_weights: np.ndarray
    density: Optional[np.ndarray] = None
    atom_weight: float = 1.0
    _charts: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        pos = wrap_array(np.atleast_1d(np.asarray(self.atom_positions, dtype=float)))
        w = np.atleast_1d(np.asarray(self.atom_weights, dtype=float))
        if pos.shape != w.shape:
            raise ValueError("atom positions and weights differ in length")
        a = float(self.atom_weight)
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"atom_weight must lie in [0, 1], got {a}")
        if pos.size:
            if np.any(w <= 0):
                raise ValueError("atom weights must be strictly positive")
            if abs(w.sum() - 1.0) > 1e-12:
                raise ValueError(f"atom weights sum to {w.sum()!r}, expected 1")
            pos, w = _merge_atoms(pos, w)
        elif a > 0:
            raise ValueError("atom_weight > 0 but no atoms given")
        if a == 0.0:
            pos, w = np.empty(0), np.empty(0)
        dens = self.density
        if dens is not None:
            dens = np.asarray(dens, dtype=float).copy()
            if dens.ndim != 1 or dens.size < 1:
                raise ValueError("density must be a non-empty 1-d array")
            if np.any(dens < 0) or not np.all(np.isfinite(dens)):
                raise ValueError("density values must be finite and nonnegative")
            mass = dens.sum() * (TWO_PI / dens.size)
            if abs(mass - 1.0) > 1e-10:
                raise ValueError(f"density integrates to {mass!r}, expected 1")
            dens.setflags(write=False)
        if a < 1.0 and dens is None:
            raise ValueError("atom_weight < 1 requires a density part")
        if a == 1.0:
            dens = None
        pos.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "atom_positions", pos)
        object.__setattr__(self, "atom_weights", w)
        object.__setattr__(self, "density", dens)
        object.__setattr__(self, "atom_weight", a)

    # -- constructors -----------------------------------------------------

    @classmethod
    def atomic(cls, positions: Iterable[float], weights: Optional[Iterable[float]] = None) -> "CircularMeasure":
        pos = np.asarray(list(positions) if not isinstance(positions, np.ndarray) else positions, dtype=float)
        if pos.size == 0:
            raise ValueError("an atomic measure needs at least one atom")
        if weights is None:
            w = np.full(pos.size, 1.0 / pos.size)
        else:
            w = np.asarray(list(weights) if not isinstance(weights, np.ndarray) else weights, dtype=float)
            if np.any(w <= 0):
                raise ValueError("atom weights must be strictly positive")
            w = w / w.sum()
        return cls(pos, w)

    @classmethod
    def from_density(cls, values, normalize: bool = True) -> "CircularMeasure":
        v = np.asarray(values, dtype=float)
        if normalize:
            total = v.sum() * (TWO_PI / v.size)
            if not total > 0:
                raise ValueError("density has no mass")
            v = v / total
        return cls(np.empty(0), np.empty(0), v, 0.0)

    @classmethod
    def uniform(cls, grid: int = DEFAULT_GRID) -> "CircularMeasure":
        return cls.from_density(np.full(grid, 1.0 / TWO_PI), normalize=False)

    @classmethod
    def from_pdf(cls, pdf, grid: int = DEFAULT_GRID, subdivisions: int = 16) -> "CircularMeasure":
        """Discretise a (possibly unnormalised) periodic pdf by cell averages."""
        h = TWO_PI / grid
        offsets = (np.arange(subdivisions) + 0.5) / subdivisions * h
        starts = -PI + h * np.arange(grid)
        pts = starts[:, None] + offsets[None, :]
        return cls.from_density(np.asarray(pdf(pts), dtype=float).mean(axis=1))

    @classmethod
    def vonmises(cls, kappa: float, mu: float = 0.0, grid: int = DEFAULT_GRID) -> "CircularMeasure":
        if kappa < 0:
            raise ValueError("kappa must be nonnegative")
        return cls.from_pdf(lambda t: np.exp(kappa * (np.cos(t - mu) - 1.0)), grid)

    @classmethod
    def box(cls, mu: float, width: float, grid: int = DEFAULT_GRID) -> "CircularMeasure":
        """Uniform density on the arc of total length ``width`` centred at ``mu``."""
        if not 0 < width <= TWO_PI:
            raise ValueError("box width must lie in (0, 2*pi]")
        return cls.from_pdf(lambda t: (np.abs(wrap_array(t - mu)) <= width / 2).astype(float), grid)

    @classmethod
    def mixture(cls, components: Sequence[Tuple["CircularMeasure", float]]) -> "CircularMeasure":
        """Convex combination of measures; density parts must share a grid."""
        if not components:
            raise ValueError("empty mixture")
        ws = np.array([w for _, w in components], dtype=float)
        if np.any(ws < 0) or ws.sum() <= 0:
            raise ValueError("mixture weights must be nonnegative with positive sum")
        ws = ws / ws.sum()
        pos, aw, dens, dmass = [], [], None, 0.0
        for (m, _), w in zip(components, ws):
            if w == 0:
                continue
            if m.atom_weight > 0:
                pos.append(m.atom_positions)
                aw.append(m.atom_weights * m.atom_weight * w)
            if m.density is not None:
                part = m.density * (1.0 - m.atom_weight) * w
                if dens is None:
                    dens = part.copy()
                elif dens.size != part.size:
                    raise ValueError("mixture components use different density grids")
                else:
                    dens = dens + part
                dmass += (1.0 - m.atom_weight) * w
        a = 1.0 - dmass
        if a <= 1e-15:
            return cls(np.empty(0), np.empty(0), dens / dmass, 0.0)
        apos = np.concatenate(pos)
        aweights = np.concatenate(aw)
        aweights = aweights / aweights.sum()
        return cls(apos, aweights, None if dens is None else dens / dmass, a)

    # -- queries ----------------------------------------------------------

    @property
    def is_atomic(self) -> bool:
        return self.density is None

    @property
    def has_atoms(self) -> bool:
        return self.atom_positions.size > 0

    @property
    def grid(self) -> int:
        return 0 if self.density is None else self.density.size

    def chart(self, base: PointLike = 0.0) -> "LineMeasure":
        """Pushforward through the chart centred at ``base`` (cached)."""
        theta0 = as_angle(base)
        nu = self._charts.get(theta0)
        if nu is None:
            if len(self._charts) > 64:
                self._charts.clear()
            nu = _pushforward(self, theta0)
            self._charts[theta0] = nu
        return nu


class LineMeasure:
    """Image of a circular measure in the chart centred at ``base``.

    Atoms are stored with absolute masses; ``dens`` is the density (mass per
    unit length) on the pieces ``[edges[k], edges[k+1])`` covering [-pi, pi).
    """

    def __init__(self, base: float, atom_pos, atom_mass, edges, dens):
        self.base = float(base)
        self.atom_pos = np.asarray(atom_pos, dtype=float)
        self.atom_mass = np.asarray(atom_mass, dtype=float)
        self.edges = np.asarray(edges, dtype=float)
        self.dens = np.asarray(dens, dtype=float)
        a, b, v = self.edges[:-1], self.edges[1:], self.dens
        self._p0 = np.concatenate([[0.0], np.cumsum(v * (b - a))])
        self._p1 = np.concatenate([[0.0], np.cumsum(v * (b * b - a * a) / 2.0)])
        self._p2 = np.concatenate([[0.0], np.cumsum(v * (b ** 3 - a ** 3) / 3.0)])
        m = self.atom_mass
        t = self.atom_pos
        self._q0 = np.concatenate([[0.0], np.cumsum(m)])
        self._q1 = np.concatenate([[0.0], np.cumsum(m * t)])
        self._q2 = np.concatenate([[0.0], np.cumsum(m * t * t)])
        self.total_mass = float(self._p0[-1] + self._q0[-1])
        self._mean = float(self._p1[-1] + self._q1[-1])
        self._m2 = float(self._p2[-1] + self._q2[-1])

    @property
    def has_density(self) -> bool:
        return bool(np.any(self.dens > 0))

    def partial_moments(self, x):
        """Return (mass, first, second) moments of the restriction to [-pi, x)."""
        x = np.asarray(x, dtype=float)
        k = np.clip(np.searchsorted(self.edges, x, side="right") - 1, 0, self.dens.size - 1)
        a = self.edges[k]
        v = self.dens[k]
        d0 = self._p0[k] + v * (x - a)
        d1 = self._p1[k] + v * (x * x - a * a) / 2.0
        d2 = self._p2[k] + v * (x ** 3 - a ** 3) / 3.0
        j = np.searchsorted(self.atom_pos, x, side="left")
        return d0 + self._q0[j], d1 + self._q1[j], d2 + self._q2[j]

    def cdf(self, t):
        """nu([-pi, t)); an atom sitting exactly at ``t`` is excluded."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < -PI) or np.any(t_arr > PI):
            raise ValueError("cdf argument must lie in [-pi, pi]")
        k = np.clip(np.searchsorted(self.edges, t_arr, side="right") - 1, 0, self.dens.size - 1)
        out = self._p0[k] + self.dens[k] * (t_arr - self.edges[k])
        out = out + self._q0[np.searchsorted(self.atom_pos, t_arr, side="left")]
        return float(out) if np.ndim(t) == 0 else out

    def mass_below(self, x, inclusive: bool = False, tol: float = 0.0):
        """nu([-pi, x)) or nu([-pi, x]); atoms within ``tol`` of x count as at x."""
        x = np.asarray(x, dtype=float)
        k = np.clip(np.searchsorted(self.edges, x, side="right") - 1, 0, self.dens.size - 1)
        d0 = self._p0[k] + self.dens[k] * (x - self.edges[k])
        if inclusive:
            j = np.searchsorted(self.atom_pos, x + tol, side="right")
        else:
            j = np.searchsorted(self.atom_pos, x - tol, side="left")
        return d0 + self._q0[j]

    def mean(self) -> float:
        return self._mean

    def second_moment(self) -> float:
        return self._m2


def _pushforward(mu: CircularMeasure, theta0: float) -> LineMeasure:
    if mu.has_atoms:
        t = mu.atom_positions - theta0
        t = np.where(t >= PI, t - TWO_PI, np.where(t < -PI, t + TWO_PI, t))
        t = np.where(t >= PI - ATOM_MERGE_TOL, -PI, t)
        order = np.argsort(t, kind="stable")
        pos = t[order]
        mass = (mu.atom_weights * mu.atom_weight)[order]
    else:
        pos, mass = np.empty(0), np.empty(0)
    if mu.density is None:
        return LineMeasure(theta0, pos, mass, np.array([-PI, PI]), np.zeros(1))
    M = mu.density.size
    h = TWO_PI / M
    starts = -PI + h * np.arange(M) - theta0
    starts = np.where(starts >= PI, starts - TWO_PI, np.where(starts < -PI, starts + TWO_PI, starts))
    edges = np.unique(np.concatenate([starts, [-PI, PI]]))
    edges = edges[(edges >= -PI) & (edges <= PI)]
    mids = 0.5 * (edges[:-1] + edges[1:]) + theta0
    mids = np.where(mids >= PI, mids - TWO_PI, np.where(mids < -PI, mids + TWO_PI, mids))
    cells = np.clip(np.floor((mids + PI) / h).astype(int), 0, M - 1)
    dens = mu.density[cells] * (1.0 - mu.atom_weight)
    return LineMeasure(theta0, pos, mass, edges, dens)


def pushforward(mu: CircularMeasure, p0: PointLike) -> LineMeasure:
    """Image of ``mu`` through the inverse chart centred at ``p0``."""
    return mu.chart(p0)


def cdf(nu: LineMeasure, t):
    return nu.cdf(t)


def mean(nu: LineMeasure) -> float:
    return nu.mean()


def second_moment(nu: LineMeasure) -> float:
    return nu.second_moment()


def sample(mu: CircularMeasure, n: int, seed) -> np.ndarray:
    """Draw ``n`` i.i.d. angles (absolute, in [-pi, pi)) from ``mu``.

    ``seed`` is anything accepted by :func:`numpy.random.default_rng`; every
    call owns its own generator so results depend on the seed only.
    """
    if n < 1:
        raise ValueError("sample size must be at least 1")
    rng = np.random.default_rng(seed)
    out = np.empty(n)
    from_atoms = rng.random(n) < mu.atom_weight
    na = int(from_atoms.sum())
    if na:
        idx = rng.choice(mu.atom_positions.size, size=na, p=mu.atom_weights)
        out[from_atoms] = mu.atom_positions[idx]
    nd = n - na
    if nd:
        h = TWO_PI / mu.density.size
        cum = np.cumsum(mu.density * h)
        u = rng.random(nd) * cum[-1]
        k = np.minimum(np.searchsorted(cum, u, side="right"), cum.size - 1)
        below = np.where(k > 0, cum[k - 1], 0.0)
        frac = np.clip((u - below) / (mu.density[k] * h), 0.0, 1.0)
        out[~from_atoms] = wrap_array(-PI + h * (k + frac))
    return out


def _support_arcs(mu: CircularMeasure) -> Tuple[np.ndarray, np.ndarray]:
    """Support as closed arcs (start, length); atoms are zero-length arcs."""
    starts, lengths = [], []
    if mu.has_atoms:
        starts.append(mu.atom_positions)
        lengths.append(np.zeros(mu.atom_positions.size))
    if mu.density is not None and mu.atom_weight < 1.0:
        M = mu.density.size
        h = TWO_PI / M
        on = mu.density > 0
        if on.all():
            starts.append(np.array([-PI]))
            lengths.append(np.array([TWO_PI]))
        elif on.any():
            # runs of positive cells, joined across the -pi/pi seam
            shift = int(np.argmin(on))
            rolled = np.roll(on, -shift)
            padded = np.concatenate([[False], rolled, [False]])
            d = np.diff(padded.astype(int))
            run_s = np.nonzero(d == 1)[0]
            run_e = np.nonzero(d == -1)[0]
            starts.append(wrap_array(-PI + h * ((run_s + shift) % M)))
            lengths.append(h * (run_e - run_s))
    return np.concatenate(starts), np.concatenate(lengths)


def support_diameter(mu: CircularMeasure) -> float:
    """Arclength diameter of supp(mu), at most pi."""
    s, l = _support_arcs(mu)
    if s.size == 0:
        raise ValueError("measure has empty support")
    if np.any(l >= PI):
        return PI
    # diameter = pi - dist(supp, antipodal copy of supp)
    a1, l1 = s[:, None], l[:, None]
    a2, l2 = wrap_array(s + PI)[None, :], l[None, :]
    fwd = np.mod(a2 - a1, TWO_PI)  # from start of arc 1 to start of arc 2
    overlap = (fwd <= l1) | (np.mod(a1 - a2, TWO_PI) <= l2)
    gap = np.minimum(np.mod(a2 - (a1 + l1), TWO_PI), np.mod(a1 - (a2 + l2), TWO_PI))
    gap = np.where(overlap, 0.0, gap)
    return float(min(PI, max(0.0, PI - gap.min())))
