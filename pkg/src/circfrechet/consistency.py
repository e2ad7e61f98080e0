"""Monte-Carlo checks of the consistency and concentration of empirical means.

The empirical Fréchet mean p*_n of n i.i.d. draws from an atomless measure
with unique mean p* satisfies

    F(p*_n) - F(p*) >= rho(d(p*_n, p*))                 (every sample)
    P[rho(d(p*_n, p*)) > C(s) sqrt(x / n)] <= 2 e^{-x}   (concentration)

with rho built from the gap function of F and s the support diameter.
:func:`simulate` measures both, together with the M-estimation sandwich that
links them.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .criterion import CriterionParams, gamma
from .frechet import functional_values
from .geometry import PI, TWO_PI, coord_distance_array, wrap_array
from .measures import CircularMeasure, sample, support_diameter
from .solver import DEFAULT_TIE_TOL, frechet_mean
from .uniqueness import find_mean_and_certify

ENVELOPE_CAP_C = 4 * PI * (2 * PI * PI + PI + 1)
ZERO_TOL = 1e-13
DEFAULT_X = (1.0, 2.0, 4.0)
QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)


def _rho_grid(n_uniform: int = 8192) -> np.ndarray:
    # geometric near 0 so the chord interpolation of g stays tight where f ~ t^2
    fine = PI * np.geomspace(1e-12, 0.02, 1400)
    coarse = np.linspace(0.0, PI, n_uniform + 1)
    return np.unique(np.concatenate([coarse, fine]))


@dataclass(frozen=True)
class Rho:
    """Increasing lower bound rho sampled on ``t``; linear in between."""

    t: np.ndarray
    values: np.ndarray
    g: np.ndarray

    def __call__(self, d):
        d = np.asarray(d, dtype=float)
        if np.any(d < 0) or np.any(d > PI + 1e-12):
            raise ValueError("rho is defined on [0, pi]")
        out = np.interp(d, self.t, self.values)
        return float(out) if out.ndim == 0 else out


def rho_from_gap(f: Callable[[np.ndarray], np.ndarray], theta0: float = 0.0,
                 grid: Optional[np.ndarray] = None) -> Rho:
    """Build rho(t) = (1/t) int_0^t g with g(t) = min over |tau| >= t of f(theta0 + tau).

    ``f`` takes an array of chart coordinates. The inner minimum runs over the
    evaluation grid; at t = pi the set |tau| > t is empty and g falls back to
    min(f(-t), f(t)).
    """
    t = _rho_grid() if grid is None else np.asarray(grid, dtype=float)
    if t[0] != 0.0 or t[-1] != PI or np.any(np.diff(t) <= 0):
        raise ValueError("grid must increase from 0 to pi")
    up = np.asarray(f(wrap_array(theta0 + t)), dtype=float)
    down = np.asarray(f(wrap_array(theta0 - t)), dtype=float)
    both = np.minimum(up, down)
    if np.any(both < -1e-12):
        raise ValueError("gap function takes negative values")
    uniform_part = t >= PI / 8192 - 1e-15
    if np.any(both[uniform_part & (t > 0)] <= ZERO_TOL):
        raise ValueError("gap function vanishes away from theta0; zero is not unique")
    both = np.maximum(both, 0.0)
    g = np.minimum.accumulate(both[::-1])[::-1]
    integral = np.concatenate([[0.0], np.cumsum(0.5 * (g[1:] + g[:-1]) * np.diff(t))])
    rho = np.zeros_like(t)
    rho[1:] = integral[1:] / t[1:]
    rho = np.maximum.accumulate(rho)
    return Rho(t, rho, g)


def concentration_constant(s: float) -> float:
    if not 0.0 <= s <= PI + 1e-12:
        raise ValueError(f"support diameter must lie in [0, pi], got {s}")
    return 4 * PI * PI + 4 * PI * PI * s + 2 * s


def concentration_envelope(s: float, x: float, n: int) -> float:
    """C(s) sqrt(x / n)."""
    if x <= 0 or n < 1:
        raise ValueError("need x > 0 and n >= 1")
    return concentration_constant(s) * math.sqrt(x / n)


def rate_envelope(alpha: float, phi: float, x: float, n: int) -> float:
    """Distance bound sqrt(B) (x / n)^(1/4) under P(alpha, phi)."""
    g = gamma(alpha, phi)
    if g <= 0:
        raise ValueError(f"gamma(alpha, phi) = {g:.3g} <= 0: phi is not below phi_alpha")
    if x <= 0 or n < 1:
        raise ValueError("need x > 0 and n >= 1")
    B = ENVELOPE_CAP_C * max(PI * PI / g, 2.0 / alpha)
    return math.sqrt(B) * (x / n) ** 0.25


@dataclass
class SimulationConfig:
    n_values: Sequence[int] = (50, 200, 800)
    trials: int = 400
    seed: int = 0
    x_values: Sequence[float] = DEFAULT_X
    tie_tol: float = DEFAULT_TIE_TOL
    sandwich_grid: int = 4096

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.n_values or min(self.n_values) < 1:
            raise ValueError("n_values must be positive counts")
        if not self.x_values or min(self.x_values) <= 0:
            raise ValueError("x values must be positive")


@dataclass
class NStats:
    n: int
    quantiles: Dict[float, float]
    mean: float
    violation_rate: Dict[float, float]
    violation_rate_ambient: Dict[float, float]
    rate_violation: Dict[float, float]
    non_unique: int
    rho_failures: int
    sandwich_failures: int
    min_rho_slack: float


@dataclass
class ConcentrationReport:
    n_values: List[int]
    trials: int
    seed: int
    x_values: List[float]
    p_star: float
    support_diameter: float
    ambient_diameter: float
    stats: List[NStats]
    distances: Dict[int, np.ndarray] = field(repr=False, default_factory=dict)

    def bound_violation_rate(self, x: float) -> Dict[int, float]:
        return {st.n: st.violation_rate[x] for st in self.stats}

    def to_dict(self) -> dict:
        return {
            "n_values": self.n_values,
            "trials": self.trials,
            "seed": self.seed,
            "x_values": self.x_values,
            "p_star": self.p_star,
            "support_diameter_arclength": self.support_diameter,
            "support_diameter_ambient": self.ambient_diameter,
            "per_n": [
                {
                    "n": st.n,
                    "quantiles": {str(q): v for q, v in st.quantiles.items()},
                    "mean": st.mean,
                    "violation_rate": {str(x): v for x, v in st.violation_rate.items()},
                    "violation_rate_ambient": {str(x): v for x, v in st.violation_rate_ambient.items()},
                    "rate_violation": {str(x): v for x, v in st.rate_violation.items()},
                    "non_unique": st.non_unique,
                    "rho_failures": st.rho_failures,
                    "sandwich_failures": st.sandwich_failures,
                    "min_rho_slack": st.min_rho_slack,
                }
                for st in self.stats
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        qs = list(self.stats[0].quantiles) if self.stats else []
        header = ["n"] + [f"q{q:g}" for q in qs] + ["mean"]
        header += [f"viol_x{x:g}" for x in self.x_values]
        header += [f"viol_ambient_x{x:g}" for x in self.x_values]
        header += ["non_unique", "rho_failures", "sandwich_failures"]
        w.writerow(header)
        for st in self.stats:
            row = [st.n] + [repr(st.quantiles[q]) for q in qs] + [repr(st.mean)]
            row += [repr(st.violation_rate[x]) for x in self.x_values]
            row += [repr(st.violation_rate_ambient[x]) for x in self.x_values]
            row += [st.non_unique, st.rho_failures, st.sandwich_failures]
            w.writerow(row)
        return buf.getvalue()


def simulate(mu: CircularMeasure, n_values: Sequence[int] = (50, 200, 800), trials: int = 400,
             seed: int = 0, x_values: Sequence[float] = DEFAULT_X,
             params: Optional[CriterionParams] = None,
             config: Optional[SimulationConfig] = None) -> ConcentrationReport:
    """Sample empirical means and compare them with the concentration bounds.

    Trial ``k`` at sample size ``n`` draws from ``default_rng([seed, n, k])``,
    so the report does not depend on execution order. ``params``, if given,
    adds the distance-rate envelope to the report.
    """
    cfg = config or SimulationConfig(tuple(n_values), trials, seed, tuple(x_values))
    res, cert = find_mean_and_certify(mu)
    if not res.unique:
        raise ValueError("measure has no unique Fréchet mean")
    p_star = res.best.angle
    nu0 = mu.chart(0.0)
    f_star = float(functional_values(nu0, p_star))

    def gap(theta):
        return functional_values(nu0, wrap_array(p_star + theta)) - f_star

    rho = rho_from_gap(gap, 0.0)
    s = support_diameter(mu)
    s_amb = 2.0 * math.sin(s / 2.0)
    grid = -PI + TWO_PI * np.arange(cfg.sandwich_grid) / cfg.sandwich_grid
    F_grid = functional_values(nu0, grid)

    stats, dists = [], {}
    for n in cfg.n_values:
        d = np.empty(cfg.trials)
        excess = np.empty(cfg.trials)
        non_unique = rho_fail = sand_fail = 0
        for k in range(cfg.trials):
            pts = sample(mu, n, [cfg.seed, n, k])
            emp = CircularMeasure.atomic(pts)
            r = frechet_mean(emp, cfg.tie_tol)
            if not r.unique:
                non_unique += 1
            pn = r.best.angle
            d[k] = float(coord_distance_array(pn, p_star))
            excess[k] = float(functional_values(nu0, pn)) - f_star
            if excess[k] < rho(d[k]) - 1e-12:
                rho_fail += 1
            # sup |F_n - F| over the grid, the atoms and their cut loci, and both means
            nun = emp.chart(0.0)
            extra = np.concatenate([emp.atom_positions, wrap_array(emp.atom_positions + PI), [pn, p_star]])
            diff_grid = np.max(np.abs(functional_values(nun, grid) - F_grid))
            diff_extra = np.max(np.abs(functional_values(nun, extra) - functional_values(nu0, extra)))
            if abs(excess[k]) > 2.0 * max(diff_grid, diff_extra) + 1e-12:
                sand_fail += 1
        rd = rho(d)
        viol = {x: float(np.mean(rd > concentration_envelope(s, x, n))) for x in cfg.x_values}
        viol_amb = {x: float(np.mean(rd > concentration_envelope(s_amb, x, n))) for x in cfg.x_values}
        rate = {}
        if params is not None:
            rate = {x: float(np.mean(d > rate_envelope(params.alpha, params.phi, x, n))) for x in cfg.x_values}
        stats.append(NStats(
            n=n,
            quantiles={q: float(np.quantile(d, q)) for q in QUANTILES},
            mean=float(d.mean()),
            violation_rate=viol,
            violation_rate_ambient=viol_amb,
            rate_violation=rate,
            non_unique=non_unique,
            rho_failures=rho_fail,
            sandwich_failures=sand_fail,
            min_rho_slack=float(np.min(excess - rd)),
        ))
        dists[n] = d
    return ConcentrationReport(
        n_values=list(cfg.n_values),
        trials=cfg.trials,
        seed=cfg.seed,
        x_values=list(cfg.x_values),
        p_star=p_star,
        support_diameter=s,
        ambient_diameter=s_amb,
        stats=stats,
        distances=dists,
    )
