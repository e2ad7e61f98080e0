"""Write F and its one-sided derivatives for a few reference measures as CSV.

    python3 scripts/scan_profiles.py --out results/profiles

One file per measure, columns theta, F, F_left_derivative, F_right_derivative,
in the chart centred at the Fréchet mean (or the first argmin).
"""

from __future__ import annotations

import argparse
import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from circfrechet import CircularMeasure, boundary_hemisphere_measure, find_mean_and_certify, frechet_mean
from circfrechet.frechet import derivative_values, functional_values
from circfrechet.geometry import PI, TWO_PI, wrap_array


@dataclass
class ScanConfig:
    out: Path
    points: int = 4096


def measures():
    yield "three_atoms", CircularMeasure.atomic([2 * PI / 3, 0.0, -2 * PI / 3], [1 / 6, 2 / 3, 1 / 6])
    yield "hemisphere_pair", boundary_hemisphere_measure(0.0)
    yield "hemisphere_tilted", boundary_hemisphere_measure(3 * PI / 10)
    yield "vonmises_mixture", CircularMeasure.mixture(
        [(CircularMeasure.vonmises(6.0, -2.0), 0.45), (CircularMeasure.vonmises(6.0, 1.5), 0.55)])


def scan(mu: CircularMeasure, centre: float, points: int):
    nu = mu.chart(centre)
    theta = -PI + TWO_PI * np.arange(points) / points
    if nu.atom_pos.size:
        theta = np.concatenate([theta, wrap_array(nu.atom_pos + PI)])
    theta = np.unique(theta)
    left, right = derivative_values(nu, theta)
    return theta, functional_values(nu, theta), left, right


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results/profiles"))
    ap.add_argument("--points", type=int, default=4096)
    ns = ap.parse_args(argv)
    cfg = ScanConfig(ns.out, ns.points)
    cfg.out.mkdir(parents=True, exist_ok=True)
    for name, mu in measures():
        res = frechet_mean(mu) if mu.is_atomic else find_mean_and_certify(mu)[0]
        centre = res.best.angle
        cols = scan(mu, centre, cfg.points)
        path = cfg.out / f"{name}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["theta", "F", "F_left_derivative", "F_right_derivative"])
            w.writerows(zip(*(c.tolist() for c in cols)))
        jumps = cols[3] - cols[2]
        cusps = int(np.sum(np.abs(jumps) > 1e-12))
        print(f"{name:18s} mean {centre:+.6f}  argmins {len(res.argmins)}  "
              f"min F {res.min_value:.6f}  cusps {cusps}  -> {path}")


if __name__ == "__main__":
    main()
