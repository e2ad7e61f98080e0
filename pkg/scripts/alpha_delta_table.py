"""Tabulate the concentration threshold alpha_delta and the window delta * phi_alpha."""

from __future__ import annotations

import argparse

import numpy as np

from circfrechet.criterion import alpha_delta, phi_alpha


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--deltas", default="0.1,0.2,0.3333333333333333,0.5")
    ap.add_argument("--sweep", type=int, default=0, help="also print a sweep with this many points")
    ns = ap.parse_args(argv)
    deltas = [float(d) for d in ns.deltas.split(",")]
    print(f"{'delta':>8} {'alpha_delta':>12} {'phi_alpha':>10} {'delta*phi':>10}")
    for d in deltas:
        a = alpha_delta(d)
        print(f"{d:8.4f} {a:12.6f} {phi_alpha(a):10.6f} {d * phi_alpha(a):10.6f}")
    if ns.sweep:
        print()
        for d in np.linspace(0.5 / ns.sweep, 0.5, ns.sweep):
            a = alpha_delta(d)
            print(f"{d:8.4f} {a:12.6f} {d * phi_alpha(a):10.6f}")


if __name__ == "__main__":
    main()
