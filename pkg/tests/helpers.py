"""Measure builders and hypothesis strategies shared by the tests."""

from __future__ import annotations

import math

import numpy as np
from hypothesis import strategies as st

from circfrechet.measures import CircularMeasure

PI = math.pi
TWO_PI = 2 * math.pi


def three_atom_measure() -> CircularMeasure:
    return CircularMeasure.atomic([2 * PI / 3, 0.0, -2 * PI / 3], [1 / 6, 2 / 3, 1 / 6])


def random_atomic(rng: np.random.Generator, n: int, equal: bool) -> CircularMeasure:
    pos = rng.uniform(-PI, PI, n)
    w = None if equal else rng.uniform(0.05, 1.0, n)
    return CircularMeasure.atomic(pos, w)


def symmetric_atomic(rng: np.random.Generator, n: int, k: int) -> CircularMeasure:
    """Invariant under rotation by 2 pi / k, so it has k global argmins."""
    base = rng.uniform(-PI, PI, n)
    w = rng.uniform(0.05, 1.0, n)
    pos = np.concatenate([base + TWO_PI * j / k for j in range(k)])
    return CircularMeasure.atomic(pos, np.tile(w, k))


def random_density(rng: np.random.Generator, cells: int = 64, sparse: bool = False) -> CircularMeasure:
    v = rng.gamma(0.7, 1.0, cells)
    if sparse:
        v[rng.random(cells) < 0.4] = 0.0
        if not v.any():
            v[0] = 1.0
    return CircularMeasure.from_density(v)


def brute_functional(positions, weights, theta) -> float:
    """Half the weighted sum of squared arclength distances, done directly."""
    d = np.abs(np.mod(np.asarray(positions) - theta + PI, TWO_PI) - PI)
    return 0.5 * float(np.sum(np.asarray(weights) * d * d))


def criterion_density(rng: np.random.Generator, alpha: float, phi: float, cells: int = 512,
                      shift: int = 0) -> CircularMeasure:
    """Symmetric density obeying the (alpha, phi) bound around cell offset ``shift``.

    Cells lying entirely inside (-phi, phi) carry the bulk of the mass; all
    other cells stay below (1 - alpha) / (2 pi). Symmetry makes the centre a
    critical point.
    """
    h = TWO_PI / cells
    half = cells // 2
    starts = -PI + h * np.arange(half, cells)  # right half: [0, pi)
    inner = starts + h <= phi
    out_vals = rng.uniform(0.0, 1.0, half) * (1.0 - alpha) / TWO_PI
    out_vals[inner] = 0.0
    out_mass = 2 * h * out_vals.sum()
    in_w = rng.uniform(0.1, 1.0, half) * inner
    in_vals = in_w / (2 * h * in_w.sum()) * (1.0 - out_mass)
    right = out_vals + in_vals
    dens = np.concatenate([right[::-1], right])
    return CircularMeasure(np.empty(0), np.empty(0), np.roll(dens, shift), 0.0)


angles = st.floats(min_value=-PI, max_value=PI, exclude_max=True, allow_nan=False)


@st.composite
def atomic_measures(draw, max_atoms: int = 12):
    n = draw(st.integers(1, max_atoms))
    pos = draw(st.lists(angles, min_size=n, max_size=n))
    w = draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n))
    return CircularMeasure.atomic(pos, w)


@st.composite
def density_measures(draw, cells: int = 32):
    v = draw(st.lists(st.floats(0.0, 5.0), min_size=cells, max_size=cells))
    if sum(v) <= 1e-3:
        v[0] = 1.0
    return CircularMeasure.from_density(v)
