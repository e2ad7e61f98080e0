import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from circfrechet.criterion import (CriterionParams, _cubic, alpha_delta, guarantee_existence, mean_bound,
                                   phi_alpha, satisfies_P, translate, weaken)
from circfrechet.geometry import PI, TWO_PI
from circfrechet.measures import CircularMeasure
from circfrechet.solver import grid_oracle
from circfrechet.uniqueness import certify

from helpers import criterion_density


def test_phi_alpha_values():
    assert phi_alpha(1.0) == pytest.approx(PI / 2)
    assert phi_alpha(0.25) == pytest.approx(PI / 3)
    assert phi_alpha(1e-12) < 1e-5
    with pytest.raises(ValueError):
        phi_alpha(0.0)
    a = np.linspace(0.01, 1, 50)
    assert np.all(np.diff([phi_alpha(x) for x in a]) > 0)


@pytest.mark.parametrize("delta,alpha,floor", [(0.1, 0.46, 0.12), (0.2, 0.54, 0.26),
                                               (1 / 3, 0.69, 0.47), (0.5, 1.00, PI / 4 - 1e-9)])
def test_alpha_delta_reference_values(delta, alpha, floor):
    a = alpha_delta(delta)
    assert a == pytest.approx(alpha, abs=0.01)
    assert delta * phi_alpha(a) >= floor
    assert abs(_cubic(math.sqrt(a), delta)) < 1e-9


def test_alpha_delta_is_monotone_into_range():
    d = np.linspace(1e-6, 0.5, 200)
    a = np.array([alpha_delta(x) for x in d])
    assert np.all(np.diff(a) > 0)
    assert a.min() > 0.39 and a.max() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        alpha_delta(0.6)


def test_uniform_fails_every_alpha():
    mu = CircularMeasure.uniform(256)
    assert not satisfies_P(mu, CriterionParams(0.0, 0.1, 1.0))
    assert satisfies_P(mu, CriterionParams(0.0, 1e-18, 3.0))  # bound equals the density up to slack


def test_compact_support_inside_window():
    # 1024 cells of width 2 pi / 1024; the 16 around 0 sit inside (-0.1, 0.1)
    v = np.zeros(1024)
    v[504:520] = 1.0
    mu = CircularMeasure.from_density(v)
    h = TWO_PI / 1024
    assert 8 * h < 0.1
    assert satisfies_P(mu, CriterionParams(0.0, 1.0, 0.1))
    assert not satisfies_P(mu, CriterionParams(0.0, 1.0, 8 * h - 1e-9))
    assert satisfies_P(mu, CriterionParams(0.0, 1.0, 8 * h + 1e-12))


def test_two_envelopes_at_once():
    rng = np.random.default_rng(3)
    mu = criterion_density(rng, 0.5, 1.6)
    assert satisfies_P(mu, CriterionParams(0.0, 0.5, 1.6))
    assert satisfies_P(mu, CriterionParams(0.0, 0.1, 2.0))


def test_atoms_are_rejected():
    with pytest.raises(ValueError):
        satisfies_P(CircularMeasure.atomic([0.0]), CriterionParams(0.0, 0.5, 0.5))


def test_params_validation():
    with pytest.raises(ValueError):
        CriterionParams(0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        CriterionParams(0.0, 0.5, PI)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.05, 1.0), st.floats(0.05, 1.5), st.floats(-1.5, 1.5),
       st.integers(0, 511))
def test_translation_preserves_membership(seed, alpha, phi, move, shift):
    assume(abs(move) < PI - phi)
    mu = criterion_density(np.random.default_rng(seed), alpha, phi, shift=shift)
    p = TWO_PI * shift / 512
    params = CriterionParams(p, alpha, phi)
    assert satisfies_P(mu, params)
    moved = translate(params, p + move)
    assert moved.phi == pytest.approx(phi + abs(move))
    assert satisfies_P(mu, moved)
    assert satisfies_P(mu, weaken(params, alpha / 2, phi + 0.1))


def test_translation_example():
    mu = criterion_density(np.random.default_rng(0), 0.5, 0.3)
    moved = translate(CriterionParams(0.0, 0.5, 0.3), 0.2)
    assert moved.phi == pytest.approx(0.5)
    assert satisfies_P(mu, moved)
    assert translate(CriterionParams(0.0, 0.5, 0.3), 0.0).phi == 0.3
    with pytest.raises(ValueError):
        translate(CriterionParams(0.0, 0.5, 1.0), 2.5)


def test_weaken_direction():
    with pytest.raises(ValueError):
        weaken(CriterionParams(0.0, 0.5, 0.5), 0.6, 0.5)


def test_mean_bound_examples():
    assert mean_bound(CriterionParams(0.0, 1.0, 0.7)) == pytest.approx(0.7)
    assert mean_bound(0.0, 0.0) == pytest.approx(PI / 4)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.05, 1.0), st.floats(0.05, 2.5), st.floats(-1.0, 1.0))
def test_mean_bound_holds_off_centre(seed, alpha, phi, move):
    # membership around p = 0 implies membership around any p2 with the wider window
    mu = criterion_density(np.random.default_rng(seed), alpha, phi)
    assume(abs(move) + phi < PI)
    wide = CriterionParams(move, alpha, phi + abs(move))
    assert satisfies_P(mu, wide)
    assert abs(mu.chart(move).mean()) <= mean_bound(wide) + 1e-12


def test_uniform_has_no_witness():
    mu = CircularMeasure.uniform()
    for delta in (0.1, 0.2, 1 / 3, 0.49):
        assert guarantee_existence(mu, delta) is None


@pytest.mark.parametrize("delta", [0.1, 0.2, 1 / 3, 0.45])
def test_witness_localises_the_mean(delta):
    core = CircularMeasure.box(1.0, 0.1)
    mu = CircularMeasure.mixture([(core, 0.99), (CircularMeasure.uniform(), 0.01)])
    params = guarantee_existence(mu, delta)
    assert params is not None
    assert params.alpha >= alpha_delta(delta) - 1e-12
    assert params.phi <= delta * phi_alpha(params.alpha) + 1e-12
    assert satisfies_P(mu, params)
    res = grid_oracle(mu, 8192, polish=True)
    assert res.unique
    d = abs(math.remainder(res.best.angle - params.center, TWO_PI))
    assert d <= (1 - delta) * phi_alpha(params.alpha)
    assert certify(mu, res.best.angle).holds
