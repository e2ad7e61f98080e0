import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from circfrechet.geometry import (PI, CirclePoint, arclength_distance, as_angle, coord_distance,
                                  cut_locus_coord, exp_map, log_map, wrap, wrap_array)

reals = st.floats(-1e3, 1e3, allow_nan=False)


@given(reals)
def test_wrap_lands_in_half_open_chart(t):
    r = wrap(t)
    assert -PI <= r < PI
    assert wrap(r) == r
    assert math.isclose(math.cos(r), math.cos(t), abs_tol=1e-9)
    assert math.isclose(math.sin(r), math.sin(t), abs_tol=1e-9)


def test_pi_folds_onto_minus_pi():
    assert wrap(PI) == -PI
    assert wrap(-PI) == -PI
    assert wrap(3 * PI) == -PI
    assert wrap_array(np.array([PI]))[0] == -PI


def test_wrap_rejects_nan():
    with pytest.raises(ValueError):
        wrap(float("nan"))


@given(st.lists(st.floats(-50, 50), min_size=1, max_size=20))
def test_wrap_array_agrees_with_scalar(ts):
    got = wrap_array(np.array(ts))
    want = np.array([wrap(t) for t in ts])
    d = np.abs(got - want)
    # the two may sit on either side of the seam only up to rounding
    assert np.all((d < 1e-12) | (np.abs(d - 2 * PI) < 1e-12))


@given(reals, reals)
def test_arclength_matches_coordinate_distance(a, b):
    d1 = arclength_distance(CirclePoint.from_angle(a), CirclePoint.from_angle(b))
    d2 = coord_distance(a, b)
    assert 0 <= d2 <= PI
    assert d1 == pytest.approx(d2, abs=1e-7)


@given(st.floats(-PI, PI), st.floats(-PI + 1e-6, PI - 1e-6))
def test_log_inverts_exp(base, t):
    p0 = CirclePoint.from_angle(base)
    assert log_map(p0, exp_map(p0, t)) == pytest.approx(t, abs=1e-12)


def test_point_validation_and_antipode():
    with pytest.raises(ValueError):
        CirclePoint(1.0, 0.1)
    p = CirclePoint.from_angle(0.3)
    assert as_angle(-p) == pytest.approx(0.3 - PI)
    assert as_angle(p) == pytest.approx(0.3)


def test_cut_locus_coordinate():
    assert cut_locus_coord(0.0) == -PI
    assert cut_locus_coord(1.0) == pytest.approx(1.0 - PI)
    assert cut_locus_coord(-1.0) == pytest.approx(PI - 1.0)
