import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cs2dspec import FrequencyGrid, SignalGrid2D, Spectrum2D, TimeGrid, make_frequency_grid
from cs2dspec.errors import InvalidArgumentError

# pi / 26.687, frozen from the grid definition
HALF_BAND_PAPER = 0.11771996303780091


def test_paper_grid_range():
    grid = make_frequency_grid(TimeGrid(26.687, 50), 1000)
    assert grid.count == 1000
    assert grid.minimum == pytest.approx(-HALF_BAND_PAPER, rel=1e-15)
    # exclusive on the positive side: max = pi/delta * (1 - 2/N)
    assert grid.maximum == pytest.approx(HALF_BAND_PAPER * (1 - 2 / 1000), rel=1e-13)
    assert round(HALF_BAND_PAPER, 6) == 0.117720


def test_two_point_inclusive_grid():
    grid = make_frequency_grid(TimeGrid(1.0, 4), 2, inclusive=True)
    np.testing.assert_allclose(grid.frequencies, [-math.pi, math.pi], rtol=1e-15)


def test_inclusive_spacing_by_hand():
    grid = make_frequency_grid(TimeGrid(2.0, 4), 5, inclusive=True)
    assert grid.spacing == pytest.approx(math.pi / 4, rel=1e-15)
    assert grid.maximum == pytest.approx(math.pi / 2, rel=1e-15)


def test_single_point_axis_rejected():
    with pytest.raises(InvalidArgumentError):
        make_frequency_grid(TimeGrid(1.0, 4), 1)


def test_time_grid_origin():
    grid = TimeGrid(26.687, 3, origin_index=1)
    np.testing.assert_allclose(grid.times, [26.687, 53.374, 80.061])


@pytest.mark.parametrize("delta,count", [(0.0, 3), (-1.0, 3), (1.0, 0), (float("nan"), 2)])
def test_time_grid_validation(delta, count):
    with pytest.raises(InvalidArgumentError):
        TimeGrid(delta, count)


def test_signal_shape_and_finiteness():
    tg = TimeGrid(1.0, 3)
    with pytest.raises(InvalidArgumentError):
        SignalGrid2D(tg, TimeGrid(1.0, 2), 0.0, np.zeros((3, 3)))
    bad = np.zeros((3, 3), complex)
    bad[1, 1] = np.nan
    with pytest.raises(InvalidArgumentError):
        SignalGrid2D(tg, tg, 0.0, bad)
    with pytest.raises(InvalidArgumentError):
        SignalGrid2D(tg, tg, 0.0, np.zeros((3, 3)), label="other")


def test_containers_are_read_only():
    fg = FrequencyGrid(-1.0, 0.5, 4)
    src = np.ones((4, 4))
    spec = Spectrum2D(fg, fg, 0.0, src)
    src[0, 0] = 7
    assert spec.values[0, 0] == 1
    with pytest.raises(ValueError):
        spec.values[0, 0] = 2


@given(st.floats(-10, 10), st.floats(1e-4, 10), st.integers(2, 2000))
def test_frequencies_reconstruct_bit_identically(minimum, spacing, count):
    grid = FrequencyGrid(minimum, spacing, count)
    again = FrequencyGrid(grid.minimum, grid.spacing, grid.count)
    assert np.array_equal(grid.frequencies, again.frequencies)
    assert np.all(np.diff(grid.frequencies) > 0)


@given(st.floats(0.1, 100), st.integers(1, 64))
def test_time_grid_uniform(delta, count):
    times = TimeGrid(delta, count).times
    assert times.size == count
    if count > 1:
        np.testing.assert_allclose(np.diff(times), delta, rtol=1e-12)
