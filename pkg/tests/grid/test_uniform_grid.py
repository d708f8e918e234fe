import numpy as np
import pytest

from polaritonrdmft.common.errors import GridMismatch, NonCommensurate, TooSmall
from polaritonrdmft.grid import Field, UniformGrid, make_grid


def test_three_point_axis():
    grid = make_grid([{"L": 2.0, "h": 1.0}], min_points=3)
    np.testing.assert_allclose(grid.points(0), [-1.0, 0.0, 1.0])


def test_three_point_axis_rejected_by_default():
    with pytest.raises(TooSmall):
        make_grid([{"L": 2.0, "h": 1.0}])


def test_point_counts():
    assert make_grid([{"L": 20.0, "h": 0.1}]).shape == (201,)
    grid = make_grid([(16.0, 0.14)])
    assert grid.shape == (115,)
    assert grid.effective_lengths[0] == pytest.approx(15.96)


@pytest.mark.parametrize("length, spacing", [(0.0, 0.1), (10.0, -0.1), (np.inf, 0.1)])
def test_invalid_axes(length, spacing):
    with pytest.raises(NonCommensurate):
        make_grid([{"L": length, "h": spacing}])


@pytest.mark.parametrize("length, spacing", [(np.inf, 0.1), (1e308, 1e-308)])
def test_non_finite_ratio_is_not_commensurate(length, spacing):
    with pytest.raises(NonCommensurate):
        make_grid([{"L": length, "h": spacing}])


@pytest.mark.parametrize("length, spacing, n_points", [(10.0, 0.3, 34), (10.0, 0.4, 26), (2.1, 0.3, 8)])
def test_off_integer_ratio_rounds(length, spacing, n_points):
    assert make_grid([{"L": length, "h": spacing}]).shape == (n_points,)


def test_points_symmetric():
    grid = make_grid([{"L": 16.0, "h": 0.14}, {"L": 14.0, "h": 0.2}])
    for axis in range(grid.ndim):
        points = grid.points(axis)
        assert np.max(np.abs(points + points[::-1])) < 1e-14


def test_size_and_names():
    grid = make_grid([{"L": 4.0, "h": 0.5}, {"L": 3.0, "h": 0.5}])
    assert grid.size == 9 * 7
    assert grid.names == ("x", "q")
    assert grid.volume_element == pytest.approx(0.25)
    assert grid.subgrid(["q"]).shape == (7,)


def test_dict_round_trip():
    grid = make_grid([{"L": 4.0, "h": 0.5}, {"L": 3.0, "h": 0.5}])
    assert UniformGrid.from_dict(grid.to_dict()) == grid


def test_field_shape_checked():
    grid = make_grid([{"L": 4.0, "h": 0.5}])
    with pytest.raises(GridMismatch):
        Field(grid, np.zeros(4))


def test_field_read_only():
    grid = make_grid([{"L": 4.0, "h": 0.5}])
    field = Field.zeros(grid)
    with pytest.raises(ValueError):
        field.values[0] = 1.0


def test_field_arithmetic_needs_same_grid():
    a = Field.zeros(make_grid([{"L": 4.0, "h": 0.5}]))
    b = Field.zeros(make_grid([{"L": 6.0, "h": 0.5}]))
    with pytest.raises(GridMismatch):
        a + b
