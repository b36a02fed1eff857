import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as some
from hypothesis.strategies import composite

from genext.core import Grid, GridFunction
from genext.core.errors import GridMismatchError
from genext.core.grid import ensure_same_grid


@composite
def grids(draw, max_points: int = 500) -> Grid:
    a = draw(some.floats(min_value=-100, max_value=100))
    length = draw(some.floats(min_value=1e-2, max_value=100))
    n = draw(some.integers(min_value=3, max_value=max_points))
    return Grid(a=a, b=a + length, n=n)


@given(grids())
def test_grid_coordinates(grid: Grid):
    assert grid.x.size == grid.n
    assert grid.x[0] == grid.a
    assert grid.x[-1] == pytest.approx(grid.b)
    assert np.allclose(np.diff(grid.x), grid.h)


@given(grids())
def test_refined_grid_keeps_every_point(grid: Grid):
    refined = grid.refine()
    assert refined.h == pytest.approx(grid.h / 2)
    assert np.allclose(refined.x[::2], grid.x)


def test_coarsen_needs_odd_number_of_points():
    assert Grid(a=0, b=1, n=5).coarsen() == Grid(a=0, b=1, n=3)
    with pytest.raises(ValueError):
        Grid(a=0, b=1, n=4).coarsen()


def test_grid_needs_three_points():
    with pytest.raises(ValueError, match="grid.n must be ≥ 3"):
        Grid(a=0, b=1, n=2)


def test_grid_needs_ordered_endpoints():
    with pytest.raises(ValueError):
        Grid(a=1, b=1, n=10)


def test_within_flags_window():
    grid = Grid(a=0, b=10, n=11)
    assert grid.within(2.5, 5).tolist() == [False, False, False, True, True, True, False, False, False, False, False]


def test_grid_function_rejects_non_finite_values():
    grid = Grid(a=0, b=1, n=3)
    with pytest.raises(ValueError, match="finite"):
        GridFunction(grid=grid, values=np.array([0.0, np.inf, 1.0]))


def test_grid_function_checks_shapes():
    grid = Grid(a=0, b=1, n=3)
    with pytest.raises(ValueError):
        GridFunction(grid=grid, values=np.zeros(4))
    with pytest.raises(ValueError):
        GridFunction(grid=grid, values=np.zeros(3), pole_mask=np.zeros(2, dtype=bool))
    with pytest.raises(ValueError):
        GridFunction(grid=grid, values=np.zeros(3), derivative=np.zeros(2))


def test_with_values_keeps_masks():
    grid = Grid(a=0, b=1, n=3)
    function = GridFunction(
        grid=grid, values=np.ones(3), pole_mask=np.array([False, True, False]), derivative=np.zeros(3)
    )
    replaced = function.with_values(np.array([1.0, 2.0, 3.0]))
    assert replaced.pole_mask.tolist() == [False, True, False]
    assert replaced.derivative is None
    assert replaced.has_poles


def test_max_abs_skips_masked_points():
    grid = Grid(a=0, b=1, n=3)
    function = GridFunction(grid=grid, values=np.array([1.0, 1e10, -2.0]), pole_mask=np.array([False, True, False]))
    assert function.max_abs() == 2.0
    assert function.max_abs(include_masked=True) == 1e10


def test_ensure_same_grid():
    first = Grid(a=0, b=1, n=3).sample(np.sin)
    second = Grid(a=0, b=1, n=5).sample(np.sin)
    assert ensure_same_grid(first, first) == first.grid
    with pytest.raises(GridMismatchError):
        ensure_same_grid(first, second)
