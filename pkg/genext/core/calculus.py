"""Finite differences, interpolation and change of variable on grid functions.

Derivatives are centered 3-point differences (second order) everywhere:
- `first_difference` is the centered first difference, one-sided of second order at both ends,
- `second_difference` is the compact 3-point second difference; the two endpoints copy their
  neighbour and are never used by residuals, which skip a margin at both ends.
"""

import numpy as np
from scipy.interpolate import CubicSpline

from genext.core.errors import NonPositiveWeightError
from genext.core.grid import Grid, GridFunction, ensure_same_grid


def first_difference(values: np.ndarray, h: float) -> np.ndarray:
    """Centered first difference."""
    return np.gradient(values, h, edge_order=2)


def second_difference(values: np.ndarray, h: float) -> np.ndarray:
    """Compact second difference (u[i+1] - 2u[i] + u[i-1]) / h²."""
    result = np.empty_like(values, dtype=float)
    result[1:-1] = (values[2:] - 2 * values[1:-1] + values[:-2]) / h**2
    result[0] = result[1]
    result[-1] = result[-2]
    return result


def derivative(function: GridFunction) -> np.ndarray:
    """Return the analytic derivative when known, the centered difference otherwise."""
    if function.derivative is not None:
        return function.derivative
    return first_difference(function.values, function.grid.h)


def check_positive(weight: GridFunction, name: str = "weight") -> None:
    """Raise if a weight is not strictly positive on the whole grid."""
    if np.any(weight.values <= 0):
        index = int(np.argmax(weight.values <= 0))
        raise NonPositiveWeightError(
            f"The {name} must be strictly positive, found {weight.values[index]} at x={weight.x[index]}."
        )


def weighted_derivative(weight: GridFunction, function: GridFunction) -> np.ndarray:
    """Compute (1/g) d/dx (g u).

    The product rule u' + (g'/g) u is used when both derivatives are known in closed form,
    the centered difference of the product otherwise.
    """
    ensure_same_grid(weight, function)
    if weight.derivative is not None and function.derivative is not None:
        return function.derivative + weight.derivative / weight.values * function.values
    return first_difference(weight.values * function.values, weight.grid.h) / weight.values


def _pole_free_segments(mask: np.ndarray) -> list[tuple[int, int]]:
    """Return [start, stop) index ranges of consecutive unmasked points."""
    segments: list[tuple[int, int]] = []
    start: int | None = None
    for index, masked in enumerate(mask):
        if not masked and start is None:
            start = index
        elif masked and start is not None:
            segments.append((start, index))
            start = None
    if start is not None:
        segments.append((start, len(mask)))
    return segments


def interpolate(function: GridFunction, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate a grid function at arbitrary points with cubic splines.

    A separate spline is fitted on every run of points free of poles, so that no spline
    crosses a pole. Points outside every run, or outside the grid, are returned as invalid.

    Args:
        function: the sampled function
        points: coordinates where to evaluate it

    Returns:
        the interpolated values (0 where invalid) and a boolean array flagging valid points
    """
    points = np.asarray(points, dtype=float)
    values = np.zeros_like(points)
    valid = np.zeros(points.shape, dtype=bool)
    x = function.x
    for start, stop in _pole_free_segments(function.pole_mask):
        if stop - start < 4:
            continue
        spline = CubicSpline(x[start:stop], function.values[start:stop])
        inside = (points >= x[start]) & (points <= x[stop - 1]) & ~valid
        values[inside] = spline(points[inside])
        valid |= inside
    return values, valid


def _commensurate_indices(grid: Grid, points: np.ndarray) -> np.ndarray | None:
    """Map points onto grid indices when they all fall on grid points."""
    positions = (points - grid.a) / grid.h
    indices = np.rint(positions)
    if np.all(np.abs(positions - indices) < 1e-9) and indices.min() >= 0 and indices.max() <= grid.n - 1:
        return indices.astype(int)
    return None


def rescale(function: GridFunction, alpha: float, target: Grid) -> GridFunction:
    """Change variable from ξ to x = ξ/α: the result samples x ↦ function(αx) on `target`.

    Values are read directly when every αx falls on a source grid point, they are
    interpolated with cubic splines otherwise. The analytic derivative, when present,
    follows the chain rule. Points whose image falls outside the source grid are tail-masked and
    hold the value of the nearest source point.
    """
    points = alpha * target.x
    indices = _commensurate_indices(function.grid, points)
    if indices is not None:
        derivative_values = None if function.derivative is None else alpha * function.derivative[indices]
        curvature = None if function.second_derivative is None else alpha**2 * function.second_derivative[indices]
        return GridFunction(
            grid=target,
            values=function.values[indices],
            pole_mask=function.pole_mask[indices],
            tail_mask=function.tail_mask[indices],
            derivative=derivative_values,
            second_derivative=curvature,
        )

    nearest = np.clip(np.rint((points - function.grid.a) / function.grid.h).astype(int), 0, function.grid.n - 1)
    values, valid = interpolate(function, points)
    values = np.where(valid, values, function.values[nearest])
    derivative_values = None
    if function.derivative is not None:
        slopes, _ = interpolate(function.with_values(function.derivative), points)
        derivative_values = alpha * np.where(valid, slopes, function.derivative[nearest])
    curvature = None
    if function.second_derivative is not None:
        bends, _ = interpolate(function.with_values(function.second_derivative), points)
        curvature = alpha**2 * np.where(valid, bends, function.second_derivative[nearest])
    inside = (points >= function.grid.a) & (points <= function.grid.b)
    return GridFunction(
        grid=target,
        values=values,
        pole_mask=function.pole_mask[nearest] & inside,
        tail_mask=(function.tail_mask[nearest] & inside) | (~valid & ~function.pole_mask[nearest]),
        derivative=derivative_values,
        second_derivative=curvature,
    )
