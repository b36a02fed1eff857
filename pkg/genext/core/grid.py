"""Define `Grid` and `GridFunction`.

A grid is a uniform sample of the coordinate x on [a, b].
Every function the library manipulates (superpotentials, weights, eigenfunctions, potentials)
is carried as a `GridFunction`: the values sampled on a grid, optional masks and, when it is
known in closed form, the first derivative.

Masks are boolean arrays aligned with the values:
- the pole mask flags points sitting on or next to a zero of an underlying eigenfunction,
- the tail mask flags points where a numerically decayed eigenfunction cannot be trusted.
"""

from collections.abc import Callable
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from genext.core.errors import GridMismatchError


@dataclass(frozen=True)
class Grid:
    """Represent a uniform grid.

    Attributes:
        a: left endpoint
        b: right endpoint
        n: number of points, endpoints included
    """

    a: float
    b: float
    n: int

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError(f"Grid right endpoint must exceed the left one, got [{self.a}, {self.b}].")
        if self.n < 3:
            raise ValueError("grid.n must be ≥ 3")

    @property
    def h(self) -> float:
        """The spacing between two consecutive points."""
        return (self.b - self.a) / (self.n - 1)

    @cached_property
    def x(self) -> np.ndarray:
        """The coordinates of the grid points."""
        return np.linspace(self.a, self.b, self.n)

    @property
    def length(self) -> float:
        """The length of the interval."""
        return self.b - self.a

    def refine(self) -> "Grid":
        """Halve the spacing, every point of this grid is kept."""
        return Grid(a=self.a, b=self.b, n=2 * self.n - 1)

    def coarsen(self) -> "Grid":
        """Double the spacing by keeping every other point, `n` must be odd."""
        if self.n % 2 == 0:
            raise ValueError("Only grids with an odd number of points can be coarsened.")
        return Grid(a=self.a, b=self.b, n=(self.n + 1) // 2)

    def sample(self, function: Callable[[np.ndarray], np.ndarray]) -> "GridFunction":
        """Evaluate a vectorized function on the grid."""
        return GridFunction(grid=self, values=np.asarray(function(self.x), dtype=float))

    def within(self, lo: float, hi: float) -> np.ndarray:
        """Flag the points inside [lo, hi]."""
        return (self.x >= lo) & (self.x <= hi)


def _as_mask(mask: np.ndarray | None, size: int) -> np.ndarray:
    if mask is None:
        return np.zeros(size, dtype=bool)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (size,):
        raise ValueError(f"Mask must have {size} entries, found {mask.shape}.")
    return mask


@dataclass(frozen=True)
class GridFunction:
    """A real function sampled on a grid.

    Attributes:
        grid: the grid the values are sampled on
        values: one finite value per grid point
        pole_mask: points on or next to a pole, their values are finite placeholders
        tail_mask: points where the function is numerically meaningless
        derivative: the analytic first derivative, when it is known
        second_derivative: the analytic second derivative, when it is known
    """

    grid: Grid
    values: np.ndarray
    pole_mask: np.ndarray = field(default=None)  # type: ignore[assignment]
    tail_mask: np.ndarray = field(default=None)  # type: ignore[assignment]
    derivative: np.ndarray | None = None
    second_derivative: np.ndarray | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n,):
            raise ValueError(f"Expected {self.grid.n} values, found {values.shape}.")
        if not np.all(np.isfinite(values)):
            raise ValueError("Grid function values must be finite, flag poles with a mask instead.")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "pole_mask", _as_mask(self.pole_mask, self.grid.n))
        object.__setattr__(self, "tail_mask", _as_mask(self.tail_mask, self.grid.n))
        for name in ("derivative", "second_derivative"):
            if getattr(self, name) is not None:
                derivative = np.asarray(getattr(self, name), dtype=float)
                if derivative.shape != values.shape:
                    raise ValueError("Derivatives must be sampled on the same grid as the values.")
                object.__setattr__(self, name, derivative)

    @property
    def x(self) -> np.ndarray:
        """The coordinates of the samples."""
        return self.grid.x

    @property
    def has_poles(self) -> bool:
        """Whether any point is flagged as a pole."""
        return bool(self.pole_mask.any())

    def with_values(
        self,
        values: np.ndarray,
        derivative: np.ndarray | None = None,
        second_derivative: np.ndarray | None = None,
    ) -> "GridFunction":
        """Return a grid function sharing grid and masks, with new values."""
        return GridFunction(
            grid=self.grid,
            values=values,
            pole_mask=self.pole_mask,
            tail_mask=self.tail_mask,
            derivative=derivative,
            second_derivative=second_derivative,
        )

    def max_abs(self, include_masked: bool = False) -> float:
        """Return the largest magnitude, skipping masked points unless asked not to."""
        keep = np.ones(self.grid.n, dtype=bool) if include_masked else ~(self.pole_mask | self.tail_mask)
        if not keep.any():
            return 0.0
        return float(np.max(np.abs(self.values[keep])))


def ensure_same_grid(*functions: GridFunction) -> Grid:
    """Check every function is sampled on the same grid and return it."""
    grid = functions[0].grid
    for function in functions[1:]:
        if function.grid != grid:
            raise GridMismatchError(f"Grid functions do not share a grid: {grid} != {function.grid}.")
    return grid
