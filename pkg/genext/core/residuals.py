"""Residual reports.

Every identity the library claims is checked as a residual: a pointwise array that should
vanish. A `ResidualReport` summarizes it over the trusted points of the grid, that is all points
except a margin at both ends, a window around every flagged pole and tail-masked points.
"""

from dataclasses import dataclass

import numpy as np

from genext.core.grid import Grid, GridFunction

DEFAULT_MARGIN = 2
DEFAULT_POLE_WINDOW_STEPS = 5


@dataclass(slots=True, frozen=True)
class ResidualReport:
    """Summary of a residual over the trusted points of a grid.

    Attributes:
        max_abs: largest magnitude
        mean_abs: mean magnitude
        argmax_x: coordinate of the worst point
        excluded_margin: number of grid points skipped (margin, pole windows, tails, window)
    """

    max_abs: float
    mean_abs: float
    argmax_x: float
    excluded_margin: int

    def within(self, tolerance: float) -> bool:
        """Whether the residual stays below a tolerance."""
        return self.max_abs <= tolerance

    def to_record(self) -> dict[str, float | int]:
        """Convert to a plain record."""
        return {
            "max_abs": self.max_abs,
            "mean_abs": self.mean_abs,
            "argmax_x": self.argmax_x,
            "margin": self.excluded_margin,
        }


def pole_exclusion(grid: Grid, pole_mask: np.ndarray, pole_window: float | None = None) -> np.ndarray:
    """Widen a pole mask to every point closer than `pole_window` to a flagged point."""
    window = DEFAULT_POLE_WINDOW_STEPS * grid.h if pole_window is None else pole_window
    if not pole_mask.any():
        return np.zeros(grid.n, dtype=bool)
    steps = min(int(np.floor(window / grid.h + 1e-9)), grid.n - 1)
    kernel = np.ones(2 * steps + 1)
    widened = np.convolve(pole_mask.astype(float), kernel, mode="full")[steps : steps + grid.n]
    return widened > 0


def trusted_points(
    *functions: GridFunction,
    margin: int = DEFAULT_MARGIN,
    pole_window: float | None = None,
    window: tuple[float, float] | None = None,
) -> np.ndarray:
    """Flag the points a residual built from `functions` should be measured on."""
    grid = functions[0].grid
    keep = np.ones(grid.n, dtype=bool)
    keep[:margin] = False
    keep[grid.n - margin :] = False
    for function in functions:
        keep &= ~pole_exclusion(grid, function.pole_mask, pole_window)
        keep &= ~function.tail_mask
    if window is not None:
        keep &= grid.within(*window)
    return keep


def summarize(grid: Grid, residual: np.ndarray, keep: np.ndarray) -> ResidualReport:
    """Summarize a pointwise residual over the kept points."""
    keep = keep & np.isfinite(residual)
    if not keep.any():
        raise ValueError("No trusted point is left to measure the residual on.")
    magnitudes = np.abs(residual[keep])
    worst = int(np.argmax(magnitudes))
    return ResidualReport(
        max_abs=float(magnitudes[worst]),
        mean_abs=float(np.mean(magnitudes)),
        argmax_x=float(grid.x[keep][worst]),
        excluded_margin=int(grid.n - keep.sum()),
    )


def constancy_report(grid: Grid, difference: np.ndarray, keep: np.ndarray) -> tuple[ResidualReport, float]:
    """Measure how far a difference is from a constant.

    Returns:
        the residual of the difference around its mean and the mean itself
    """
    keep = keep & np.isfinite(difference)
    if not keep.any():
        raise ValueError("No trusted point is left to measure the residual on.")
    constant = float(np.mean(difference[keep]))
    return summarize(grid, difference - constant, keep), constant
