"""Define the outputs of the eigenvalue solvers."""

from dataclasses import dataclass
from typing import Any

import numpy as np
import pandas as pd

from genext.core.grid import Grid, GridFunction


@dataclass(slots=True, frozen=True)
class SolverMeta:
    """How a spectrum was computed.

    Attributes:
        grid: the grid of the returned eigenfunctions
        method: discretization used, always 'dense_fd'
        operator: 'schrodinger' or 'weighted'
        tolerance: error estimate of the eigenvalues from a two-grid comparison, if available
        richardson: whether eigenvalues are Richardson extrapolated
        leakage: whether some eigenfunction does not decay at the grid ends
        nodes_consistent: whether the k-th eigenfunction has exactly k interior sign changes
    """

    grid: Grid
    method: str
    operator: str
    tolerance: float | None
    richardson: bool
    leakage: bool
    nodes_consistent: bool

    def to_record(self) -> dict[str, Any]:
        """Convert to a plain record."""
        return {
            "grid": {"a": self.grid.a, "b": self.grid.b, "n": self.grid.n},
            "method": self.method,
            "operator": self.operator,
            "tolerance": self.tolerance,
            "richardson": self.richardson,
            "leakage": self.leakage,
            "nodes_consistent": self.nodes_consistent,
        }


@dataclass(slots=True, frozen=True)
class SpectrumResult:
    """Lowest eigenvalues of an operator, ascending, with optional eigenfunctions.

    Levels of an unreduced tridiagonal matrix are distinct, but levels living on the two sides of
    a pole wall can coincide to rounding, so only the order is enforced.

    Attributes:
        eigenvalues: the eigenvalues
        eigenfunctions: unit normalized eigenfunctions, plainly for Schrödinger operators and
            under the g-weighted inner product for weighted operators
        meta: solver metadata
    """

    eigenvalues: np.ndarray
    eigenfunctions: tuple[GridFunction, ...] | None
    meta: SolverMeta

    def __post_init__(self):
        if np.any(np.diff(self.eigenvalues) < 0):
            raise ValueError("Eigenvalues must be ascending.")

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def to_record(self) -> dict[str, Any]:
        """Convert to a plain record, eigenfunctions excluded."""
        return {"eigenvalues": [float(value) for value in self.eigenvalues], "solver": self.meta.to_record()}

    def to_table(self) -> pd.DataFrame:
        """Two columns: level index and eigenvalue."""
        return pd.DataFrame({"index": np.arange(len(self.eigenvalues)), "eigenvalue": self.eigenvalues})
