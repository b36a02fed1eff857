"""Package core concepts."""

from genext.core.grid import Grid, GridFunction
from genext.core.residuals import ResidualReport

__all__ = ["Grid", "GridFunction", "ResidualReport"]
