"""Project public classes and functions."""

from genext.catalog import lookup_family
from genext.core import Grid, GridFunction, ResidualReport

__all__ = ["Grid", "GridFunction", "ResidualReport", "lookup_family"]
