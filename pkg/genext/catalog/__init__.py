"""Catalog of shape invariant superpotential families.

Each family knows its superpotential, weight and shift rule in closed form, so that operators
are assembled analytically and only eigenvalue problems are solved numerically.
"""

from genext.catalog.families import ParameterPoint, SuperpotentialFamily
from genext.catalog.registry import available_families, lookup_family, register_family
from genext.catalog.sampling import (
    clamp_grid,
    describe_catalog,
    describe_family,
    sample_superpotential,
    sample_weight,
)

__all__ = [
    "ParameterPoint",
    "SuperpotentialFamily",
    "available_families",
    "clamp_grid",
    "describe_catalog",
    "describe_family",
    "lookup_family",
    "register_family",
    "sample_superpotential",
    "sample_weight",
]
