"""Eigenvalue solvers for Schrödinger and weighted operators."""

from genext.spectral.logderivative import eigenfunction_logderivative, flag_nodes
from genext.spectral.results import SolverMeta, SpectrumResult
from genext.spectral.solvers import effective_potential, solve_schrodinger, solve_weighted

__all__ = [
    "SolverMeta",
    "SpectrumResult",
    "effective_potential",
    "eigenfunction_logderivative",
    "flag_nodes",
    "solve_schrodinger",
    "solve_weighted",
]
