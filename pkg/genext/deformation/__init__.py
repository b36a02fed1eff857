"""The isospectral deformation route and its coincidence with the next generation construction."""

from genext.deformation.route import (
    DeformationProblem,
    Seed,
    Sign,
    chi_residual,
    deformed_superpotential,
    route_equivalence,
    scaled_superpotential,
    solve_chi,
)

__all__ = [
    "DeformationProblem",
    "Seed",
    "Sign",
    "chi_residual",
    "deformed_superpotential",
    "route_equivalence",
    "scaled_superpotential",
    "solve_chi",
]
