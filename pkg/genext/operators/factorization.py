"""Partner potentials of a factorized Hamiltonian.

With f = exp(-∫W), the Hamiltonian H₊ = -(1/f) d f² d (1/f) expands to -d² + W² - W' and
H₋ = -f d (1/f²) d f expands to -d² + W² + W'. The nodeless weight f is the zero mode of H₊.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

from genext.catalog.families import Parameters, ParameterPoint, SuperpotentialFamily
from genext.catalog.sampling import sample_superpotential, sample_weight
from genext.core.calculus import check_positive, second_difference
from genext.core.grid import Grid, GridFunction
from genext.core.residuals import DEFAULT_MARGIN, ResidualReport, constancy_report, trusted_points

logger = logging.getLogger(__name__)


@dataclass(slots=True, frozen=True)
class FactorizationBundle:
    """Partner potentials and weights of a family at one parameter point.

    Attributes:
        v_plus: V₊ = W² - W'
        v_minus: V₋ = W² + W'
        f: the nodeless weight exp(-∫W)
        g: the weight f²
        params: the parameter point
    """

    v_plus: GridFunction
    v_minus: GridFunction
    f: GridFunction
    g: GridFunction
    params: ParameterPoint

    @property
    def grid(self) -> Grid:
        """The grid every function of the bundle shares."""
        return self.f.grid


def partner_potentials(family: SuperpotentialFamily, point: ParameterPoint | None, grid: Grid) -> FactorizationBundle:
    """Build V± from the analytic superpotential and its derivative."""
    superpotential = sample_superpotential(family, point, grid)
    f, g = sample_weight(family, point, grid)
    w, dw = superpotential.values, superpotential.derivative
    params = ParameterPoint(values=family.parameters(None if point is None else point.values))
    return FactorizationBundle(
        v_plus=GridFunction(grid=grid, values=w**2 - dw),
        v_minus=GridFunction(grid=grid, values=w**2 + dw),
        f=f,
        g=g,
        params=params,
    )


def discrete_partner_potentials(f: GridFunction) -> tuple[GridFunction, GridFunction]:
    """Compute the partner potentials of the discretized factorization.

    V₊ = D₂f / f and V₋ = f D₂(1/f) with the compact second difference D₂: on the grid, f is an
    exact zero mode of -D₂ + V₊ and 1/f an exact zero mode of -D₂ + V₋.
    """
    check_positive(f, name="weight f")
    h = f.grid.h
    v_plus = second_difference(f.values, h) / f.values
    v_minus = f.values * second_difference(1 / f.values, h)
    return GridFunction(grid=f.grid, values=v_plus), GridFunction(grid=f.grid, values=v_minus)


def base_shape_invariance_residual(
    family: SuperpotentialFamily,
    point: ParameterPoint | None,
    grid: Grid,
    shift: Callable[[Parameters], Parameters] | None = None,
    margin: int = DEFAULT_MARGIN,
) -> tuple[ResidualReport, float]:
    """Check V₋(x, λ) and V₊(x, μ) differ by a constant, μ being the shifted parameters.

    Args:
        family: the family to check
        point: the parameters λ, family defaults when missing
        grid: where to check
        shift: replaces the family shift rule, used to build negative controls
        margin: grid points skipped at both ends

    Returns:
        the deviation of d(x) = V₊(x, μ) - V₋(x, λ) from its mean, and that mean
    """
    params = family.parameters(None if point is None else point.values)
    shifted = (shift or family.shift)(params)
    base = partner_potentials(family, ParameterPoint(values=params), grid)
    partner = partner_potentials(family, ParameterPoint(values=shifted), grid)
    difference = partner.v_plus.values - base.v_minus.values
    keep = trusted_points(base.v_minus, margin=margin)
    report, constant = constancy_report(grid, difference, keep)
    logger.debug("Shape invariance of '%s' at %s -> %s: constant %s.", family.name, params, shifted, constant)
    return report, constant
