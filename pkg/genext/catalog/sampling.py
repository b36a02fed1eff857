"""Sample catalog families on grids.

A family is only evaluated strictly inside its domain. Half-line families are singular at the
origin, grids reaching it are first clamped with `clamp_grid`.
"""

import logging
import math
from typing import Any

import numpy as np

from genext.catalog.families import ParameterPoint, SuperpotentialFamily
from genext.core.errors import DomainError
from genext.core.grid import Grid, GridFunction

logger = logging.getLogger(__name__)

DEFAULT_CLAMP_FRACTION = 1e-3
DEFAULT_MAX_EXPONENT = 700.0


def check_domain(family: SuperpotentialFamily, grid: Grid) -> None:
    """Raise if the grid does not lie strictly inside the family domain."""
    lo, hi = family.domain
    if not (lo < grid.a and grid.b < hi):
        raise DomainError(
            f"Grid [{grid.a}, {grid.b}] is not strictly inside the domain ({lo}, {hi}) of family '{family.name}'."
        )


def clamp_grid(family: SuperpotentialFamily, grid: Grid, epsilon: float | None = None) -> Grid:
    """Move the left end of a half-line grid to ε > 0, keeping the number of points.

    Args:
        family: the family the grid is meant for
        grid: the requested grid
        epsilon: the new left endpoint, defaults to 10⁻³ (b - a)

    Returns:
        the grid itself when it already fits the domain, the clamped grid otherwise
    """
    if not family.is_half_line or grid.a > 0:
        return grid
    epsilon = DEFAULT_CLAMP_FRACTION * (grid.b - grid.a) if epsilon is None else epsilon
    logger.debug("Clamping grid of family '%s' from a=%s to a=%s.", family.name, grid.a, epsilon)
    return Grid(a=epsilon, b=grid.b, n=grid.n)


def _values(family: SuperpotentialFamily, point: ParameterPoint | None) -> tuple[float, ...]:
    return family.parameters(None if point is None else point.values)


def sample_superpotential(
    family: SuperpotentialFamily, point: ParameterPoint | None, grid: Grid
) -> GridFunction:
    """Sample W(x, λ) with its analytic derivative."""
    check_domain(family, grid)
    params = _values(family, point)
    return GridFunction(
        grid=grid,
        values=family.superpotential(grid.x, params),
        derivative=family.superpotential_derivative(grid.x, params),
    )


def sample_weight(
    family: SuperpotentialFamily,
    point: ParameterPoint | None,
    grid: Grid,
    max_exponent: float = DEFAULT_MAX_EXPONENT,
) -> tuple[GridFunction, GridFunction]:
    """Sample the weights f = exp(-∫W) and g = f².

    Both carry their analytic derivatives f' = -W f, f'' = (W² - W') f, g' = -2 W g and
    g'' = (4 W² - 2 W') g.

    Raises:
        DomainError: when the grid leaves the domain, or when |ln g| exceeds `max_exponent`
            so that g would overflow or underflow.
    """
    check_domain(family, grid)
    params = _values(family, point)
    log_f = family.log_weight(grid.x, params)
    worst = float(np.max(np.abs(2 * log_f)))
    if worst > max_exponent:
        raise DomainError(
            f"Weight exponent of family '{family.name}' reaches {worst:.1f} on the grid, "
            f"beyond the bound {max_exponent}. Use a shorter grid."
        )
    w = family.superpotential(grid.x, params)
    dw = family.superpotential_derivative(grid.x, params)
    f_values = np.exp(log_f)
    g_values = np.exp(2 * log_f)
    f = GridFunction(
        grid=grid,
        values=f_values,
        derivative=-w * f_values,
        second_derivative=(w**2 - dw) * f_values,
    )
    g = GridFunction(
        grid=grid,
        values=g_values,
        derivative=-2 * w * g_values,
        second_derivative=(4 * w**2 - 2 * dw) * g_values,
    )
    return f, g


def _endpoint(value: float) -> float | str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def describe_family(family: SuperpotentialFamily) -> dict[str, Any]:
    """Structured metadata of a family."""
    return {
        "name": family.name,
        "domain": [_endpoint(family.domain[0]), _endpoint(family.domain[1])],
        "parameters": dict(zip(family.parameter_names, family.defaults, strict=True)),
        "spectrum": family.spectrum_formula,
        "closed_form_eigenfunctions": family.has_closed_form_eigenfunctions,
    }


def describe_catalog(families: list[SuperpotentialFamily]) -> list[dict[str, Any]]:
    """Metadata of several families, sorted by name."""
    return [describe_family(family) for family in sorted(families, key=lambda family: family.name)]
