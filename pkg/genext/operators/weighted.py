"""Factorized and weighted differential operators.

All operators are applied in their nested form, a centered difference of a product of a centered difference:
- H₊ u = -(1/f) D[f² D[u/f]]
- H₋ u = -f D[(1/f²) D[f u]]
- L1 u = -(1/g) D[g D u]
- L2 u = -g D[(1/g) D u]

The two outermost points at each end are tail-masked in the result.
"""

import numpy as np

from genext.core.calculus import check_positive, first_difference
from genext.core.grid import GridFunction, ensure_same_grid
from genext.core.residuals import DEFAULT_MARGIN, ResidualReport, summarize, trusted_points

BOUNDARY_POINTS = 2


def _operator_result(template: GridFunction, values: np.ndarray) -> GridFunction:
    tail_mask = template.tail_mask.copy()
    tail_mask[:BOUNDARY_POINTS] = True
    tail_mask[-BOUNDARY_POINTS:] = True
    return GridFunction(grid=template.grid, values=values, pole_mask=template.pole_mask, tail_mask=tail_mask)


def _nested(outer: np.ndarray, inner: np.ndarray, values: np.ndarray, h: float) -> np.ndarray:
    """Compute -outer · D[inner · D[values]]."""
    return -outer * first_difference(inner * first_difference(values, h), h)


def apply_H_plus(f: GridFunction, u: GridFunction) -> GridFunction:  # noqa: N802
    """Apply H₊ = -(1/f) d/dx f² d/dx (1/f)."""
    ensure_same_grid(f, u)
    check_positive(f, name="weight f")
    values = _nested(1 / f.values, f.values**2, u.values / f.values, f.grid.h)
    return _operator_result(u, values)


def apply_H_minus(f: GridFunction, u: GridFunction) -> GridFunction:  # noqa: N802
    """Apply H₋ = -f d/dx (1/f²) d/dx f."""
    ensure_same_grid(f, u)
    check_positive(f, name="weight f")
    values = _nested(f.values, 1 / f.values**2, f.values * u.values, f.grid.h)
    return _operator_result(u, values)


def apply_L1(g: GridFunction, u: GridFunction) -> GridFunction:  # noqa: N802
    """Apply L1 = -(1/g) d/dx g d/dx."""
    ensure_same_grid(g, u)
    check_positive(g)
    return _operator_result(u, _nested(1 / g.values, g.values, u.values, g.grid.h))


def apply_L2(g: GridFunction, u: GridFunction) -> GridFunction:  # noqa: N802
    """Apply L2 = -g d/dx (1/g) d/dx."""
    ensure_same_grid(g, u)
    check_positive(g)
    return _operator_result(u, _nested(g.values, 1 / g.values, u.values, g.grid.h))


def similarity_residual(f: GridFunction, u: GridFunction, margin: int = DEFAULT_MARGIN) -> ResidualReport:
    """Measure how well L1 = f⁻¹ H₊ f and L2 = f H₋ f⁻¹ hold on a function u, with g = f².

    Both sides go through the nested operators, the identity holds on the grid up to rounding.
    See `operator_consistency_residual` for the discretization error of each operator.

    Returns:
        the pointwise maximum of both residuals, summarized over trusted points
    """
    ensure_same_grid(f, u)
    check_positive(f, name="weight f")
    g = f.with_values(f.values**2)

    lifted = apply_H_plus(f, u.with_values(f.values * u.values))
    first = apply_L1(g, u).values - lifted.values / f.values

    lowered = apply_H_minus(f, u.with_values(u.values / f.values))
    second = apply_L2(g, u).values - f.values * lowered.values

    residual = np.maximum(np.abs(first), np.abs(second))
    return summarize(f.grid, residual, trusted_points(f, u, lifted, lowered, margin=margin))


def operator_consistency_residual(
    f: GridFunction,
    u: GridFunction,
    margin: int = DEFAULT_MARGIN,
    window: tuple[float, float] | None = None,
) -> ResidualReport:
    """Compare the nested operators with their expanded forms, with g = f².

    The expanded forms use the analytic derivatives carried by f and u:
    - H₊ u = -u'' + (f''/f) u
    - H₋ u = -u'' + (2 (f'/f)² - f''/f) u
    - L1 u = -u'' - 2 (f'/f) u'
    - L2 u = -u'' + 2 (f'/f) u'

    The residual is the discretization error of the nested forms, it decreases as h².

    Raises:
        ValueError: if f or u lacks its first or second analytic derivative
    """
    ensure_same_grid(f, u)
    check_positive(f, name="weight f")
    for name, function in (("f", f), ("u", u)):
        if function.derivative is None or function.second_derivative is None:
            raise ValueError(f"Function {name} needs its first and second analytic derivatives.")
    g = f.with_values(f.values**2)
    slope = f.derivative / f.values
    curvature = f.second_derivative / f.values
    expanded = {
        "H_plus": -u.second_derivative + curvature * u.values,
        "H_minus": -u.second_derivative + (2 * slope**2 - curvature) * u.values,
        "L1": -u.second_derivative - 2 * slope * u.derivative,
        "L2": -u.second_derivative + 2 * slope * u.derivative,
    }
    nested = {
        "H_plus": apply_H_plus(f, u),
        "H_minus": apply_H_minus(f, u),
        "L1": apply_L1(g, u),
        "L2": apply_L2(g, u),
    }
    residual = np.max([np.abs(nested[name].values - expanded[name]) for name in expanded], axis=0)
    keep = trusted_points(f, u, *nested.values(), margin=margin, window=window)
    return summarize(f.grid, residual, keep)
