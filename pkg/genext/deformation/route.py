"""The isospectral deformation route.

Deforming W into W + χ while keeping a partner potential up to a constant K constrains χ by the
Riccati equation χ² ± 2Wχ + χ' + K = 0. With χ = u'/u it becomes the linear equation
u'' ± 2Wu' + Ku = 0, which is integrated from a seed.

Posed in x with the rescaled superpotential W_α(x) = αW(αx), the constant α²K and the minus
sign, the deformation coincides with the next generation construction: χ(x) = α F̄(αx).
"""

import enum
import logging
from collections.abc import Callable

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from genext.catalog import ParameterPoint, SuperpotentialFamily, sample_superpotential
from genext.core.calculus import derivative, rescale
from genext.core.errors import IntegrationError, RouteMismatchError
from genext.core.grid import Grid, GridFunction, ensure_same_grid
from genext.core.residuals import DEFAULT_MARGIN, ResidualReport, summarize, trusted_points
from genext.spectral import eigenfunction_logderivative

logger = logging.getLogger(__name__)

Window = tuple[float, float] | None


class Sign(str, enum.Enum):
    """Define the sign in front of 2Wχ."""

    PLUS = "plus"
    MINUS = "minus"

    @property
    def factor(self) -> float:
        """+1 or -1."""
        return 1.0 if self is Sign.PLUS else -1.0


class Seed(BaseModel):
    """Initial data u(x0) = u0, u'(x0) = du0 of the linear equation.

    Attributes:
        x0: where the data is given
        u0: the value
        du0: the slope
    """

    model_config = ConfigDict(frozen=True)

    x0: float = 1.0
    u0: float = 1.0
    du0: float = 1.0

    @model_validator(mode="after")
    def check_not_trivial(self) -> Self:
        """The zero seed only yields the zero solution."""
        if self.u0 == 0 and self.du0 == 0:
            raise ValueError("seed (u0, du0) must not be (0, 0)")
        return self


class DeformationProblem(BaseModel):
    """The Riccati constraint χ² ± 2Wχ + χ' + K = 0 and its seed.

    Attributes:
        superpotential: W sampled on the grid where χ is wanted
        K: the constant
        sign: the sign in front of 2Wχ
        seed: initial data of u, χ = u'/u
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    superpotential: GridFunction
    K: float
    sign: Sign = Sign.MINUS
    seed: Seed = Field(default_factory=Seed)

    @model_validator(mode="after")
    def check_seed_inside(self) -> Self:
        """The seed must sit on the grid."""
        grid = self.superpotential.grid
        if not grid.a <= self.seed.x0 <= grid.b:
            raise ValueError(f"seed.x0={self.seed.x0} is outside the grid [{grid.a}, {grid.b}]")
        return self


def scaled_superpotential(
    family: SuperpotentialFamily, point: ParameterPoint | None, alpha: float, grid: Grid
) -> GridFunction:
    """Sample W_α(x) = α W(αx) with its derivative α² W'(αx)."""
    ends = sorted((alpha * grid.a, alpha * grid.b))
    base = sample_superpotential(family, point, Grid(a=ends[0], b=ends[1], n=grid.n))
    scaled = rescale(base, alpha, grid)
    slope = None if scaled.derivative is None else alpha * scaled.derivative
    return scaled.with_values(alpha * scaled.values, derivative=slope)


def chi_residual(
    chi: GridFunction,
    problem: DeformationProblem,
    margin: int = DEFAULT_MARGIN,
    pole_window: float | None = None,
    window: Window = None,
) -> ResidualReport:
    """Residual of χ² ± 2Wχ + χ' + K away from poles."""
    superpotential = problem.superpotential
    ensure_same_grid(chi, superpotential)
    coupling = 2 * problem.sign.factor * superpotential.values * chi.values
    residual = chi.values**2 + coupling + derivative(chi) + problem.K
    keep = trusted_points(chi, superpotential, margin=margin, pole_window=pole_window, window=window)
    return summarize(chi.grid, residual, keep)


def _integrate(
    rhs: Callable[[float, np.ndarray], list[float]],
    start: float,
    end: float,
    initial: list[float],
    points: np.ndarray,
    rtol: float,
    atol: float,
) -> np.ndarray:
    solution = solve_ivp(rhs, (start, end), initial, method="RK45", t_eval=points, rtol=rtol, atol=atol)
    finite = np.all(np.isfinite(solution.y), axis=0) if solution.y.size else np.zeros(0, dtype=bool)
    if not solution.success or solution.y.shape[1] != points.size or not finite.all():
        reached = solution.t[finite] if solution.t.size else np.array([start])
        last_x = float(reached[-1]) if reached.size else start
        raise IntegrationError(f"Integration from x={start} towards x={end} failed: {solution.message}", last_x=last_x)
    return solution.y


def solve_chi(
    problem: DeformationProblem, grid: Grid | None = None, rtol: float = 1e-10, atol: float = 1e-12
) -> GridFunction:
    """Integrate u'' ± 2Wu' + Ku = 0 from the seed and return χ = u'/u.

    W is interpolated with a cubic spline between its samples. The integration runs forward and
    backward from the seed, nodes of u are flagged as poles of χ.

    Args:
        problem: the constraint and its seed
        grid: where χ is sampled, the grid of W by default
        rtol: relative tolerance of the integrator
        atol: absolute tolerance of the integrator

    Raises:
        IntegrationError: when the integrator stops early or u blows up, with the last x reached
    """
    superpotential = problem.superpotential
    grid = grid or superpotential.grid
    spline = CubicSpline(superpotential.x, superpotential.values)
    factor = 2 * problem.sign.factor
    K = problem.K  # noqa: N806

    def rhs(x: float, y: np.ndarray) -> list[float]:
        return [y[1], -factor * float(spline(x)) * y[1] - K * y[0]]

    seed = problem.seed
    x = grid.x
    at_seed = np.abs(x - seed.x0) <= 1e-12 * grid.length
    u = np.full(grid.n, seed.u0)
    du = np.full(grid.n, seed.du0)
    forward = (x > seed.x0) & ~at_seed
    backward = (x < seed.x0) & ~at_seed
    if forward.any():
        u[forward], du[forward] = _integrate(rhs, seed.x0, grid.b, [seed.u0, seed.du0], x[forward], rtol, atol)
    if backward.any():
        points = x[backward][::-1]
        values = _integrate(rhs, seed.x0, grid.a, [seed.u0, seed.du0], points, rtol, atol)
        u[backward], du[backward] = values[0][::-1], values[1][::-1]
    logger.debug("Integrated u on [%s, %s] from x0=%s.", grid.a, grid.b, seed.x0)
    return eigenfunction_logderivative(GridFunction(grid=grid, values=u, derivative=du))


def route_equivalence(
    chi: GridFunction,
    F_bar: GridFunction,  # noqa: N803
    alpha: float,
    problem: DeformationProblem | None = None,
    K: float | None = None,  # noqa: N803
    margin: int = DEFAULT_MARGIN,
    pole_window: float | None = None,
    window: Window = None,
) -> tuple[ResidualReport, float]:
    """Compare χ(x) with α F̄(αx).

    Args:
        chi: χ from `solve_chi`
        F_bar: F̄ in ξ from the next generation construction
        alpha: the step α, ξ = αx
        problem: the problem χ solves, checked against the construction when given with `K`
        K: the constant of the construction
        margin: grid points skipped at both ends
        pole_window: half width of the windows skipped around poles
        window: restricts the comparison to an interval

    Returns:
        the sup-norm difference and the chain-rule scale α

    Raises:
        RouteMismatchError: when the problem sign is not minus or its constant is not α²K
    """
    if problem is not None and K is not None:
        if problem.sign is not Sign.MINUS:
            raise RouteMismatchError("The deformation route coincides with the construction for the minus sign only.")
        if not np.isclose(problem.K, alpha**2 * K, rtol=1e-9, atol=1e-12):
            raise RouteMismatchError(f"Deformation constant {problem.K} does not match α²K = {alpha**2 * K}.")
    scale = alpha
    expected = rescale(F_bar, alpha, chi.grid)
    difference = chi.values - scale * expected.values
    keep = trusted_points(chi, expected, margin=margin, pole_window=pole_window, window=window)
    return summarize(chi.grid, difference, keep), scale


def deformed_superpotential(superpotential: GridFunction, chi: GridFunction) -> GridFunction:
    """The deformed superpotential W + χ, carrying the masks of χ."""
    ensure_same_grid(superpotential, chi)
    return chi.with_values(superpotential.values + chi.values)
