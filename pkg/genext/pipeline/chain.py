"""Build the next generation superpotential of a shape invariant family.

The chain runs in the rescaled coordinate ξ = αx:
1. `build_phi` picks the known eigenfunction φ of H₊ = -(1/f) d f² d (1/f) and its eigenvalue K,
2. `build_F` forms ψ = φ/f and F = ψ'/ψ, which obeys F² + (1/ḡ)(ḡF)' = -K with ḡ = f²,
3. `to_x_frame` maps F and ḡ back to x with F(x) = -F̄(αx) and g(x) = ḡ(αx),
4. `nextgen_partners` builds Ṽ± = W² ± (1/g)(gW)' for the ansatz W = λF.

With these conventions, Ṽ₊(λ) - Ṽ₋(μ) is the constant (μ² - λ²) K whenever μ - λ = α.
"""

import logging

import numpy as np

from genext.catalog import ParameterPoint, lookup_family, sample_weight
from genext.core.calculus import check_positive, rescale, weighted_derivative
from genext.core.errors import RouteMismatchError, SolverError
from genext.core.grid import Grid, GridFunction, ensure_same_grid
from genext.core.residuals import (
    DEFAULT_MARGIN,
    ResidualReport,
    constancy_report,
    summarize,
    trusted_points,
)
from genext.operators import partner_potentials
from genext.pipeline.config import ExtensionConfig
from genext.spectral import eigenfunction_logderivative, solve_schrodinger

logger = logging.getLogger(__name__)

Window = tuple[float, float] | None


def xi_grid(grid: Grid, alpha: float) -> Grid:
    """The ξ-grid whose points are exactly α times the points of `grid`."""
    ends = sorted((alpha * grid.a, alpha * grid.b))
    return Grid(a=ends[0], b=ends[1], n=grid.n)


def tail_mask_below(values: np.ndarray, floor: float) -> np.ndarray:
    """Flag points whose magnitude is below `floor` times the maximum."""
    return np.abs(values) < floor * np.max(np.abs(values))


def build_phi(config: ExtensionConfig, grid_xi: Grid) -> tuple[GridFunction, float]:
    """Compute the `eigenindex`-th eigenfunction φ of H₊ in ξ and its eigenvalue K.

    Closed forms φ = f P_k are used when the family has them and `config.analytic` is set,
    with their first two derivatives. Otherwise H₊ = -d² + W² - W' is diagonalized and points
    where φ decays below `config.tail_floor` are tail-masked.

    Raises:
        DomainError: when the ξ-grid is outside the family domain
        SolverError: when the eigenindex is not a bound level of the family
    """
    family = lookup_family(config.family)
    params = family.parameters(config.family_params)
    k = config.eigenindex
    if family.spectrum is not None:
        try:
            family.spectrum(params, k)
        except ValueError as error:
            raise SolverError(str(error)) from error

    f, _ = sample_weight(family, ParameterPoint(values=params), grid_xi)
    if config.analytic and family.polynomial is not None and family.spectrum is not None:
        polynomial, slope, bend = family.polynomial(grid_xi.x, params, k)
        phi = GridFunction(
            grid=grid_xi,
            values=f.values * polynomial,
            derivative=f.derivative * polynomial + f.values * slope,
            second_derivative=f.second_derivative * polynomial + 2 * f.derivative * slope + f.values * bend,
        )
        return phi, float(family.spectrum(params, k))

    bundle = partner_potentials(family, ParameterPoint(values=params), grid_xi)
    spectrum = solve_schrodinger(bundle.v_plus, k + 1, want_vectors=True, richardson=config.richardson)
    phi = spectrum.eigenfunctions[k]  # type: ignore[index]
    phi = GridFunction(grid=grid_xi, values=phi.values, tail_mask=tail_mask_below(phi.values, config.tail_floor))
    logger.debug("Numerical eigenvalue K=%s for level %d of '%s'.", spectrum.eigenvalues[k], k, family.name)
    return phi, float(spectrum.eigenvalues[k])


def build_F(phi: GridFunction, f: GridFunction) -> GridFunction:  # noqa: N802
    """Form ψ = φ/f and return F = ψ'/ψ, nodes of ψ flagged as poles.

    Derivatives of ψ follow from those of φ and f when both are known, so that F keeps an
    analytic derivative on the closed-form path.
    """
    ensure_same_grid(phi, f)
    check_positive(f, name="weight f")
    psi = _quotient(phi, f)
    return eigenfunction_logderivative(psi)


def _quotient(phi: GridFunction, f: GridFunction) -> GridFunction:
    values = phi.values / f.values
    derivative = None
    second_derivative = None
    if phi.derivative is not None and f.derivative is not None:
        log_slope = f.derivative / f.values
        derivative = phi.derivative / f.values - log_slope * values
        if phi.second_derivative is not None and f.second_derivative is not None:
            second_derivative = (
                phi.second_derivative / f.values
                - 2 * log_slope * derivative
                - f.second_derivative / f.values * values
            )
    return GridFunction(
        grid=phi.grid,
        values=values,
        pole_mask=phi.pole_mask,
        tail_mask=phi.tail_mask,
        derivative=derivative,
        second_derivative=second_derivative,
    )


def build_psi(phi: GridFunction, f: GridFunction) -> GridFunction:
    """The eigenfunction ψ = φ/f of L1 with weight f²."""
    ensure_same_grid(phi, f)
    return _quotient(phi, f)


def constraint_residual_F(  # noqa: N802
    F: GridFunction,  # noqa: N803
    g_bar: GridFunction,
    K: float,  # noqa: N803
    margin: int = DEFAULT_MARGIN,
    pole_window: float | None = None,
    window: Window = None,
) -> ResidualReport:
    """Residual of F² + (1/ḡ)(ḡF)' + K = 0 away from poles."""
    ensure_same_grid(F, g_bar)
    residual = F.values**2 + weighted_derivative(g_bar, F) + K
    keep = trusted_points(F, g_bar, margin=margin, pole_window=pole_window, window=window)
    return summarize(F.grid, residual, keep)


def _negated(function: GridFunction) -> GridFunction:
    return function.with_values(
        -function.values,
        derivative=None if function.derivative is None else -function.derivative,
        second_derivative=None if function.second_derivative is None else -function.second_derivative,
    )


def to_x_frame(
    F_bar: GridFunction,  # noqa: N803
    g_bar: GridFunction,
    alpha: float,
    grid: Grid,
) -> tuple[GridFunction, GridFunction]:
    """Map F̄ and ḡ from ξ = αx to x: F(x) = -F̄(αx) and g(x) = ḡ(αx)."""
    return _negated(rescale(F_bar, alpha, grid)), rescale(g_bar, alpha, grid)


def _superpotential(F: GridFunction, lam: float) -> GridFunction:  # noqa: N803
    return F.with_values(
        lam * F.values,
        derivative=None if F.derivative is None else lam * F.derivative,
    )


def nextgen_partners(F: GridFunction, g: GridFunction, lam: float) -> tuple[GridFunction, GridFunction]:  # noqa: N803
    """Build Ṽ± = W² ± (1/g)(gW)' with W = λF, in x-coordinates.

    Masks of F and g are carried by both potentials.
    """
    ensure_same_grid(F, g)
    check_positive(g)
    superpotential = _superpotential(F, lam)
    transport = weighted_derivative(g, superpotential)
    square = superpotential.values**2
    pole_mask = F.pole_mask | g.pole_mask
    tail_mask = F.tail_mask | g.tail_mask
    return (
        GridFunction(grid=F.grid, values=square + transport, pole_mask=pole_mask, tail_mask=tail_mask),
        GridFunction(grid=F.grid, values=square - transport, pole_mask=pole_mask, tail_mask=tail_mask),
    )


def gennext_si_residual(
    F: GridFunction,  # noqa: N803
    g: GridFunction,
    lam: float,
    mu: float,
    alpha: float | None = None,
    margin: int = DEFAULT_MARGIN,
    pole_window: float | None = None,
    window: Window = None,
) -> tuple[ResidualReport, float]:
    """Check Ṽ₊(x, λ) - Ṽ₋(x, μ) is a constant.

    Args:
        F: the log-derivative in x-coordinates
        g: the weight in x-coordinates
        lam: λ
        mu: μ
        alpha: the step F was built with, checked against μ - λ when given
        margin: grid points skipped at both ends
        pole_window: half width of the windows skipped around poles
        window: restricts the check to an interval

    Returns:
        the deviation of the difference from its mean, and that mean

    Raises:
        RouteMismatchError: when `alpha` does not match μ - λ
    """
    if alpha is not None and not np.isclose(mu - lam, alpha, rtol=1e-12, atol=1e-12):
        raise RouteMismatchError(f"F was built with α={alpha} but μ - λ = {mu - lam}.")
    v_plus, _ = nextgen_partners(F, g, lam)
    _, v_minus = nextgen_partners(F, g, mu)
    keep = trusted_points(v_plus, margin=margin, pole_window=pole_window, window=window)
    return constancy_report(F.grid, v_plus.values - v_minus.values, keep)


def qhj_residual(
    omega_prime: GridFunction,
    g: GridFunction,
    E: float,  # noqa: N803
    v_tilde: GridFunction | None = None,
    margin: int = DEFAULT_MARGIN,
    pole_window: float | None = None,
    window: Window = None,
) -> ResidualReport:
    """Residual of the quantum Hamilton-Jacobi form (Ω')² + (1/g)(gΩ')' - Ṽ + E = 0 of Lψ = Eψ.

    Here L = L1 + Ṽ and Ω' = ψ'/ψ. Ṽ defaults to zero.
    """
    ensure_same_grid(omega_prime, g)
    potential = np.zeros(g.grid.n) if v_tilde is None else v_tilde.values
    residual = omega_prime.values**2 + weighted_derivative(g, omega_prime) - potential + E
    functions = [omega_prime, g] if v_tilde is None else [omega_prime, g, v_tilde]
    keep = trusted_points(*functions, margin=margin, pole_window=pole_window, window=window)
    return summarize(g.grid, residual, keep)
