import numpy as np
import pytest
from pydantic import ValidationError
from pytest_cases import parametrize_with_cases

from genext.catalog import lookup_family
from genext.core import Grid
from genext.core.errors import IntegrationError, RouteMismatchError
from genext.deformation import (
    DeformationProblem,
    Seed,
    Sign,
    chi_residual,
    deformed_superpotential,
    route_equivalence,
    scaled_superpotential,
    solve_chi,
)
from genext.deformation.route import _integrate
from genext.pipeline import ExtensionConfig, first_generation


@pytest.fixture
def oscillator_node(line_grid):
    return first_generation(ExtensionConfig(family="harmonic_oscillator", eigenindex=1), line_grid)


def _problem(oscillator, grid: Grid, sign: Sign = Sign.MINUS, K: float = 2.0) -> DeformationProblem:  # noqa: N803
    return DeformationProblem(
        superpotential=scaled_superpotential(oscillator, None, 1.0, grid),
        K=K,
        sign=sign,
        seed=Seed(x0=1.0, u0=1.0, du0=1.0),
    )


def test_scaled_superpotential(oscillator):
    grid = Grid(a=-2, b=2, n=401)
    scaled = scaled_superpotential(oscillator, None, 2.0, grid)
    assert np.allclose(scaled.values, 4 * grid.x)
    assert np.allclose(scaled.derivative, 4.0)


def test_scaled_superpotential_rejects_mirrored_half_line():
    with pytest.raises(ValueError):
        scaled_superpotential(lookup_family("radial_oscillator"), None, -1.0, Grid(a=0.1, b=5, n=101))


def test_seed_must_not_vanish():
    with pytest.raises(ValidationError, match="must not be"):
        Seed(x0=1.0, u0=0.0, du0=0.0)


def test_seed_must_sit_on_the_grid(oscillator):
    grid = Grid(a=2, b=5, n=101)
    with pytest.raises(ValidationError, match="outside the grid"):
        DeformationProblem(superpotential=scaled_superpotential(oscillator, None, 1.0, grid), K=2.0)


def test_polynomial_solution_of_the_minus_constraint(oscillator, line_grid):
    problem = _problem(oscillator, line_grid)
    chi = solve_chi(problem)
    window = line_grid.within(0.5, 3.0)
    assert np.max(np.abs(chi.values - 1 / line_grid.x)[window]) <= 1e-6
    assert chi.has_poles
    assert np.all(np.abs(line_grid.x[chi.pole_mask]) <= 1.5 * line_grid.h)
    assert chi_residual(chi, problem, window=(0.5, 3.0)).max_abs <= 1e-3


def test_generic_seed_with_plus_sign(oscillator):
    grid = Grid(a=1, b=5, n=8001)
    problem = _problem(oscillator, grid, sign=Sign.PLUS, K=-2.0)
    chi = solve_chi(problem)
    assert not chi.has_poles
    assert np.max(np.abs(chi.values - 1 / grid.x)) <= 1e-6
    assert chi_residual(chi, problem).max_abs <= 1e-5


def test_route_coincides_with_the_construction(oscillator, oscillator_node, line_grid):
    problem = _problem(oscillator, line_grid)
    chi = solve_chi(problem)
    report, scale = route_equivalence(
        chi, oscillator_node.F_bar, 1.0, problem=problem, K=oscillator_node.K, window=(0.5, 3.0)
    )
    assert report.max_abs <= 1e-4
    assert scale == 1.0


def test_wrong_sign_does_not_coincide(oscillator, oscillator_node, line_grid):
    chi = solve_chi(_problem(oscillator, line_grid, sign=Sign.PLUS))
    report, _ = route_equivalence(chi, oscillator_node.F_bar, 1.0, window=(0.5, 3.0))
    assert report.max_abs >= 0.1


class RouteMismatchCases:
    """Generate problems the construction cannot match.

    Each case returns:
    - the sign
    - the constant of the problem
    """

    def case_plus_sign(self):
        return Sign.PLUS, 2.0

    def case_wrong_constant(self):
        return Sign.MINUS, 3.0


@parametrize_with_cases("sign, K", cases=RouteMismatchCases)
def test_route_checks_sign_and_constant(oscillator, oscillator_node, line_grid, sign, K):  # noqa: N803
    problem = _problem(oscillator, line_grid, sign=sign, K=K)
    chi = solve_chi(problem)
    with pytest.raises(RouteMismatchError):
        route_equivalence(chi, oscillator_node.F_bar, 1.0, problem=problem, K=oscillator_node.K)


def test_deformed_superpotential(oscillator, line_grid):
    problem = _problem(oscillator, line_grid)
    chi = solve_chi(problem)
    deformed = deformed_superpotential(problem.superpotential, chi)
    assert np.array_equal(deformed.values, problem.superpotential.values + chi.values)
    assert np.array_equal(deformed.pole_mask, chi.pole_mask)


def test_integration_failure_reports_last_point():
    with pytest.raises(IntegrationError) as error:
        _integrate(lambda x, y: [y[0] ** 2], 0.0, 2.0, [1.0], np.linspace(0.1, 2.0, 20), rtol=1e-8, atol=1e-10)
    assert error.value.last_x <= 1.0


def test_sign_flip_is_a_flip_of_the_superpotential(oscillator):
    grid = Grid(a=-3, b=3, n=1201)
    plus = _problem(oscillator, grid, sign=Sign.PLUS, K=3.0)
    superpotential = plus.superpotential
    flipped = superpotential.with_values(-superpotential.values, derivative=-superpotential.derivative)
    minus = DeformationProblem(superpotential=flipped, K=3.0, sign=Sign.MINUS, seed=plus.seed)
    chi_plus, chi_minus = solve_chi(plus), solve_chi(minus)
    assert np.array_equal(chi_plus.pole_mask, chi_minus.pole_mask)
    regular = ~chi_plus.pole_mask
    assert np.allclose(chi_plus.values[regular], chi_minus.values[regular], rtol=1e-10, atol=1e-10)


def _pole_count(chi) -> int:
    mask = chi.pole_mask
    return int(mask[0]) + int(np.count_nonzero(mask[1:] & ~mask[:-1]))


@pytest.mark.parametrize("sign, K", [(Sign.MINUS, 7.0), (Sign.PLUS, 9.0)])
def test_poles_of_independent_seeds_interlace(oscillator, sign, K):  # noqa: N803
    grid = Grid(a=-3, b=3, n=1201)
    seeds = [Seed(x0=1.0, u0=1.0, du0=1.0), Seed(x0=1.0, u0=1.0, du0=0.0), Seed(x0=0.5, u0=2.0, du0=-3.0)]
    counts = []
    for seed in seeds:
        problem = DeformationProblem(
            superpotential=scaled_superpotential(oscillator, None, 1.0, grid), K=K, sign=sign, seed=seed
        )
        counts.append(_pole_count(solve_chi(problem)))
    assert max(counts) >= 2
    assert max(counts) - min(counts) <= 1
