import numpy as np
import pytest
from pytest_cases import parametrize_with_cases
from scipy.integrate import trapezoid

from genext.analysis import MatchMode, isospectral_compare
from genext.catalog import ParameterPoint, lookup_family, sample_weight
from genext.core import Grid, GridFunction
from genext.core.errors import NonPositiveWeightError, SolverError
from genext.operators import partner_potentials
from genext.spectral import SolverMeta, SpectrumResult, solve_schrodinger, solve_weighted


@pytest.fixture
def wide_grid() -> Grid:
    return Grid(a=-10, b=10, n=4001)


def test_partner_spectra_coincide_after_dropping_the_ground_state(oscillator, wide_grid):
    bundle = partner_potentials(oscillator, None, wide_grid)
    plus = solve_schrodinger(bundle.v_plus, 6, want_vectors=False, richardson=True)
    minus = solve_schrodinger(bundle.v_minus, 5, want_vectors=False, richardson=True)
    assert plus.eigenvalues[0] == pytest.approx(0.0, abs=1e-4)
    assert np.max(np.abs(plus.eigenvalues[1:] - minus.eigenvalues)) < 1e-4


def test_richardson_improves_eigenvalues(wide_grid):
    potential = wide_grid.sample(lambda x: x**2)
    exact = 2 * np.arange(5) + 1.0
    plain = solve_schrodinger(potential, 5, want_vectors=False)
    extrapolated = solve_schrodinger(potential, 5, want_vectors=False, richardson=True)
    assert np.max(np.abs(extrapolated.eigenvalues - exact)) < np.max(np.abs(plain.eigenvalues - exact)) / 10
    assert plain.meta.tolerance == pytest.approx(np.max(np.abs(plain.eigenvalues - exact)), rel=0.1)


def test_eigenfunctions_are_normalized_with_consistent_nodes(wide_grid):
    spectrum = solve_schrodinger(wide_grid.sample(lambda x: x**2), 4)
    assert spectrum.meta.nodes_consistent
    assert not spectrum.meta.leakage
    assert spectrum.meta.method == "dense_fd"
    for eigenfunction in spectrum.eigenfunctions:
        assert trapezoid(eigenfunction.values**2, dx=wide_grid.h) == pytest.approx(1.0)
        significant = np.abs(eigenfunction.values) > 1e-3 * np.max(np.abs(eigenfunction.values))
        assert eigenfunction.values[np.argmax(significant)] > 0


def test_short_grid_leaks():
    spectrum = solve_schrodinger(Grid(a=-1, b=1, n=201).sample(lambda x: x**2), 2)
    assert spectrum.meta.leakage


class CapacityCases:
    """Generate requests the solver must refuse.

    Each case returns:
    - a grid
    - the number of levels
    - whether Richardson extrapolation is asked
    """

    def case_no_level(self):
        return Grid(a=0, b=1, n=11), 0, False

    def case_too_many_levels(self):
        return Grid(a=0, b=1, n=11), 10, False

    def case_even_grid_extrapolation(self):
        return Grid(a=0, b=1, n=10), 2, True

    def case_coarse_grid_too_small(self):
        return Grid(a=0, b=1, n=11), 5, True


@parametrize_with_cases("grid, k, richardson", cases=CapacityCases)
def test_solver_refuses_requests_beyond_grid_capacity(grid, k, richardson):
    with pytest.raises(SolverError):
        solve_schrodinger(grid.sample(np.zeros_like), k, richardson=richardson)


def test_even_grid_has_no_error_estimate():
    spectrum = solve_schrodinger(Grid(a=0, b=1, n=100).sample(np.zeros_like), 2)
    assert spectrum.meta.tolerance is None
    assert spectrum.eigenvalues[0] == pytest.approx(np.pi**2, rel=1e-3)


def test_pole_placeholders_do_not_change_the_spectrum():
    grid = Grid(a=-5, b=5, n=1001)
    pole_mask = np.abs(grid.x) < 1e-9
    spectra = []
    for placeholder in (1e30, 1e5):
        values = np.where(pole_mask, placeholder, grid.x**2)
        potential = GridFunction(grid=grid, values=values, pole_mask=pole_mask)
        spectra.append(solve_schrodinger(potential, 3, want_vectors=False).eigenvalues)
    assert np.array_equal(spectra[0], spectra[1])


def test_weighted_ground_state_of_oscillator_is_flat(oscillator, line_grid):
    _, g = sample_weight(oscillator, None, line_grid)
    spectrum = solve_weighted(g, line_grid.sample(np.zeros_like), 3)
    assert spectrum.meta.operator == "weighted"
    assert spectrum.eigenvalues == pytest.approx([0.0, 2.0, 4.0], abs=1e-4)
    ground = spectrum.eigenfunctions[0].values
    middle = line_grid.within(-3, 3)
    assert np.ptp(ground[middle]) < 1e-3 * np.max(np.abs(ground))
    for eigenfunction in spectrum.eigenfunctions:
        assert trapezoid(g.values * eigenfunction.values**2, dx=line_grid.h) == pytest.approx(1.0)


def test_weighted_potential_shifts_the_spectrum(radial_oscillator):
    grid = Grid(a=0.006, b=6, n=2001)
    _, g = sample_weight(radial_oscillator, None, grid)
    base = solve_weighted(g, grid.sample(np.zeros_like), 4, want_vectors=False)
    shifted = solve_weighted(g, grid.sample(lambda x: np.full_like(x, -4.0)), 4, want_vectors=False)
    assert np.allclose(shifted.eigenvalues, base.eigenvalues - 4, atol=1e-9)
    assert base.eigenvalues == pytest.approx([0.0, 4.0, 8.0, 12.0], abs=5e-2)


def test_weighted_solver_needs_positive_weight():
    grid = Grid(a=-1, b=1, n=11)
    with pytest.raises(NonPositiveWeightError):
        solve_weighted(grid.sample(lambda x: x), grid.sample(np.zeros_like), 1)


def test_spectrum_result_checks_order():
    meta = SolverMeta(
        grid=Grid(a=0, b=1, n=3),
        method="dense_fd",
        operator="schrodinger",
        tolerance=None,
        richardson=False,
        leakage=False,
        nodes_consistent=True,
    )
    with pytest.raises(ValueError, match="ascending"):
        SpectrumResult(eigenvalues=np.array([2.0, 1.0]), eigenfunctions=None, meta=meta)
    result = SpectrumResult(eigenvalues=np.array([1.0, 2.0]), eigenfunctions=None, meta=meta)
    assert len(result) == 2
    assert result.to_table().columns.tolist() == ["index", "eigenvalue"]
    assert result.to_record()["eigenvalues"] == [1.0, 2.0]


def test_family_spectrum_matches_solver():
    family = lookup_family("poschl_teller")
    grid = Grid(a=-12, b=12, n=4001)
    bundle = partner_potentials(family, None, grid)
    spectrum = solve_schrodinger(bundle.v_plus, 3, want_vectors=False, richardson=True)
    expected = [family.spectrum(family.defaults, k) for k in range(3)]
    assert spectrum.eigenvalues == pytest.approx(expected, abs=1e-4)


class PartnerCases:
    """Generate a grid for each family of the catalog on which its partners are resolved.

    Each case returns:
    - a family name
    - its parameters, the defaults when None
    - a grid inside its domain
    - the number of levels of V₋ to compare
    - a bound on the gaps, half-line grids start at a small positive point
    """

    def case_harmonic_oscillator(self):
        return "harmonic_oscillator", None, Grid(a=-8, b=8, n=4001), 4, 1e-3

    def case_radial_oscillator(self):
        return "radial_oscillator", None, Grid(a=1e-4, b=8, n=4001), 4, 1e-2

    def case_coulomb(self):
        return "coulomb", (4.0, 0.0), Grid(a=1e-4, b=60, n=6001), 3, 1e-2

    def case_morse(self):
        return "morse", None, Grid(a=-3, b=25, n=4001), 3, 1e-2

    def case_poschl_teller(self):
        return "poschl_teller", None, Grid(a=-20, b=20, n=4001), 2, 1e-2


@parametrize_with_cases("name, values, grid, k, tol", cases=PartnerCases)
def test_partners_of_every_family_are_isospectral(name, values, grid, k, tol):
    family = lookup_family(name)
    params = family.parameters(values)
    bundle = partner_potentials(family, ParameterPoint(values=params), grid)
    plus = solve_schrodinger(bundle.v_plus, k + 1, want_vectors=False)
    minus = solve_schrodinger(bundle.v_minus, k, want_vectors=False)
    match = isospectral_compare(plus, minus, mode=MatchMode.DROP_LOWEST_A, tol=tol, allow_shift=False)
    assert len(match.pairs) == k
    assert match.max_gap <= tol
    expected = [family.spectrum(params, level + 1) for level in range(k)]
    assert minus.eigenvalues == pytest.approx(expected, abs=tol)
