"""Bound states of Schrödinger and weighted Sturm-Liouville operators.

Both solvers discretize -d² + V with the O(h²) finite-difference matrix on the interior points
of the grid, Dirichlet conditions at both ends, and diagonalize it as a symmetric tridiagonal
matrix. The weighted operator L = -(1/g) d g d + Ṽ is first mapped to -d² + V_eff by the
similarity ψ = w / √g, with V_eff = Ṽ + D₂(√g) / √g.
Pole-masked points of a potential are replaced by a wall of height 10³/h².

When the grid has an odd number of points, the same problem is also solved on the grid made of
every other point. The two spectra give an error estimate and, on request, the one-step
Richardson extrapolation (4 E_h - E_2h) / 3.
"""

import logging
from collections.abc import Callable

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import eigh_tridiagonal

from genext.core.calculus import check_positive
from genext.core.errors import SolverError
from genext.core.grid import Grid, GridFunction, ensure_same_grid
from genext.spectral.results import SolverMeta, SpectrumResult

logger = logging.getLogger(__name__)

LEAKAGE_THRESHOLD = 1e-6
SIGN_THRESHOLD = 1e-3
NODE_THRESHOLD = 1e-6
POLE_WALL = 1e3


def _check_capacity(grid: Grid, k: int, richardson: bool) -> None:
    if k < 1:
        raise SolverError(f"At least one level must be requested, got k={k}.")
    if k > grid.n - 2:
        raise SolverError(f"Cannot compute {k} levels with {grid.n - 2} interior points.")
    if richardson and grid.n % 2 == 0:
        raise SolverError(f"Richardson extrapolation needs an odd number of points, got n={grid.n}.")
    if richardson and k > (grid.n + 1) // 2 - 2:
        raise SolverError(f"Cannot compute {k} levels on the coarse grid of {(grid.n + 1) // 2} points.")


def _lowest(interior_potential: np.ndarray, h: float, k: int, vectors: bool) -> tuple[np.ndarray, np.ndarray | None]:
    diagonal = 2.0 / h**2 + interior_potential
    off_diagonal = np.full(interior_potential.size - 1, -1.0 / h**2)
    if not vectors:
        values = eigh_tridiagonal(diagonal, off_diagonal, eigvals_only=True, select="i", select_range=(0, k - 1))
        return values, None
    values, interior_vectors = eigh_tridiagonal(diagonal, off_diagonal, select="i", select_range=(0, k - 1))
    return values, interior_vectors


def _sign_changes(vector: np.ndarray) -> int:
    significant = vector[np.abs(vector) > NODE_THRESHOLD * np.max(np.abs(vector))]
    signs = np.sign(significant)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _walled(values: np.ndarray, pole_mask: np.ndarray, h: float) -> np.ndarray:
    return np.where(pole_mask, POLE_WALL / h**2, values)


def _solve(
    grid: Grid,
    interior_potential: Callable[[int], np.ndarray],
    k: int,
    richardson: bool,
    to_eigenfunction: Callable[[np.ndarray], np.ndarray] | None,
    operator: str,
) -> SpectrumResult:
    """Diagonalize, extrapolate and post-process.

    Args:
        grid: the fine grid
        interior_potential: the potential on the interior points of the grid keeping every
            `step`-th point
        k: number of levels
        richardson: whether to extrapolate eigenvalues
        to_eigenfunction: maps a normalized Schrödinger-frame vector to the returned
            eigenfunction, eigenfunctions are skipped when missing
        operator: name recorded in the metadata
    """
    _check_capacity(grid, k, richardson)
    logger.debug("Solving %s operator for %d levels on %d interior points.", operator, k, grid.n - 2)
    fine, interior_vectors = _lowest(interior_potential(1), grid.h, k, vectors=True)

    eigenvalues = fine
    tolerance = None
    if grid.n % 2 == 1 and k <= (grid.n + 1) // 2 - 2:
        coarse, _ = _lowest(interior_potential(2), 2 * grid.h, k, vectors=False)
        tolerance = float(np.max(np.abs(fine - coarse)) / 3)
        if richardson:
            eigenvalues = (4 * fine - coarse) / 3
            if np.any(np.diff(eigenvalues) < 0):
                logger.warning("Extrapolation reorders near-degenerate levels, keeping the fine grid eigenvalues.")
                eigenvalues = fine

    vectors = np.zeros((grid.n, k))
    vectors[1:-1] = interior_vectors
    leakage = False
    nodes_consistent = True
    eigenfunctions: list[GridFunction] = []
    for level in range(k):
        vector = vectors[:, level]
        peak = np.max(np.abs(vector))
        if max(abs(vector[1]), abs(vector[-2])) >= LEAKAGE_THRESHOLD * peak:
            leakage = True
            logger.warning(
                "Eigenfunction %d does not decay at the ends of [%s, %s], the grid may be too short.",
                level,
                grid.a,
                grid.b,
            )
        if _sign_changes(vector) != level:
            nodes_consistent = False
            logger.warning("Eigenfunction %d has %d interior sign changes.", level, _sign_changes(vector))
        vector = vector / np.sqrt(trapezoid(vector**2, dx=grid.h))
        first = int(np.argmax(np.abs(vector) > SIGN_THRESHOLD * np.max(np.abs(vector))))
        if vector[first] < 0:
            vector = -vector
        if to_eigenfunction is not None:
            eigenfunctions.append(GridFunction(grid=grid, values=to_eigenfunction(vector)))

    meta = SolverMeta(
        grid=grid,
        method="dense_fd",
        operator=operator,
        tolerance=tolerance,
        richardson=richardson,
        leakage=leakage,
        nodes_consistent=nodes_consistent,
    )
    return SpectrumResult(
        eigenvalues=np.asarray(eigenvalues, dtype=float),
        eigenfunctions=tuple(eigenfunctions) if to_eigenfunction is not None else None,
        meta=meta,
    )


def solve_schrodinger(
    potential: GridFunction, k: int, want_vectors: bool = True, richardson: bool = False
) -> SpectrumResult:
    """Compute the lowest `k` bound states of -d² + V.

    Args:
        potential: V sampled on the grid, endpoint values are not used
        k: number of levels
        want_vectors: whether to return eigenfunctions, normalized as ∫ψ² = 1
        richardson: whether to extrapolate eigenvalues across h and 2h

    Raises:
        SolverError: when `k` exceeds what the grid can resolve
    """
    values = _walled(potential.values, potential.pole_mask, potential.grid.h)
    return _solve(
        grid=potential.grid,
        interior_potential=lambda step: values[::step][1:-1],
        k=k,
        richardson=richardson,
        to_eigenfunction=(lambda vector: vector) if want_vectors else None,
        operator="schrodinger",
    )


def effective_potential(log_weight: np.ndarray, potential: np.ndarray, h: float) -> np.ndarray:
    """Interior values of Ṽ + D₂(√g)/√g, from ln g to stay accurate when g spans many decades."""
    center = log_weight[1:-1]
    curvature = np.exp(0.5 * (log_weight[2:] - center)) + np.exp(0.5 * (log_weight[:-2] - center)) - 2.0
    return potential[1:-1] + curvature / h**2


def solve_weighted(
    g: GridFunction, v_tilde: GridFunction, k: int, want_vectors: bool = True, richardson: bool = False
) -> SpectrumResult:
    """Compute the lowest `k` bound states of L = -(1/g) d/dx g d/dx + Ṽ.

    Returned eigenfunctions are ψ = w / √g, where w are the Schrödinger-frame eigenvectors,
    and satisfy ∫ g ψ² = 1.

    Raises:
        NonPositiveWeightError: when g is not strictly positive
        SolverError: when `k` exceeds what the grid can resolve
    """
    grid = ensure_same_grid(g, v_tilde)
    check_positive(g)
    log_g = np.log(g.values)
    potential = _walled(v_tilde.values, v_tilde.pole_mask, grid.h)

    def interior_potential(step: int) -> np.ndarray:
        return effective_potential(log_g[::step], potential[::step], step * grid.h)

    return _solve(
        grid=grid,
        interior_potential=interior_potential,
        k=k,
        richardson=richardson,
        to_eigenfunction=(lambda vector: vector * np.exp(-0.5 * log_g)) if want_vectors else None,
        operator="weighted",
    )
