"""Grow the tree of next generation partners.

The root of the tree is the base family, seen as L1 with weight g = f² and no extra potential.
Every node is extended along two branches:
- **L1**: its operator L1[g] + Ṽ₊ is taken as the new base,
- **L2**: its mirrored operator L2[g] + Ṽ₋ = L1[1/g] + Ṽ₋ is taken as the new base.

The first L1 child of the root is built through the closed-form chain of `genext.pipeline.chain`.
Every other child re-bases the chosen operator on its own ground state w₀ in the Schrödinger
frame: the new weight is ḡ = w₀², the seed is ψ = w_k / w₀ and K = E_k - E₀, so that
F = ψ'/ψ obeys F² + (1/ḡ)(ḡF)' = -K again. Eigenindex 0 gives ψ ≡ 1 exactly.

After n stages there are 2ⁿ nodes carrying 2ⁿ parameters each.
"""

import logging
from dataclasses import dataclass
from functools import partial
from multiprocessing import Pool
from typing import Any, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from genext.catalog import ParameterPoint, clamp_grid, lookup_family, sample_weight
from genext.core.calculus import rescale, weighted_derivative
from genext.core.errors import SolverError
from genext.core.grid import Grid, GridFunction
from genext.pipeline.chain import (
    build_F,
    build_phi,
    build_psi,
    nextgen_partners,
    tail_mask_below,
    to_x_frame,
    xi_grid,
)
from genext.pipeline.config import Branch, ExtensionConfig
from genext.spectral import eigenfunction_logderivative, solve_weighted

logger = logging.getLogger(__name__)

MIN_LOG_WEIGHT = -340.0


@dataclass(slots=True, frozen=True)
class ExtensionNode:
    """One node of the extension tree.

    Attributes:
        stage: depth in the tree, 0 for the base family
        path: branches taken from the root, e.g. 'L1/L2'
        branch: the last branch taken, None for the root
        params: the 2ⁿ parameters of the node
        lam: λ of the ansatz W = λF
        mu: μ = λ + α
        alpha: the step α
        eigenindex: the level that seeded F
        K: the constant of F² + (1/ḡ)(ḡF)' = -K
        psi_bar: the seed eigenfunction ψ in ξ
        F_bar: F = ψ'/ψ in ξ
        g_bar: the weight ḡ in ξ
        psi: ψ(αx) in x
        F: the log-derivative in x, F(x) = -F̄(αx)
        g: the weight in x, g(x) = ḡ(αx)
        v_tilde_plus: Ṽ₊ = W² + (1/g)(gW)' with W = λF
        v_tilde_minus: Ṽ₋ = W² - (1/g)(gW)'
        parent: the node this one extends
    """

    stage: int
    path: str
    branch: Branch | None
    params: ParameterPoint
    lam: float
    mu: float
    alpha: float
    eigenindex: int
    K: float
    psi_bar: GridFunction
    F_bar: GridFunction
    g_bar: GridFunction
    psi: GridFunction
    F: GridFunction
    g: GridFunction
    v_tilde_plus: GridFunction
    v_tilde_minus: GridFunction
    parent: Optional["ExtensionNode"] = None

    @property
    def grid(self) -> Grid:
        """The x-grid of the node."""
        return self.g.grid

    @property
    def has_poles(self) -> bool:
        """Whether F or Ṽ± carry flagged poles."""
        return self.F.has_poles or self.v_tilde_plus.has_poles or self.v_tilde_minus.has_poles

    def pole_positions(self) -> list[float]:
        """Centers of the runs of flagged points of F."""
        x = self.grid.x
        positions: list[float] = []
        mask = self.F.pole_mask
        index = 0
        while index < mask.size:
            if mask[index]:
                stop = index
                while stop + 1 < mask.size and mask[stop + 1]:
                    stop += 1
                positions.append(float(0.5 * (x[index] + x[stop])))
                index = stop
            index += 1
        return positions

    def to_record(self) -> dict[str, Any]:
        """Convert to a plain record, sampled functions excluded."""
        return {
            "stage": self.stage,
            "path": self.path,
            "params": list(self.params.values),
            "lambda": self.lam,
            "mu": self.mu,
            "alpha": self.alpha,
            "eigenindex": self.eigenindex,
            "K": self.K,
            "poles": self.pole_positions(),
        }

    def to_table(self) -> pd.DataFrame:
        """Sampled F, g and Ṽ± in x, with mask flags."""
        return pd.DataFrame(
            {
                "x": self.grid.x,
                "F": self.F.values,
                "g": self.g.values,
                "v_tilde_plus": self.v_tilde_plus.values,
                "v_tilde_minus": self.v_tilde_minus.values,
                "pole": (self.F.pole_mask | self.v_tilde_plus.pole_mask).astype(int),
                "tail": (self.F.tail_mask | self.g.tail_mask).astype(int),
            }
        )


def root_node(config: ExtensionConfig, grid: Grid) -> ExtensionNode:
    """The base family seen as L1 with weight f² and Ṽ± = 0."""
    family = lookup_family(config.family)
    grid = clamp_grid(family, grid)
    params = family.parameters(config.family_params)
    _, g = sample_weight(family, ParameterPoint(values=params), grid)
    zero = GridFunction(grid=grid, values=np.zeros(grid.n), derivative=np.zeros(grid.n))
    one = GridFunction(grid=grid, values=np.ones(grid.n), derivative=np.zeros(grid.n))
    return ExtensionNode(
        stage=0,
        path="",
        branch=None,
        params=ParameterPoint(values=(config.lam,)),
        lam=config.lam,
        mu=config.mu,
        alpha=config.alpha,
        eigenindex=0,
        K=0.0,
        psi_bar=one,
        F_bar=zero,
        g_bar=g,
        psi=one,
        F=zero,
        g=g,
        v_tilde_plus=zero,
        v_tilde_minus=zero,
    )


def first_generation(config: ExtensionConfig, grid: Grid, parent: ExtensionNode | None = None) -> ExtensionNode:
    """Build the stage-1 node of `config.branch`.

    The L1 node goes through build_phi, build_F and nextgen_partners. The L2 node re-bases
    L2[f²] on its ground state like any later stage.

    Args:
        config: the extension to build
        grid: the x-grid, clamped first for half-line families
        parent: the root node to link to, built when missing
    """
    family = lookup_family(config.family)
    grid = clamp_grid(family, grid)
    parent = parent or root_node(config, grid)
    if config.branch is Branch.L2:
        return _rebased_child(parent, Branch.L2, config)
    return _chain_child(config, parent)


def _chain_child(config: ExtensionConfig, parent: ExtensionNode) -> ExtensionNode:
    family = lookup_family(config.family)
    grid = parent.grid
    grid_xi = xi_grid(grid, config.alpha)
    phi, K = build_phi(config, grid_xi)  # noqa: N806
    f, g_bar = sample_weight(family, ParameterPoint(values=family.parameters(config.family_params)), grid_xi)
    F_bar = build_F(phi, f)  # noqa: N806
    psi_bar = build_psi(phi, f)
    return _node(parent, Branch.L1, config, K, psi_bar, F_bar, g_bar)


def _node(
    parent: ExtensionNode,
    branch: Branch,
    config: ExtensionConfig,
    K: float,  # noqa: N803
    psi_bar: GridFunction,
    F_bar: GridFunction,  # noqa: N803
    g_bar: GridFunction,
) -> ExtensionNode:
    grid = parent.grid
    F, g = to_x_frame(F_bar, g_bar, config.alpha, grid)  # noqa: N806
    v_tilde_plus, v_tilde_minus = nextgen_partners(F, g, config.lam)
    return ExtensionNode(
        stage=parent.stage + 1,
        path=f"{parent.path}/{branch.value}" if parent.path else branch.value,
        branch=branch,
        params=parent.params.doubled(config.alpha),
        lam=config.lam,
        mu=config.mu,
        alpha=config.alpha,
        eigenindex=config.eigenindex,
        K=K,
        psi_bar=psi_bar,
        F_bar=F_bar,
        g_bar=g_bar,
        psi=rescale(psi_bar, config.alpha, grid),
        F=F,
        g=g,
        v_tilde_plus=v_tilde_plus,
        v_tilde_minus=v_tilde_minus,
        parent=parent,
    )


def inverse_weight(g: GridFunction) -> GridFunction:
    """The weight 1/g, with its derivative when g has one."""
    derivative = None if g.derivative is None else -g.derivative / g.values**2
    return g.with_values(1 / g.values, derivative=derivative)


def branch_operator(node: ExtensionNode, branch: Branch) -> tuple[GridFunction, GridFunction]:
    """The weight and potential of the operator a branch extends: (g, Ṽ₊) or (1/g, Ṽ₋)."""
    if branch is Branch.L1:
        return node.g, node.v_tilde_plus
    return inverse_weight(node.g), node.v_tilde_minus


def _continue_log(log_values: np.ndarray, trusted: np.ndarray) -> np.ndarray:
    """Interpolate untrusted points linearly, extrapolate both tails with the end slopes."""
    indices = np.arange(log_values.size)
    kept = np.flatnonzero(trusted)
    result = np.interp(indices, kept, log_values[kept])
    first, last = kept[0], kept[-1]
    if kept.size >= 2:
        left_slope = log_values[kept[1]] - log_values[first]
        right_slope = log_values[last] - log_values[kept[-2]]
        result[:first] = log_values[first] - left_slope * (first - indices[:first]) / (kept[1] - first)
        result[last + 1 :] = log_values[last] + right_slope * (indices[last + 1 :] - last) / (last - kept[-2])
    return np.maximum(result, MIN_LOG_WEIGHT)


def _rebased_child(parent: ExtensionNode, branch: Branch, config: ExtensionConfig) -> ExtensionNode:
    """Extend a node along a branch by re-basing the branch operator on its ground state."""
    weight, potential = branch_operator(parent, branch)
    k = config.eigenindex
    spectrum = solve_weighted(weight, potential, k + 1, want_vectors=True, richardson=False)
    ground, excited = spectrum.eigenfunctions[0], spectrum.eigenfunctions[k]  # type: ignore[index]

    half_log_weight = 0.5 * np.log(weight.values)
    ground_frame = ground.values * np.exp(half_log_weight)
    excited_frame = excited.values * np.exp(half_log_weight)
    trusted = ~tail_mask_below(ground_frame, config.tail_floor) & (ground_frame > 0)
    if trusted.sum() < 2:
        raise SolverError(f"Ground state of branch {branch.value} at '{parent.path}' vanishes on the grid.")

    log_ground = np.zeros_like(ground_frame)
    log_ground[trusted] = np.log(ground_frame[trusted])
    log_ground = _continue_log(log_ground, trusted)
    ratio = np.where(trusted, excited_frame / np.where(trusted, ground_frame, 1.0), 0.0)
    indices = np.arange(ratio.size)
    ratio = np.where(trusted, ratio, np.interp(indices, indices[trusted], ratio[trusted]))

    tail_mask = ~trusted
    psi_bar = GridFunction(grid=weight.grid, values=ratio, tail_mask=tail_mask)
    g_bar = GridFunction(grid=weight.grid, values=np.exp(2 * log_ground), tail_mask=tail_mask)
    F_bar = eigenfunction_logderivative(psi_bar)  # noqa: N806
    K = float(spectrum.eigenvalues[k] - spectrum.eigenvalues[0])  # noqa: N806
    logger.debug("Branch %s at '%s': K=%s, %d tail points.", branch.value, parent.path, K, int(tail_mask.sum()))
    return _node(parent, branch, config, K, psi_bar, F_bar, g_bar)


def extend_stage(
    node: ExtensionNode, config: ExtensionConfig
) -> tuple[ExtensionNode | None, ExtensionNode | None]:
    """Extend a node along both branches.

    A branch whose eigenvalue problem fails is logged and returned as None, the other branch
    is still built. Singular children are returned, their poles are flagged.

    Returns:
        the L1 child and the L2 child
    """
    children: list[ExtensionNode | None] = []
    for branch in (Branch.L1, Branch.L2):
        try:
            if node.stage == 0 and branch is Branch.L1:
                children.append(_chain_child(config, node))
            else:
                children.append(_rebased_child(node, branch, config))
        except SolverError as error:
            logger.warning("Branch %s of node '%s' aborted: %s", branch.value, node.path or "root", error)
            children.append(None)
    return children[0], children[1]


def expand_tree(
    config: ExtensionConfig, grid: Grid, stages: int, workers: int = 1, verbose: bool = False
) -> list[list[ExtensionNode]]:
    """Expand the tree breadth-first from the base family.

    Args:
        config: the extension parameters shared by every stage
        grid: the x-grid
        stages: number of stages to build
        workers: processes expanding the nodes of one stage concurrently
        verbose: whether to display a progress bar

    Returns:
        the nodes of every stage, the root alone at stage 0
    """
    if stages < 0:
        raise ValueError(f"Number of stages must be non-negative, got {stages}.")
    levels = [[root_node(config, grid)]]
    expand = partial(extend_stage, config=config)
    for stage in range(1, stages + 1):
        parents = levels[-1]
        description = f"stage {stage}"
        if workers > 1 and len(parents) > 1:
            with Pool(processes=min(workers, len(parents))) as pool:
                pairs = list(
                    tqdm(pool.imap(expand, parents), total=len(parents), desc=description, disable=not verbose)
                )
        else:
            pairs = [expand(parent) for parent in tqdm(parents, desc=description, disable=not verbose)]
        levels.append([child for pair in pairs for child in pair if child is not None])
        logger.debug("Stage %d has %d nodes.", stage, len(levels[-1]))
    return levels


def l2_partner_potential(node: ExtensionNode) -> GridFunction:
    """The potential U making L2[g] + U the partner of L1[g] + Ṽ₊, U = W² - g(W/g)' with W = λF."""
    superpotential = node.F.with_values(
        node.lam * node.F.values,
        derivative=None if node.F.derivative is None else node.lam * node.F.derivative,
    )
    transport = weighted_derivative(inverse_weight(node.g), superpotential)
    return node.v_tilde_plus.with_values(superpotential.values**2 - transport)
