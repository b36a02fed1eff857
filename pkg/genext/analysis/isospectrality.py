"""Check the extended pair of a node is isospectral.

L1[g] + Ṽ₊ and its partner L2[g] + U, U = W² - g(W/g)', are intertwined by W, so their spectra
should agree up to one level and a constant. The extended operator is also compared with the base
family it comes from. Both checks are observations recorded per node.
"""

import logging

import numpy as np

from genext.analysis.matching import MatchMode, SpectralMatch, isospectral_compare
from genext.pipeline import ExtensionNode, inverse_weight, l2_partner_potential
from genext.spectral import solve_weighted

logger = logging.getLogger(__name__)


def node_isospectrality(node: ExtensionNode, k_levels: int = 4, tol: float = 1e-3) -> SpectralMatch:
    """Match the spectra of L1[g] + Ṽ₊ and L2[g] + U of a node.

    Both the exact matching and the one dropping the lowest level of L1[g] + Ṽ₊ are tried,
    the one with more pairs is kept.
    """
    extended = solve_weighted(node.g, node.v_tilde_plus, k_levels + 1, want_vectors=False)
    partner = solve_weighted(inverse_weight(node.g), l2_partner_potential(node), k_levels + 1, want_vectors=False)
    exact = isospectral_compare(extended, partner, mode=MatchMode.EXACT, tol=tol)
    dropped = isospectral_compare(extended, partner, mode=MatchMode.DROP_LOWEST_A, tol=tol)
    best = dropped if len(dropped.pairs) > len(exact.pairs) else exact
    if len(best.pairs) < k_levels:
        logger.warning("Node '%s' matches only %d of %d levels.", node.path or "root", len(best.pairs), k_levels)
    return best


def extension_isospectrality(node: ExtensionNode, k_levels: int = 4, tol: float = 1e-3) -> SpectralMatch:
    """Match the spectrum of L1[g] + Ṽ₊ of a node with the one of the base family it extends.

    The base operator is L1 with the weight of the root of the tree and no potential. A rational
    extension is expected to reproduce the base spectrum up to one level and a constant shift,
    which fails when the seed eigenfunction has a node inside the domain.
    """
    base = node
    while base.parent is not None:
        base = base.parent
    zero = base.g.with_values(np.zeros(base.grid.n))
    reference = solve_weighted(base.g, zero, k_levels + 1, want_vectors=False)
    extended = solve_weighted(node.g, node.v_tilde_plus, k_levels + 1, want_vectors=False)
    exact = isospectral_compare(reference, extended, mode=MatchMode.EXACT, tol=tol)
    dropped = isospectral_compare(reference, extended, mode=MatchMode.DROP_LOWEST_A, tol=tol)
    best = dropped if len(dropped.pairs) > len(exact.pairs) else exact
    if len(best.pairs) < k_levels:
        logger.warning(
            "Node '%s' reproduces only %d of %d levels of its base family.",
            node.path or "root",
            len(best.pairs),
            k_levels,
        )
    return best
