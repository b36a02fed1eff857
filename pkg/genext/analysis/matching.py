"""Compare spectra level by level.

Shape invariance holds up to a constant, so two spectra are compared after removing the best
constant shift between them. The matching is greedy in ascending order, which is optimal for
sorted levels.
"""

import enum
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from genext.spectral import SpectrumResult

logger = logging.getLogger(__name__)


class MatchMode(str, enum.Enum):
    """Define how the levels of the first spectrum are used.

    **exact** keeps every level.
    **drop_lowest_a** removes the lowest level of the first spectrum, as SUSY partners do.
    """

    EXACT = "exact"
    DROP_LOWEST_A = "drop_lowest_a"


@dataclass(slots=True, frozen=True)
class SpectralMatch:
    """Result of matching two spectra.

    Attributes:
        pairs: (index in a, index in b, |gap|) sorted by index in a
        unmatched_a: levels of a left without partner
        unmatched_b: levels of b left without partner
        shift: the constant added to a to match b
        mode: how the first spectrum was used
    """

    pairs: list[tuple[int, int, float]]
    unmatched_a: list[int] = field(default_factory=list)
    unmatched_b: list[int] = field(default_factory=list)
    shift: float = 0.0
    mode: MatchMode = MatchMode.EXACT

    @property
    def max_gap(self) -> float:
        """The largest gap of a matched pair, 0 without pairs."""
        return max((gap for _, _, gap in self.pairs), default=0.0)

    def to_record(self) -> dict[str, Any]:
        """Convert to a plain record."""
        return {
            "pairs": [[a, b, gap] for a, b, gap in self.pairs],
            "unmatched_a": self.unmatched_a,
            "unmatched_b": self.unmatched_b,
            "shift": self.shift,
            "mode": self.mode.value,
        }


def _levels(spectrum: SpectrumResult | np.ndarray) -> np.ndarray:
    if isinstance(spectrum, SpectrumResult):
        return np.asarray(spectrum.eigenvalues, dtype=float)
    return np.asarray(spectrum, dtype=float)


def match_levels(
    levels_a: np.ndarray, levels_b: np.ndarray, tol: float, allow_shift: bool = True, offset: int = 0
) -> SpectralMatch:
    """Greedy ascending matching of two sorted level lists.

    The shift is first estimated on index-aligned levels, pairs within `tol` are then formed
    with two pointers, and the shift is finally refit as the mean difference of the pairs.

    Args:
        levels_a: sorted levels
        levels_b: sorted levels
        tol: largest accepted gap
        allow_shift: whether a constant shift is fitted, 0 otherwise
        offset: added to the indices of `levels_a` in the result
    """
    size = min(levels_a.size, levels_b.size)
    shift = float(np.mean(levels_b[:size] - levels_a[:size])) if allow_shift and size else 0.0

    matched: list[tuple[int, int]] = []
    unmatched_a: list[int] = []
    unmatched_b: list[int] = []
    i = j = 0
    while i < levels_a.size and j < levels_b.size:
        gap = levels_b[j] - (levels_a[i] + shift)
        if abs(gap) <= tol:
            matched.append((i, j))
            i += 1
            j += 1
        elif gap < 0:
            unmatched_b.append(j)
            j += 1
        else:
            unmatched_a.append(i + offset)
            i += 1
    unmatched_a.extend(range(i + offset, levels_a.size + offset))
    unmatched_b.extend(range(j, levels_b.size))

    if allow_shift and matched:
        shift = float(np.mean([levels_b[b] - levels_a[a] for a, b in matched]))
    pairs = [(a + offset, b, float(abs(levels_b[b] - levels_a[a] - shift))) for a, b in matched]
    return SpectralMatch(pairs=pairs, unmatched_a=unmatched_a, unmatched_b=unmatched_b, shift=shift)


def isospectral_compare(
    spec_a: SpectrumResult | np.ndarray,
    spec_b: SpectrumResult | np.ndarray,
    mode: MatchMode = MatchMode.EXACT,
    tol: float = 1e-3,
    allow_shift: bool = True,
) -> SpectralMatch:
    """Match two spectra, optionally dropping the lowest level of the first one.

    Levels further apart than `tol` are not an error, they are reported as unmatched.
    """
    levels_a = _levels(spec_a)
    levels_b = _levels(spec_b)
    offset = 0
    if mode is MatchMode.DROP_LOWEST_A:
        levels_a, offset = levels_a[1:], 1
    match = match_levels(levels_a, levels_b, tol=tol, allow_shift=allow_shift, offset=offset)
    logger.debug("Matched %d pairs with shift %s in mode %s.", len(match.pairs), match.shift, mode.value)
    return SpectralMatch(
        pairs=match.pairs,
        unmatched_a=match.unmatched_a,
        unmatched_b=match.unmatched_b,
        shift=match.shift,
        mode=mode,
    )


def brute_force_match(levels_a: np.ndarray, levels_b: np.ndarray, shift: float = 0.0) -> float:
    """Smallest total gap over every assignment of equally many levels.

    Only meant for a handful of levels, the cost grows factorially.
    """
    if levels_a.size != levels_b.size:
        raise ValueError("Brute force matching needs as many levels on both sides.")
    return min(
        float(np.sum(np.abs(levels_b[list(permutation)] - levels_a - shift)))
        for permutation in itertools.permutations(range(levels_b.size))
    )
