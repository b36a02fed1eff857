"""Physicality and isospectrality checks of extended potentials."""

from genext.analysis.isospectrality import extension_isospectrality, node_isospectrality
from genext.analysis.matching import (
    MatchMode,
    SpectralMatch,
    brute_force_match,
    isospectral_compare,
    match_levels,
)
from genext.analysis.singularities import Pole, PoleKind, SingularityReport, Verdict, singularity_scan

__all__ = [
    "MatchMode",
    "Pole",
    "PoleKind",
    "SingularityReport",
    "SpectralMatch",
    "Verdict",
    "brute_force_match",
    "extension_isospectrality",
    "isospectral_compare",
    "match_levels",
    "node_isospectrality",
    "singularity_scan",
]
