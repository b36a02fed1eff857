"""Decide whether an extended potential is regular.

A node is singular when something blows up strictly inside its grid: a node of ψ (a pole of F
and of Ṽ±), a vanishing weight or a flagged pole of Ṽ± away from any node of ψ. Endpoint
singularities, such as the 1/x² wall of half-line families, do not count.
"""

import enum
import logging
from dataclasses import dataclass
from typing import Any

import numpy as np
import pandas as pd
from scipy.interpolate import CubicSpline
from scipy.optimize import bisect

from genext.core.grid import GridFunction
from genext.core.residuals import pole_exclusion
from genext.pipeline import ExtensionNode
from genext.spectral import flag_nodes

logger = logging.getLogger(__name__)

REFINEMENT_TOLERANCE = 1e-8
SPLINE_HALF_WIDTH = 4


class PoleKind(str, enum.Enum):
    """Define what causes a pole."""

    NODE_OF_PSI = "node_of_psi"
    WEIGHT_ZERO = "weight_zero"
    POTENTIAL_POLE = "potential_pole"


class Verdict(str, enum.Enum):
    """Define the physicality verdict of a node."""

    REGULAR = "regular"
    SINGULAR = "singular"


@dataclass(slots=True, frozen=True)
class Pole:
    """A located pole.

    Attributes:
        x: the refined coordinate
        kind: what causes it
    """

    x: float
    kind: PoleKind


@dataclass(slots=True, frozen=True)
class SingularityReport:
    """Poles of a node and the resulting verdict.

    Attributes:
        poles: the interior poles, sorted by coordinate
        verdict: regular iff there is no interior pole
    """

    poles: list[Pole]
    verdict: Verdict

    def to_record(self) -> dict[str, Any]:
        """Convert to a plain record."""
        return {"verdict": self.verdict.value, "poles": [{"x": pole.x, "kind": pole.kind.value} for pole in self.poles]}

    def to_table(self) -> pd.DataFrame:
        """One row per pole."""
        return pd.DataFrame({"x": [pole.x for pole in self.poles], "kind": [pole.kind.value for pole in self.poles]})


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Inclusive index ranges of consecutive flagged points."""
    flagged = np.flatnonzero(mask)
    if flagged.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(flagged) > 1)
    starts = np.concatenate(([flagged[0]], flagged[breaks + 1]))
    stops = np.concatenate((flagged[breaks], [flagged[-1]]))
    return list(zip(starts.tolist(), stops.tolist(), strict=True))


def refine_node(psi: GridFunction, start: int, stop: int) -> float:
    """Locate the zero of ψ bracketed by the flagged run [start, stop].

    A cubic spline through the neighbouring points is bisected down to 10⁻⁸ (b - a).
    The run center is returned when ψ does not change sign across the run.
    """
    x = psi.x
    lo = max(start - SPLINE_HALF_WIDTH, 0)
    hi = min(stop + SPLINE_HALF_WIDTH, psi.grid.n - 1)
    spline = CubicSpline(x[lo : hi + 1], psi.values[lo : hi + 1])
    left, right = x[start], x[stop]
    if spline(left) * spline(right) > 0:
        return float(0.5 * (left + right))
    if spline(left) == 0:
        return float(left)
    if spline(right) == 0:
        return float(right)
    return float(bisect(spline, left, right, xtol=REFINEMENT_TOLERANCE * psi.grid.length))


def singularity_scan(node: ExtensionNode, pole_window: float | None = None) -> SingularityReport:
    """Consolidate, locate and classify the interior poles of a node."""
    psi = node.psi
    grid = node.grid
    poles: list[Pole] = []

    nodes = flag_nodes(psi)
    nodes[0] = nodes[-1] = False
    for start, stop in _runs(nodes):
        poles.append(Pole(x=refine_node(psi, start, stop), kind=PoleKind.NODE_OF_PSI))

    weight_zero = node.g.values <= np.finfo(float).tiny
    weight_zero[0] = weight_zero[-1] = False
    for start, stop in _runs(weight_zero):
        poles.append(Pole(x=float(0.5 * (grid.x[start] + grid.x[stop])), kind=PoleKind.WEIGHT_ZERO))

    flagged = node.F.pole_mask | node.v_tilde_plus.pole_mask | node.v_tilde_minus.pole_mask
    unfinite = ~np.isfinite(node.v_tilde_plus.values) | ~np.isfinite(node.v_tilde_minus.values)
    unexplained = (flagged | unfinite) & ~pole_exclusion(grid, nodes, pole_window)
    unexplained[0] = unexplained[-1] = False
    for start, stop in _runs(unexplained):
        poles.append(Pole(x=float(0.5 * (grid.x[start] + grid.x[stop])), kind=PoleKind.POTENTIAL_POLE))

    poles.sort(key=lambda pole: pole.x)
    verdict = Verdict.SINGULAR if poles else Verdict.REGULAR
    logger.debug("Node '%s' is %s with %d poles.", node.path or "root", verdict.value, len(poles))
    return SingularityReport(poles=poles, verdict=verdict)
