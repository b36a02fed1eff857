"""Logarithmic derivatives of eigenfunctions.

F = ψ'/ψ is singular at the nodes of ψ. Nodes are not errors: they are flagged in the pole mask
and the values there are finite placeholders.
"""

import logging

import numpy as np

from genext.core.calculus import first_difference
from genext.core.grid import GridFunction

logger = logging.getLogger(__name__)

NODE_TOLERANCE = 1e-12


def flag_nodes(psi: GridFunction, tolerance: float = NODE_TOLERANCE) -> np.ndarray:
    """Flag interior zeros and sign changes of ψ.

    A pair of neighbours with opposite signs is flagged when one of them exceeds
    `tolerance` times the largest trusted value, so that sign flips of numerical noise are ignored.
    Tail-masked points are never flagged.
    """
    values = psi.values
    trusted = ~psi.tail_mask
    peak = float(np.max(np.abs(values[trusted]))) if trusted.any() else 0.0
    mask = (np.abs(values) <= np.finfo(float).eps * peak) & trusted
    sides = np.sign(values[:-1]) * np.sign(values[1:]) < 0
    sides &= trusted[:-1] & trusted[1:]
    sides &= np.maximum(np.abs(values[:-1]), np.abs(values[1:])) > tolerance * peak
    mask[:-1] |= sides
    mask[1:] |= sides
    mask[0] = mask[-1] = False
    return mask


def eigenfunction_logderivative(psi: GridFunction) -> GridFunction:
    """Compute F = ψ'/ψ, with the nodes of ψ flagged as poles.

    The analytic derivatives of ψ are used when known, so that F' = ψ''/ψ - F² is known too.
    Zeros of ψ at the grid ends are tail-masked.
    """
    values = psi.values
    peak = psi.max_abs()
    floor = np.finfo(float).eps * peak
    zero = np.abs(values) <= floor
    safe = np.where(zero, floor if floor > 0 else np.finfo(float).tiny, values)

    slope = psi.derivative if psi.derivative is not None else first_difference(values, psi.grid.h)
    logderivative = slope / safe
    derivative = None
    if psi.derivative is not None and psi.second_derivative is not None:
        derivative = psi.second_derivative / safe - logderivative**2

    tail_mask = psi.tail_mask.copy()
    tail_mask[0] |= bool(zero[0])
    tail_mask[-1] |= bool(zero[-1])
    pole_mask = flag_nodes(psi) | psi.pole_mask
    if pole_mask.any():
        logger.debug("Log-derivative has %d flagged points.", int(pole_mask.sum()))
    return GridFunction(
        grid=psi.grid,
        values=logderivative,
        pole_mask=pole_mask,
        tail_mask=tail_mask,
        derivative=derivative,
    )
