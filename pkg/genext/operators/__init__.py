"""Partner potentials and the factorized and weighted operators H±, L1 and L2."""

from genext.operators.factorization import (
    FactorizationBundle,
    base_shape_invariance_residual,
    discrete_partner_potentials,
    partner_potentials,
)
from genext.operators.weighted import (
    apply_H_minus,
    apply_H_plus,
    apply_L1,
    apply_L2,
    operator_consistency_residual,
    similarity_residual,
)

__all__ = [
    "FactorizationBundle",
    "apply_H_minus",
    "apply_H_plus",
    "apply_L1",
    "apply_L2",
    "base_shape_invariance_residual",
    "discrete_partner_potentials",
    "operator_consistency_residual",
    "partner_potentials",
    "similarity_residual",
]
