"""The next generation construction and its stage-n tree."""

from genext.pipeline.chain import (
    build_F,
    build_phi,
    build_psi,
    constraint_residual_F,
    gennext_si_residual,
    nextgen_partners,
    qhj_residual,
    to_x_frame,
    xi_grid,
)
from genext.pipeline.config import Branch, ExtensionConfig
from genext.pipeline.tree import (
    ExtensionNode,
    branch_operator,
    expand_tree,
    extend_stage,
    first_generation,
    inverse_weight,
    l2_partner_potential,
    root_node,
)

__all__ = [
    "Branch",
    "ExtensionConfig",
    "ExtensionNode",
    "branch_operator",
    "build_F",
    "build_phi",
    "build_psi",
    "constraint_residual_F",
    "expand_tree",
    "extend_stage",
    "first_generation",
    "gennext_si_residual",
    "inverse_weight",
    "l2_partner_potential",
    "nextgen_partners",
    "qhj_residual",
    "root_node",
    "to_x_frame",
    "xi_grid",
]
