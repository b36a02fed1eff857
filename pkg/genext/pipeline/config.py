"""Define `ExtensionConfig`.

An extension starts from a base family at parameters λ and a step α = μ - λ. The chosen known
solution of the base problem, indexed by `eigenindex`, seeds the next generation superpotential
W = λF through F = ψ'/ψ.
"""

import enum

from pydantic import BaseModel, ConfigDict, Field, field_validator

from genext.catalog import lookup_family


class Branch(str, enum.Enum):
    """Define which weighted operator seeds an extension.

    **L1** extends L1 = -(1/g) d g d with the potential Ṽ₊.
    **L2** extends L2 = -g d (1/g) d, that is L1 with weight 1/g, with the potential Ṽ₋.
    """

    L1 = "L1"
    L2 = "L2"


class ExtensionConfig(BaseModel):
    """Parameters of one extension.

    Attributes:
        family: name of the base family
        family_params: parameters of the base family, catalog defaults when missing
        lam: the ansatz parameter λ of W = λF
        alpha: the step α = μ - λ, ξ = αx
        eigenindex: which known solution seeds F, 0 is inert
        branch: which operator seeds the first generation
        analytic: whether to use closed-form eigenfunctions when the family provides them
        richardson: whether numerical eigenvalues are Richardson extrapolated
        tail_floor: eigenfunctions below this fraction of their maximum are tail-masked
    """

    model_config = ConfigDict(frozen=True)

    family: str
    family_params: tuple[float, ...] | None = None
    lam: float = 1.0
    alpha: float = 1.0
    eigenindex: int = Field(default=1, ge=0)
    branch: Branch = Branch.L1
    analytic: bool = True
    richardson: bool = True
    tail_floor: float = Field(default=1e-10, gt=0, lt=1)

    @field_validator("family")
    @classmethod
    def family_is_registered(cls, family: str) -> str:
        """Look the family up, listing the available ones when it is unknown."""
        lookup_family(family)
        return family

    @field_validator("alpha")
    @classmethod
    def alpha_is_not_zero(cls, alpha: float) -> float:
        """The step must not vanish."""
        if alpha == 0:
            raise ValueError("alpha must be non-zero: α = μ - λ requires μ ≠ λ")
        return alpha

    @property
    def mu(self) -> float:
        """The shifted parameter μ = λ + α."""
        return self.lam + self.alpha
