"""Register and look up superpotential families by name."""

from genext.catalog.families import STANDARD_FAMILIES, SuperpotentialFamily
from genext.core.errors import UnknownFamilyError

_FAMILIES_REGISTRY: dict[str, SuperpotentialFamily] = {}


def register_family(family: SuperpotentialFamily) -> None:
    """Register a family under its name."""
    _FAMILIES_REGISTRY[family.name] = family


def available_families() -> list[str]:
    """Names of the registered families, sorted."""
    return sorted(_FAMILIES_REGISTRY)


def lookup_family(name: str) -> SuperpotentialFamily:
    """Get a registered family."""
    if name not in _FAMILIES_REGISTRY:
        available = "', '".join(available_families())
        raise UnknownFamilyError(f"Unknown family '{name}'. Available families are: '{available}'.")
    return _FAMILIES_REGISTRY[name]


for _family in STANDARD_FAMILIES:
    register_family(_family)
