"""Errors raised across the library.

Poles and boundary leakage are data, not errors: they travel as masks and solver metadata.
Errors are kept for situations where a result cannot be produced at all.
"""


class DomainError(ValueError):
    """A grid does not lie inside the domain of a family."""


class UnknownFamilyError(ValueError):
    """No family is registered under the requested name."""


class GridMismatchError(ValueError):
    """Two grid functions that must share a grid do not."""


class NonPositiveWeightError(ValueError):
    """A weight function that must be strictly positive is not."""


class SolverError(RuntimeError):
    """An eigenvalue or integration problem could not be solved."""


class IntegrationError(SolverError):
    """An initial value integration stopped before reaching the end of the grid.

    Attributes:
        last_x: the last coordinate the integrator reached
    """

    def __init__(self, message: str, last_x: float):
        super().__init__(message)
        self.last_x = last_x


class RouteMismatchError(ValueError):
    """Two constructions that must share sign, constant or scale do not."""


class ConfigError(ValueError):
    """A run configuration is invalid.

    Attributes:
        errors: every problem found, not only the first one
    """

    def __init__(self, errors: list[str]):
        super().__init__("Invalid configuration:\n" + "\n".join(f"  - {error}" for error in errors))
        self.errors = errors
