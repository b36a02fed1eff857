"""Define `RunConfig`, its TOML reader and writer.

A run configuration is flat key-value TOML with one nesting level:

    family = "harmonic_oscillator"
    lambda = 1.0
    alpha = 1.0

    [grid]
    a = -6.0
    b = 6.0
    n = 2001

Every missing key takes its default, `genext defaults` prints them all.
"""

import enum
import json
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from genext.catalog import lookup_family
from genext.core.errors import ConfigError
from genext.deformation import Seed, Sign
from genext.pipeline import Branch


class Command(str, enum.Enum):
    """Define the commands a run can execute."""

    CATALOG = "catalog"
    FACTORIZE = "factorize"
    SPECTRUM = "spectrum"
    EXTEND = "extend"
    DEFORM = "deform"
    VERIFY = "verify"
    SCAN = "scan"


class GridSettings(BaseModel):
    """The x-grid.

    Attributes:
        a: left endpoint, clamped to a small positive value for half-line families
        b: right endpoint
        n: number of points
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: float = -6.0
    b: float = 6.0
    n: int = 2001

    @field_validator("n")
    @classmethod
    def enough_points(cls, n: int) -> int:
        """A grid needs an interior point."""
        if n < 3:
            raise ValueError("grid.n must be ≥ 3")
        return n

    @model_validator(mode="after")
    def ordered(self) -> Self:
        """The right endpoint must exceed the left one."""
        if not self.b > self.a:
            raise ValueError(f"grid.b must exceed grid.a, got a={self.a}, b={self.b}")
        return self


class SolverSettings(BaseModel):
    """Eigenvalue solver settings.

    Attributes:
        k_levels: number of levels to compute
        richardson: whether to extrapolate eigenvalues across h and 2h
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    k_levels: int = Field(default=5, ge=1)
    richardson: bool = True


class Tolerances(BaseModel):
    """Gate tolerances.

    Attributes:
        residual: bound on every pointwise residual
        spectral: bound on eigenvalue gaps
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    residual: float = Field(default=1e-2, gt=0)
    spectral: float = Field(default=1e-3, gt=0)


class WindowSettings(BaseModel):
    """The analysis window where numerical residuals are measured.

    Attributes:
        lo: left end
        hi: right end
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    lo: float = 0.5
    hi: float = 3.0

    @model_validator(mode="after")
    def ordered(self) -> Self:
        """The window must not be empty."""
        if not self.hi > self.lo:
            raise ValueError(f"window.hi must exceed window.lo, got lo={self.lo}, hi={self.hi}")
        return self

    def bounds(self) -> tuple[float, float]:
        """The window as a pair."""
        return self.lo, self.hi


class RunConfig(BaseModel):
    """Everything a run needs.

    Attributes:
        command: what to execute
        family: name of the base family
        family_params: parameters of the base family, catalog defaults when missing
        lam: the ansatz parameter λ, written `lambda` in files
        alpha: the step α = μ - λ
        eigenindex: which known solution seeds the extension
        stages: number of extension stages
        branch: which operator seeds the first generation
        analytic: whether to use closed-form eigenfunctions when available
        grid: the x-grid
        solver: eigenvalue solver settings
        tolerances: gate tolerances
        window: where numerical residuals are measured
        seed: initial data of the deformation route
        sign: sign of the deformation constraint
        margin: grid points skipped at both ends of every residual
        pole_window: half width of the windows skipped around poles, 5h by default
        tail_floor: eigenfunctions below this fraction of their maximum are tail-masked
        workers: processes expanding the extension tree
        output_dir: where reports and tables are written
    """

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    command: Command = Command.VERIFY
    family: str = "harmonic_oscillator"
    family_params: tuple[float, ...] | None = None
    lam: float = Field(default=1.0, alias="lambda")
    alpha: float = 1.0
    eigenindex: int = Field(default=1, ge=0)
    stages: int = Field(default=1, ge=0)
    branch: Branch = Branch.L1
    analytic: bool = True
    grid: GridSettings = Field(default_factory=GridSettings)
    solver: SolverSettings = Field(default_factory=SolverSettings)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    window: WindowSettings = Field(default_factory=WindowSettings)
    seed: Seed = Field(default_factory=Seed)
    sign: Sign = Sign.MINUS
    margin: int = Field(default=2, ge=0)
    pole_window: float | None = Field(default=None, gt=0)
    tail_floor: float = Field(default=1e-10, gt=0, lt=1)
    workers: int = Field(default=1, ge=1)
    output_dir: Path = Path("genext-output")

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


def _location(error: dict[str, Any]) -> str:
    return ".".join(str(part) for part in error["loc"]) or "config"


def parse_config(text: str) -> RunConfig:
    """Parse and validate a TOML run configuration.

    Raises:
        ConfigError: with the syntax error and its line, or with every validation error
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as error:
        raise ConfigError([f"syntax error: {error}"]) from error
    try:
        return RunConfig.model_validate(data)
    except ValidationError as error:
        raise ConfigError([f"{_location(detail)}: {detail['msg']}" for detail in error.errors()]) from error


def load_config(path: Path) -> RunConfig:
    """Read and parse a configuration file."""
    return parse_config(path.read_text(encoding="utf-8"))


def _toml_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int | float):
        return repr(value)
    if isinstance(value, list):
        return "[" + ", ".join(_toml_value(item) for item in value) + "]"
    return json.dumps(str(value), ensure_ascii=False)


def serialize_config(config: RunConfig) -> str:
    """Write a configuration as TOML text that `parse_config` reads back to an equal config."""
    data = config.model_dump(mode="json", by_alias=True, exclude_none=True)
    scalars = {key: value for key, value in data.items() if not isinstance(value, dict)}
    tables = {key: value for key, value in data.items() if isinstance(value, dict)}
    lines = [f"{key} = {_toml_value(value)}" for key, value in scalars.items()]
    for name, table in tables.items():
        lines.append("")
        lines.append(f"[{name}]")
        lines.extend(f"{key} = {_toml_value(value)}" for key, value in table.items())
    return "\n".join(lines) + "\n"


def defaults_text() -> str:
    """Every default, as a configuration file."""
    return serialize_config(RunConfig())
