"""Define superpotential families.

A family is a translationally shape invariant superpotential W(x; λ) known in closed form.
It carries everything the rest of the library needs analytically:
- the superpotential and its derivative,
- the logarithm of the nodeless weight f = exp(-∫W), so that f' / f = -W,
- the parameter shift rule λ -> μ under which the partners coincide,
- optionally the spectrum of H₊ and, for the oscillators, the polynomial factor P_k of the
  eigenfunctions φ_k = f P_k together with its first two derivatives.
"""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, eval_hermite

Parameters = tuple[float, ...]
ScalarField = Callable[[np.ndarray, Parameters], np.ndarray]
PolynomialFactor = Callable[[np.ndarray, Parameters, int], tuple[np.ndarray, np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class ParameterPoint:
    """An ordered list of parameters.

    A base family is described by one point of its own parameters. The n-th stage of the
    extension tree carries 2ⁿ ansatz parameters.

    Attributes:
        values: the parameters
    """

    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(value) for value in self.values))
        if not self.values:
            raise ValueError("A parameter point needs at least one value.")

    @property
    def stage(self) -> int:
        """The extension stage matching the number of parameters, if it is a power of two."""
        size = len(self.values)
        if size & (size - 1):
            raise ValueError(f"{size} parameters do not match any stage, stages carry 2ⁿ parameters.")
        return size.bit_length() - 1

    def doubled(self, step: float) -> "ParameterPoint":
        """Append the shifted copy of every parameter, doubling their number."""
        return ParameterPoint(values=self.values + tuple(value + step for value in self.values))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SuperpotentialFamily:
    """A shape invariant superpotential family.

    Attributes:
        name: identifier used to look the family up
        domain: open interval of definition, endpoints may be infinite
        parameter_names: names of the family parameters
        defaults: default values of the family parameters
        superpotential: W(x, λ)
        superpotential_derivative: W'(x, λ)
        log_weight: ln f(x, λ) with f = exp(-∫W)
        shift: the translational parameter step λ -> μ
        spectrum: k-th eigenvalue of H₊ = -d² + W² - W', when known
        spectrum_formula: the spectrum as text
        polynomial: P_k, P_k' and P_k'' such that φ_k = f P_k, when known
    """

    name: str
    domain: tuple[float, float]
    parameter_names: tuple[str, ...]
    defaults: Parameters
    superpotential: ScalarField
    superpotential_derivative: ScalarField
    log_weight: ScalarField
    shift: Callable[[Parameters], Parameters]
    spectrum: Callable[[Parameters, int], float] | None = None
    spectrum_formula: str = ""
    polynomial: PolynomialFactor | None = None

    @property
    def is_half_line(self) -> bool:
        """Whether the family lives on (0, ∞) with a singular left endpoint."""
        return self.domain[0] == 0.0

    @property
    def has_closed_form_eigenfunctions(self) -> bool:
        """Whether eigenfunctions are known analytically."""
        return self.polynomial is not None

    def parameters(self, values: Sequence[float] | None = None) -> Parameters:
        """Complete partial parameters with the family defaults."""
        if values is None:
            return self.defaults
        values = tuple(float(value) for value in values)
        if len(values) > len(self.defaults):
            raise ValueError(f"Family '{self.name}' takes {len(self.defaults)} parameters, got {len(values)}.")
        return values + self.defaults[len(values) :]

    def weight(self, x: np.ndarray, params: Parameters) -> np.ndarray:
        """The nodeless weight f(x, λ)."""
        return np.exp(self.log_weight(x, params))


def _hermite_factor(x: np.ndarray, params: Parameters, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    (omega,) = params
    scale = math.sqrt(omega)
    t = scale * x
    value = eval_hermite(k, t)
    first = 2 * k * scale * eval_hermite(k - 1, t) if k >= 1 else np.zeros_like(x)
    second = 4 * k * (k - 1) * omega * eval_hermite(k - 2, t) if k >= 2 else np.zeros_like(x)
    return value, first, second


def _laguerre_factor(x: np.ndarray, params: Parameters, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    omega, ell = params
    order = ell + 0.5
    t = omega * x**2
    value = eval_genlaguerre(k, order, t)
    if k == 0:
        return value, np.zeros_like(x), np.zeros_like(x)
    lowered = eval_genlaguerre(k - 1, order + 1, t)
    first = -2 * omega * x * lowered
    second = -2 * omega * lowered
    if k >= 2:
        second = second + 4 * omega**2 * x**2 * eval_genlaguerre(k - 2, order + 2, t)
    return value, first, second


def _finite_spectrum(depth_index: int) -> Callable[[Parameters, int], float]:
    """Spectrum A² - (A - k)² of the Morse and Pöschl-Teller families, bound while k < A."""

    def spectrum(params: Parameters, k: int) -> float:
        depth = params[depth_index]
        if k >= depth:
            raise ValueError(f"Level {k} is not bound, the family only binds levels k < {depth}.")
        return depth**2 - (depth - k) ** 2

    return spectrum


HARMONIC_OSCILLATOR = SuperpotentialFamily(
    name="harmonic_oscillator",
    domain=(-math.inf, math.inf),
    parameter_names=("omega",),
    defaults=(1.0,),
    superpotential=lambda x, p: p[0] * x,
    superpotential_derivative=lambda x, p: np.full_like(x, p[0], dtype=float),
    log_weight=lambda x, p: -0.5 * p[0] * x**2,
    shift=lambda p: p,
    spectrum=lambda p, k: 2.0 * k * p[0],
    spectrum_formula="E_k = 2 k omega",
    polynomial=_hermite_factor,
)

RADIAL_OSCILLATOR = SuperpotentialFamily(
    name="radial_oscillator",
    domain=(0.0, math.inf),
    parameter_names=("omega", "ell"),
    defaults=(1.0, 0.0),
    superpotential=lambda x, p: p[0] * x - (p[1] + 1) / x,
    superpotential_derivative=lambda x, p: p[0] + (p[1] + 1) / x**2,
    log_weight=lambda x, p: (p[1] + 1) * np.log(x) - 0.5 * p[0] * x**2,
    shift=lambda p: (p[0], p[1] + 1),
    spectrum=lambda p, k: 4.0 * k * p[0],
    spectrum_formula="E_k = 4 k omega",
    polynomial=_laguerre_factor,
)

COULOMB = SuperpotentialFamily(
    name="coulomb",
    domain=(0.0, math.inf),
    parameter_names=("charge", "ell"),
    defaults=(1.0, 0.0),
    superpotential=lambda x, p: p[0] / (2 * (p[1] + 1)) - (p[1] + 1) / x,
    superpotential_derivative=lambda x, p: (p[1] + 1) / x**2,
    log_weight=lambda x, p: (p[1] + 1) * np.log(x) - p[0] * x / (2 * (p[1] + 1)),
    shift=lambda p: (p[0], p[1] + 1),
    spectrum=lambda p, k: p[0] ** 2 / 4 * (1 / (p[1] + 1) ** 2 - 1 / (p[1] + k + 1) ** 2),
    spectrum_formula="E_k = charge^2 / 4 * (1 / (ell + 1)^2 - 1 / (ell + k + 1)^2)",
)

MORSE = SuperpotentialFamily(
    name="morse",
    domain=(-math.inf, math.inf),
    parameter_names=("depth", "coupling"),
    defaults=(4.0, 1.0),
    superpotential=lambda x, p: p[0] - p[1] * np.exp(-x),
    superpotential_derivative=lambda x, p: p[1] * np.exp(-x),
    log_weight=lambda x, p: -p[0] * x - p[1] * np.exp(-x),
    shift=lambda p: (p[0] - 1, p[1]),
    spectrum=_finite_spectrum(depth_index=0),
    spectrum_formula="E_k = depth^2 - (depth - k)^2, k < depth",
)

POSCHL_TELLER = SuperpotentialFamily(
    name="poschl_teller",
    domain=(-math.inf, math.inf),
    parameter_names=("depth",),
    defaults=(3.0,),
    superpotential=lambda x, p: p[0] * np.tanh(x),
    superpotential_derivative=lambda x, p: p[0] / np.cosh(x) ** 2,
    log_weight=lambda x, p: -p[0] * np.log(np.cosh(x)),
    shift=lambda p: (p[0] - 1,),
    spectrum=_finite_spectrum(depth_index=0),
    spectrum_formula="E_k = depth^2 - (depth - k)^2, k < depth",
)

STANDARD_FAMILIES = (HARMONIC_OSCILLATOR, RADIAL_OSCILLATOR, COULOMB, MORSE, POSCHL_TELLER)
