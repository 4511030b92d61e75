"""Frequency grids, pump lineshapes, perturbation models and spectral asymmetry.

Frequencies default to dimensionless units of the pump width, so a Gaussian
pump has ``sigma = 1`` and is centred at 0.  All integrals use the composite
trapezoid rule on the uniform grid.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.special import voigt_profile as _voigt

DEFAULT_HALF_SPAN = 8.0
DEFAULT_COUNT = 1025


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform, odd-length frequency axis whose middle sample is ``center``."""

    center: float
    span: float
    count: int

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 3 or self.count % 2 == 0:
            raise ValueError(f"grid count must be an odd integer >= 3, got {self.count}")
        if not np.isfinite(self.span) or self.span <= 0:
            raise ValueError(f"grid span must be positive, got {self.span}")
        if not np.isfinite(self.center):
            raise ValueError("grid center must be finite")

    @property
    def step(self) -> float:
        return self.span / (self.count - 1)

    @property
    def half(self) -> int:
        return (self.count - 1) // 2

    @property
    def samples(self) -> np.ndarray:
        # integer offsets keep the centre sample exact
        return self.center + np.arange(-self.half, self.half + 1) * self.step

    def scaled(self, factor: float) -> FrequencyGrid:
        """Grid with the same count whose axis is stretched by ``factor``."""
        return FrequencyGrid(self.center * factor, self.span * factor, self.count)


def make_grid(center: float, span: float, count: int) -> FrequencyGrid:
    return FrequencyGrid(float(center), float(span), int(count))


def default_grid(center: float = 0.0, sigma: float = 1.0,
                 count: int = DEFAULT_COUNT) -> FrequencyGrid:
    """The +-8 sigma grid used when nothing else is requested."""
    return make_grid(center, 2 * DEFAULT_HALF_SPAN * sigma, count)


@dataclass(frozen=True)
class AmplitudeSpectrum:
    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != (self.grid.count,):
            raise ValueError(f"expected {self.grid.count} samples, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("amplitude spectrum contains non-finite values")
        object.__setattr__(self, "values", _frozen(vals))

    @property
    def omega(self) -> np.ndarray:
        return self.grid.samples

    def intensity(self) -> IntensitySpectrum:
        return IntensitySpectrum(self.grid, np.abs(self.values) ** 2)

    def with_phase(self, phase: np.ndarray) -> AmplitudeSpectrum:
        return AmplitudeSpectrum(self.grid, self.values * np.exp(1j * np.asarray(phase)))


@dataclass(frozen=True)
class IntensitySpectrum:
    grid: FrequencyGrid
    values: np.ndarray
    normalized: bool = field(default=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.count,):
            raise ValueError(f"expected {self.grid.count} samples, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("intensity spectrum contains non-finite values")
        if np.any(vals < 0):
            raise ValueError("intensity spectrum contains negative values")
        object.__setattr__(self, "values", _frozen(vals))

    @property
    def omega(self) -> np.ndarray:
        return self.grid.samples


def integrate(values: np.ndarray, grid: FrequencyGrid) -> float:
    return float(np.trapezoid(values, dx=grid.step))


# -- lineshapes ---------------------------------------------------------------

def gaussian_profile(grid: FrequencyGrid, omega0: float, sigma: float) -> AmplitudeSpectrum:
    """Peak-normalised Gaussian amplitude ``exp(-(w - w0)^2 / 2 sigma^2)``."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = (grid.samples - omega0) / sigma
    return AmplitudeSpectrum(grid, np.exp(-0.5 * x * x))


def lorentzian_profile(grid: FrequencyGrid, omega0: float, gamma: float) -> AmplitudeSpectrum:
    """Peak-normalised Lorentzian amplitude ``1 / (1 + ((w - w0)/gamma)^2)``."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    x = (grid.samples - omega0) / gamma
    return AmplitudeSpectrum(grid, 1.0 / (1.0 + x * x))


def voigt_profile(grid: FrequencyGrid, omega0: float, sigma_g: float,
                  gamma_l: float) -> AmplitudeSpectrum:
    """Gaussian-Lorentzian convolution, rescaled to unit peak at ``omega0``.

    The convolution is evaluated through the Faddeeva function, so it stays
    exact in the narrow-width limits where a grid convolution would not.
    """
    if sigma_g <= 0 or gamma_l <= 0:
        raise ValueError("Voigt widths must be positive")
    peak = _voigt(0.0, sigma_g, gamma_l)
    return AmplitudeSpectrum(grid, _voigt(grid.samples - omega0, sigma_g, gamma_l) / peak)


def flat_top_profile(grid: FrequencyGrid, omega0: float, half_width: float) -> AmplitudeSpectrum:
    if half_width <= 0:
        raise ValueError("half_width must be positive")
    inside = np.abs(grid.samples - omega0) <= half_width
    return AmplitudeSpectrum(grid, inside.astype(float))


class PerturbationKind(str, enum.Enum):
    LINEAR_TILT = "linear-tilt"
    OFFSET_GAUSSIAN = "offset-gaussian"


@dataclass(frozen=True)
class PerturbationSpec:
    kind: PerturbationKind
    epsilon: float
    offset_b: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", PerturbationKind(self.kind))
        if not np.isfinite(self.epsilon) or self.epsilon < 0:
            raise ValueError(f"epsilon must be finite and >= 0, got {self.epsilon}")
        if not np.isfinite(self.offset_b):
            raise ValueError("offset_b must be finite")


def apply_perturbation(spec: AmplitudeSpectrum, p: PerturbationSpec, omega0: float,
                       sigma: float) -> AmplitudeSpectrum:
    """Distort a pump amplitude with a linear tilt or an offset Gaussian satellite.

    The tilt multiplies by ``1 + eps * (w - w0)/sigma``.  The satellite is a
    Gaussian of the same ``sigma`` centred at ``w0 + b*sigma`` whose height is
    ``eps`` times the peak of the input.  Negative amplitudes are kept.
    """
    if p.epsilon == 0:
        return AmplitudeSpectrum(spec.grid, spec.values)
    x = (spec.grid.samples - omega0) / sigma
    if p.kind is PerturbationKind.LINEAR_TILT:
        values = spec.values * (1.0 + p.epsilon * x)
    else:
        height = np.max(np.abs(spec.values))
        values = spec.values + p.epsilon * height * np.exp(-0.5 * (x - p.offset_b) ** 2)
    return AmplitudeSpectrum(spec.grid, values)


# -- normalisation and asymmetry ------------------------------------------------

def area_normalize(s: IntensitySpectrum) -> IntensitySpectrum:
    area = integrate(s.values, s.grid)
    if not area > 0:
        raise ValueError("cannot normalise a spectrum with zero integral")
    return IntensitySpectrum(s.grid, s.values / area, normalized=True)


def centroid(s: IntensitySpectrum) -> float:
    norm = area_normalize(s)
    return integrate(norm.omega * norm.values, norm.grid)


def mirror_about(s: IntensitySpectrum, mu: float) -> np.ndarray:
    """Samples of ``S(2 mu - w)`` on the grid of ``s``; zero outside support."""
    w = s.omega
    return np.interp(2.0 * mu - w, w, s.values, left=0.0, right=0.0)


def tvd_asymmetry(s: IntensitySpectrum) -> float:
    """Total variation distance between a spectrum and its mirror image about the centroid."""
    norm = area_normalize(s)
    mu = integrate(norm.omega * norm.values, norm.grid)
    mirrored = mirror_about(norm, mu)
    t = 0.5 * integrate(np.abs(norm.values - mirrored), norm.grid)
    return float(min(max(t, 0.0), 1.0))


def lineshape_coefficients(a: AmplitudeSpectrum,
                           wing_exponent: float | None = None) -> tuple[float, float]:
    """First-order SHG sensitivity coefficients ``(C1, C2)`` of a pump lineshape.

    ``C1 = int A / int A^2`` and ``C2 = int A^3 / int A^4``.  Profiles with
    algebraic wings (Lorentzian, Voigt) are badly truncated by any practical
    grid; passing ``wing_exponent=p`` adds the analytic tail of an
    ``|w - w_peak|^-p`` continuation beyond each grid edge.
    """
    vals = np.asarray(a.values)
    if np.iscomplexobj(vals):
        if np.any(np.abs(vals.imag) > 0):
            raise ValueError("lineshape coefficients need a real amplitude")
        vals = vals.real
    if np.any(vals < 0):
        raise ValueError("lineshape coefficients are defined for nonnegative lineshapes")
    moments = []
    for k in (1, 2, 3, 4):
        m = integrate(vals ** k, a.grid)
        if wing_exponent is not None:
            m += _wing_tail(vals, a.grid, k, wing_exponent)
        moments.append(m)
    if min(moments) <= 0:
        raise ValueError("lineshape integrals must be positive")
    return moments[0] / moments[1], moments[2] / moments[3]


def _wing_tail(vals: np.ndarray, grid: FrequencyGrid, k: int, p: float) -> float:
    if p * k <= 1:
        raise ValueError("wing exponent too small for a convergent tail")
    w = grid.samples
    peak = w[int(np.argmax(vals))]
    tail = 0.0
    for idx in (0, -1):
        dist = abs(w[idx] - peak)
        tail += vals[idx] ** k * dist / (p * k - 1)
    return tail
