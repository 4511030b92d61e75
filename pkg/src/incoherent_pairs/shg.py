"""Second-harmonic spectral transfer for phase-locked and phase-random pumps.

A coherent pump doubles by self-convolution of its field amplitude.  When the
spectral phases are independent and random, the cross terms average away and
the doubled intensity is the self-convolution of the pump intensity.  Both
transfers land on the doubled grid: centre ``2 w0``, twice the span, and the
full ``2N - 1`` support of the discrete convolution.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import fft

from .spectral import (
    AmplitudeSpectrum,
    FrequencyGrid,
    IntensitySpectrum,
    PerturbationKind,
    PerturbationSpec,
    apply_perturbation,
    area_normalize,
    gaussian_profile,
    lineshape_coefficients,
    lorentzian_profile,
    make_grid,
    tvd_asymmetry,
    voigt_profile,
)


class Regime(str, enum.Enum):
    COHERENT = "coherent"
    INCOHERENT = "incoherent"


@dataclass(frozen=True)
class ShgResult:
    amplitude: AmplitudeSpectrum
    intensity: IntensitySpectrum
    regime: Regime

    @property
    def grid(self) -> FrequencyGrid:
        return self.amplitude.grid

    def filtered(self, envelope: IntensitySpectrum) -> ShgResult:
        """Weight by a phase-matching envelope sampled on the same grid."""
        if envelope.grid != self.grid:
            raise ValueError("envelope grid differs from the SHG grid")
        amp = AmplitudeSpectrum(self.grid, self.amplitude.values * np.sqrt(envelope.values))
        return ShgResult(amp, IntensitySpectrum(self.grid, self.intensity.values * envelope.values),
                         self.regime)


def doubled_grid(grid: FrequencyGrid) -> FrequencyGrid:
    return make_grid(2 * grid.center, 2 * grid.span, 2 * grid.count - 1)


def coherent_shg(a: AmplitudeSpectrum) -> ShgResult:
    """Field self-convolution ``E(W) = int A(w) A(W - w) dw``."""
    out = doubled_grid(a.grid)
    field = np.convolve(a.values, a.values) * a.grid.step
    amp = AmplitudeSpectrum(out, field)
    return ShgResult(amp, IntensitySpectrum(out, np.abs(field) ** 2), Regime.COHERENT)


def incoherent_shg(a: AmplitudeSpectrum) -> ShgResult:
    """Intensity self-convolution; the output amplitude is its real square root.

    The ensemble-averaged field has no defined phase, so the amplitude is
    reported with zero phase and only the intensity carries physics.
    """
    out = doubled_grid(a.grid)
    inten = np.abs(a.values) ** 2
    conv = np.maximum(np.convolve(inten, inten) * a.grid.step, 0.0)
    return ShgResult(AmplitudeSpectrum(out, np.sqrt(conv)), IntensitySpectrum(out, conv),
                     Regime.INCOHERENT)


def monte_carlo_incoherent_shg(a: AmplitudeSpectrum, realizations: int, seed: int,
                               randomize: bool = True,
                               block: int = 512) -> IntensitySpectrum:
    """Ensemble average of ``|coherent_shg(A exp(i phi_m))|^2`` over random phases.

    Each realization ``m`` draws one uniform phase per grid sample from a
    generator seeded with ``(seed, m)``, so the result does not depend on the
    blocking.  The raw average is about ``2 * step`` times the intensity
    convolution: per-sample phases are delta correlated, which brings one
    factor of the bin width, and ``phi(w) + phi(W - w)`` pairs each sample
    with its mirror partner, which doubles the sum.  Compare shapes with
    :func:`shape_distance`.
    ``randomize=False`` keeps all phases at zero.
    """
    if realizations < 1:
        raise ValueError(f"realizations must be >= 1, got {realizations}")
    n = a.grid.count
    out = doubled_grid(a.grid)
    nfft = fft.next_fast_len(2 * n - 1)
    base = np.asarray(a.values, dtype=complex)
    acc = np.zeros(2 * n - 1)
    for start in range(0, realizations, block):
        stop = min(start + block, realizations)
        fields = np.empty((stop - start, n), dtype=complex)
        for row, m in enumerate(range(start, stop)):
            if randomize:
                phi = np.random.default_rng([seed, m]).uniform(0.0, 2 * np.pi, n)
                fields[row] = base * np.exp(1j * phi)
            else:
                fields[row] = base
        spec = fft.fft(fields, nfft, axis=1)
        conv = fft.ifft(spec * spec, axis=1)[:, : 2 * n - 1] * a.grid.step
        acc += np.sum(np.abs(conv) ** 2, axis=0)
    return IntensitySpectrum(out, acc / realizations)


def shape_distance(s: IntensitySpectrum, reference: IntensitySpectrum) -> float:
    """Relative L2 distance between the area-normalised shapes of two spectra."""
    if s.grid != reference.grid:
        raise ValueError("spectra live on different grids")
    x = area_normalize(s).values
    y = area_normalize(reference).values
    return float(np.linalg.norm(x - y) / np.linalg.norm(y))


def phase_matching_envelope(g: FrequencyGrid, center: float, bandwidth: float) -> IntensitySpectrum:
    """``sinc^2((W - center)/bandwidth)`` with ``sinc(x) = sin(x)/x``."""
    if bandwidth <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    x = (g.samples - center) / bandwidth
    return IntensitySpectrum(g, np.sinc(x / np.pi) ** 2)


def sensitivity_ratios(a0: AmplitudeSpectrum, epsilon: float, h0: float = 1.0,
                       wing_exponent: float | None = None) -> tuple[float, float]:
    """Symmetric-to-first-order ratios ``(R_coh, R_inc)`` at ``W = 2 w0``."""
    c1, c2 = lineshape_coefficients(a0, wing_exponent=wing_exponent)
    return 2 * epsilon * h0 * c1, 2 * epsilon * h0 * c2


# -- asymmetry sweeps -------------------------------------------------------------

@dataclass(frozen=True)
class LineshapeSpec:
    """Base pump lineshape for a sweep.

    ``width`` is the Gaussian sigma (also the Voigt Gaussian width) and sets
    the unit for tilts and satellite offsets; ``gamma`` is the Lorentzian
    half-width.
    """

    kind: str = "gaussian"
    omega0: float = 0.0
    width: float = 1.0
    gamma: float = 1.0
    half_span: float = 8.0
    count: int = 1025

    def grid(self) -> FrequencyGrid:
        return make_grid(self.omega0, 2 * self.half_span * self.width, self.count)

    def build(self) -> AmplitudeSpectrum:
        g = self.grid()
        if self.kind == "gaussian":
            return gaussian_profile(g, self.omega0, self.width)
        if self.kind == "lorentzian":
            return lorentzian_profile(g, self.omega0, self.gamma)
        if self.kind == "voigt":
            return voigt_profile(g, self.omega0, self.width, self.gamma)
        raise ValueError(f"unknown lineshape kind {self.kind!r}")


@dataclass(frozen=True)
class SweepRecord:
    epsilon: float
    offset_b: float
    tvd_pump: float
    tvd_coherent: float
    tvd_incoherent: float

    def __post_init__(self):
        for name in ("tvd_pump", "tvd_coherent", "tvd_incoherent"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} outside [0, 1]: {v}")


@dataclass(frozen=True)
class SweepPoint:
    pump: AmplitudeSpectrum
    coherent: ShgResult
    incoherent: ShgResult


def sweep_point(base: LineshapeSpec, p: PerturbationSpec,
                pm_bandwidth: float | None = None) -> SweepPoint:
    """Perturbed pump and both SHG outputs, optionally weighted by phase matching."""
    pump = apply_perturbation(base.build(), p, base.omega0, base.width)
    coh, inc = coherent_shg(pump), incoherent_shg(pump)
    if pm_bandwidth is not None:
        env = phase_matching_envelope(coh.grid, 2 * base.omega0, pm_bandwidth)
        coh, inc = coh.filtered(env), inc.filtered(env)
    return SweepPoint(pump, coh, inc)


def asymmetry_sweep(base: LineshapeSpec, p_kind: PerturbationKind | str,
                    epsilons: Sequence[float],
                    offsets: Iterable[float] = (0.0,),
                    pm_bandwidth: float | None = None) -> list[SweepRecord]:
    """TVD of pump, coherent SHG and incoherent SHG over a perturbation schedule.

    Linear tilts ignore ``offsets``.  Rows are ordered offset-major.
    """
    epsilons = list(epsilons)
    if not epsilons:
        raise ValueError("epsilon schedule is empty")
    kind = PerturbationKind(p_kind)
    offsets = [0.0] if kind is PerturbationKind.LINEAR_TILT else list(offsets)
    records = []
    for b in offsets:
        for eps in epsilons:
            pt = sweep_point(base, PerturbationSpec(kind, eps, b), pm_bandwidth)
            records.append(SweepRecord(
                epsilon=float(eps),
                offset_b=float(b),
                tvd_pump=tvd_asymmetry(pt.pump.intensity()),
                tvd_coherent=tvd_asymmetry(pt.coherent.intensity),
                tvd_incoherent=tvd_asymmetry(pt.incoherent.intensity),
            ))
    return records
