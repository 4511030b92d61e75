"""Two-photon joint spectral amplitudes from a pump envelope and phase matching.

The phase mismatch is expanded to first order about the phase-matched point,
so the phase-matching factor is ``sinc((k_s dw_s + k_i dw_i) L / 2)`` with
``sinc(x) = sin(x)/x``.  The pump enters through ``E_P(w_s + w_i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .spectral import AmplitudeSpectrum, FrequencyGrid, make_grid

NORM_TOL = 1e-10


class NumericalError(RuntimeError):
    pass


@dataclass(frozen=True)
class PhaseMatchingModel:
    kappa_s: float
    kappa_i: float
    length_scale: float
    center_s: float = 0.0
    center_i: float = 0.0

    def __post_init__(self):
        if not self.length_scale > 0:
            raise ValueError(f"length_scale must be positive, got {self.length_scale}")
        for v in (self.kappa_s, self.kappa_i, self.center_s, self.center_i):
            if not np.isfinite(v):
                raise ValueError("phase-matching parameters must be finite")

    def __call__(self, ws: np.ndarray, wi: np.ndarray) -> np.ndarray:
        arg = (self.kappa_s * (ws - self.center_s) + self.kappa_i * (wi - self.center_i))
        arg = arg * self.length_scale / 2
        return np.sinc(arg / np.pi)


@dataclass(frozen=True)
class JointSpectralAmplitude:
    grid_s: FrequencyGrid
    grid_i: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex, copy=True)
        if vals.shape != (self.grid_s.count, self.grid_i.count):
            raise ValueError(f"JSA shape {vals.shape} does not match the grids")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def cell(self) -> float:
        return self.grid_s.step * self.grid_i.step

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.cell)

    @property
    def is_square(self) -> bool:
        return self.grid_s == self.grid_i

    def normalized(self) -> JointSpectralAmplitude:
        n = self.norm
        if not n > 0:
            raise ValueError("JSA has zero norm and cannot be normalised")
        return JointSpectralAmplitude(self.grid_s, self.grid_i, self.values / np.sqrt(n))

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.grid_s.samples, self.grid_i.samples, indexing="ij")

    def with_phase(self, phase: np.ndarray) -> JointSpectralAmplitude:
        return JointSpectralAmplitude(self.grid_s, self.grid_i,
                                      self.values * np.exp(1j * np.asarray(phase)))


def pump_grid_for(grid_s: FrequencyGrid, grid_i: FrequencyGrid) -> FrequencyGrid:
    """Pump grid whose nodes coincide with every ``w_s + w_i`` of the joint grid."""
    if not np.isclose(grid_s.step, grid_i.step, rtol=1e-12):
        raise ValueError("signal and idler grids need equal steps to share a pump grid")
    count = grid_s.count + grid_i.count - 1
    return make_grid(grid_s.center + grid_i.center, (count - 1) * grid_s.step, count)


def sample_pump(pump: AmplitudeSpectrum, freq: np.ndarray) -> np.ndarray:
    """Linear interpolation of the pump at ``freq``, zero outside its support.

    Points within 1e-9 of a node take the node value exactly so commensurate
    grids never blend neighbouring (possibly phase-randomised) samples.
    """
    g = pump.grid
    pos = (np.asarray(freq, dtype=float) - g.samples[0]) / g.step
    nearest = np.rint(pos)
    pos = np.where(np.abs(pos - nearest) < 1e-9, nearest, pos)
    inside = (pos >= 0) & (pos <= g.count - 1)
    lo = np.clip(np.floor(pos).astype(int), 0, g.count - 1)
    hi = np.clip(lo + 1, 0, g.count - 1)
    frac = pos - lo
    vals = np.asarray(pump.values, dtype=complex)
    out = vals[lo] * (1 - frac) + np.where(frac > 0, vals[hi] * frac, 0)
    return np.where(inside, out, 0)


def build_jsa(pump: AmplitudeSpectrum, pm: PhaseMatchingModel, grid_s: FrequencyGrid,
              grid_i: FrequencyGrid,
              intrinsic_phase: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
              ) -> JointSpectralAmplitude:
    """L2-normalised ``E_P(w_s + w_i) * sinc(...)``, optionally times ``exp(i phi(w_s, w_i))``.

    ``intrinsic_phase`` is a hook for exchange-asymmetric phases; by default
    the only phase is whatever the pump carries.
    """
    ws, wi = np.meshgrid(grid_s.samples, grid_i.samples, indexing="ij")
    sums = ws + wi
    lo, hi = pump.grid.samples[0], pump.grid.samples[-1]
    if sums.max() < lo or sums.min() > hi:
        raise ValueError("joint grid sum frequencies lie entirely outside the pump support")
    f = sample_pump(pump, sums) * pm(ws, wi)
    if intrinsic_phase is not None:
        f = f * np.exp(1j * intrinsic_phase(ws, wi))
    jsa = JointSpectralAmplitude(grid_s, grid_i, f)
    if not jsa.norm > 0:
        raise ValueError("JSA vanishes on the joint grid; normalisation impossible")
    return jsa.normalized()


def random_phase(grid: FrequencyGrid, seed: int) -> np.ndarray:
    """Independent uniform phases in [0, 2 pi), one per grid sample."""
    return np.random.default_rng(seed).uniform(0.0, 2 * np.pi, grid.count)


def apply_pump_phase(pump: AmplitudeSpectrum, pm: PhaseMatchingModel, grid_s: FrequencyGrid,
                     grid_i: FrequencyGrid,
                     phase: Callable[[np.ndarray], np.ndarray] | np.ndarray | None = None,
                     seed: int | None = None) -> JointSpectralAmplitude:
    """Build a JSA from a pump carrying ``exp(i phi(w))``.

    ``phase`` is a function of frequency or an array on the pump grid.  With
    no ``phase`` and a ``seed``, each pump sample gets an independent uniform
    random phase.  With neither, the pump is used as is.
    """
    if phase is None and seed is not None:
        phi = random_phase(pump.grid, seed)
    elif phase is None:
        phi = np.zeros(pump.grid.count)
    elif callable(phase):
        phi = np.asarray(phase(pump.grid.samples), dtype=float)
    else:
        phi = np.asarray(phase, dtype=float)
        if phi.shape != (pump.grid.count,):
            raise ValueError("phase array must match the pump grid")
    return build_jsa(pump.with_phase(phi), pm, grid_s, grid_i)


def jsi(jsa: JointSpectralAmplitude) -> np.ndarray:
    """Joint spectral intensity ``|f|^2`` (rows: signal)."""
    return np.abs(jsa.values) ** 2


def marginals(jsa: JointSpectralAmplitude) -> tuple[np.ndarray, np.ndarray]:
    inten = jsi(jsa)
    return inten.sum(axis=1) * jsa.grid_i.step, inten.sum(axis=0) * jsa.grid_s.step


@dataclass(frozen=True)
class JsaDecomposition:
    symmetric_part: np.ndarray
    antisymmetric_part: np.ndarray
    gamma: float
    symmetric_weight: float


def decompose(jsa: JointSpectralAmplitude) -> JsaDecomposition:
    """Split ``f`` into exchange-symmetric and antisymmetric halves."""
    if not jsa.is_square:
        raise ValueError("exchange decomposition needs identical signal and idler grids")
    f = jsa.values
    fs = 0.5 * (f + f.T)
    fa = 0.5 * (f - f.T)
    return JsaDecomposition(
        symmetric_part=fs,
        antisymmetric_part=fa,
        gamma=float(np.sum(np.abs(fa) ** 2) * jsa.cell),
        symmetric_weight=float(np.sum(np.abs(fs) ** 2) * jsa.cell),
    )


def schmidt_coefficients(jsa: JointSpectralAmplitude) -> np.ndarray:
    kernel = jsa.values * np.sqrt(jsa.cell)
    try:
        sv = np.linalg.svd(kernel, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Schmidt decomposition failed: {exc}") from exc
    lam = sv ** 2
    total = lam.sum()
    if not total > 0:
        raise NumericalError("Schmidt decomposition of a zero kernel")
    return lam / total


def schmidt_purity(jsa: JointSpectralAmplitude) -> float:
    lam = schmidt_coefficients(jsa)
    return float(np.sum(lam ** 2))
