"""Named parameter sets for the figure and table reproductions.

Two-photon scenarios use angular frequency detuning in rad/ps and delays in
ps.  A pump quoted by its intensity FWHM ``B`` in GHz has Gaussian amplitude
width ``sigma_A = sqrt(2) * 2 pi B / (1000 * 2 sqrt(2 ln 2))`` rad/ps, so
200 GHz gives 0.755 rad/ps and 1 THz gives 3.77 rad/ps.

The phase matching uses group-delay coefficients of opposite sign (ps/mm)
over a 2 mm crystal, which puts the single-photon bandwidth near 13 rad/ps
(about 17 nm at 1550 nm), far broader than either pump.  The
"near-experimental" variant breaks exchange symmetry slightly through a
kappa mismatch and a 2.4 rad/ps signal/idler detuning, which leaves a HOM
visibility of about 0.991 at both pump bandwidths.

SHG sweeps work in units of the pump sigma.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from .jsa import (
    JointSpectralAmplitude,
    PhaseMatchingModel,
    apply_pump_phase,
    build_jsa,
    pump_grid_for,
)
from .spectral import gaussian_profile, make_grid

FWHM_PER_SIGMA = 2 * math.sqrt(2 * math.log(2))


def pump_sigma_from_ghz(fwhm_ghz: float) -> float:
    """Gaussian amplitude sigma (rad/ps) of a pump with intensity FWHM in GHz."""
    return math.sqrt(2) * 2 * math.pi * fwhm_ghz * 1e-3 / FWHM_PER_SIGMA


SWEEP_PRESETS: dict[str, dict[str, Any]] = {
    "fig1b-tilt": {
        "lineshape": "gaussian",
        "width": 1.0,
        "gamma": 1.0,
        "half_span": 8.0,
        # 4097 samples keep mirror-interpolation noise well under the small-eps TVDs
        "grid_count": 4097,
        "perturbation": "linear-tilt",
        "epsilons": [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3],
        "offsets": [0.0],
        "spectra": [[0.1, 0.0], [0.3, 0.0]],
        "pm_bandwidth": None,
    },
    "fig1cf-offset": {
        "lineshape": "gaussian",
        "width": 1.0,
        "gamma": 1.0,
        "half_span": 12.0,
        "grid_count": 2049,
        "perturbation": "offset-gaussian",
        "epsilons": [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3],
        "offsets": [1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        "spectra": [[0.15, 3.0], [0.3, 6.0]],
        "pm_bandwidth": None,
    },
}

_SYMMETRIC_PM = {"kappa_s": 0.05, "kappa_i": -0.05, "length": 2.0,
                 "center_s": 0.0, "center_i": 0.0}
_NEAR_EXPERIMENT_PM = {"kappa_s": 0.05, "kappa_i": -0.0525, "length": 2.0,
                       "center_s": 1.2, "center_i": -1.2}

_JSA_BASE: dict[str, Any] = {
    "construction": "pump",
    "pump_ghz": 200.0,
    "grid_half_span": 40.0,
    "grid_count": 257,
    "phase_seed": None,
    "gamma": 0.0,
    "tau_min": -2.0,
    "tau_max": 2.0,
    "n_delays": 401,
    "n_events": 1,
}

JSA_PRESETS: dict[str, dict[str, Any]] = {
    "fig3-narrow": {**_JSA_BASE, **_NEAR_EXPERIMENT_PM, "pump_ghz": 200.0},
    "fig3-broad": {**_JSA_BASE, **_NEAR_EXPERIMENT_PM, "pump_ghz": 1000.0},
    "symmetric": {**_JSA_BASE, **_SYMMETRIC_PM, "pump_ghz": 200.0},
    "gamma-0.1": {**_JSA_BASE, **_SYMMETRIC_PM, "construction": "gamma-mix", "gamma": 0.1,
                  "grid_half_span": 8.0, "tau_min": -6.0, "tau_max": 6.0},
}

# pump widths for the purity ladder, all at the near-experimental phase matching
PURITY_LADDER_GHZ = (200.0, 400.0, 700.0, 1000.0)


def jsa_grid(params: dict[str, Any]):
    return make_grid(0.0, 2 * float(params["grid_half_span"]), int(params["grid_count"]))


def phase_matching(params: dict[str, Any]) -> PhaseMatchingModel:
    return PhaseMatchingModel(float(params["kappa_s"]), float(params["kappa_i"]),
                              float(params["length"]), float(params["center_s"]),
                              float(params["center_i"]))


def build_scenario_jsa(params: dict[str, Any]) -> JointSpectralAmplitude:
    g = jsa_grid(params)
    if params["construction"] == "gamma-mix":
        return gamma_mix_jsa(g, float(params["gamma"]))
    if params["construction"] != "pump":
        raise ValueError(f"unknown JSA construction {params['construction']!r}")
    pump = gaussian_profile(pump_grid_for(g, g), 0.0, pump_sigma_from_ghz(float(params["pump_ghz"])))
    pm = phase_matching(params)
    if params.get("phase_seed") is not None:
        return apply_pump_phase(pump, pm, g, g, seed=int(params["phase_seed"]))
    return build_jsa(pump, pm, g, g)


def gamma_mix_jsa(grid, gamma: float, sigma: float = 1.0) -> JointSpectralAmplitude:
    """``sqrt(1 - gamma) f_s + sqrt(gamma) f_a`` built from Hermite-Gauss modes.

    ``f_s = G(w1) G(w2)`` and ``f_a = (G(w1) H(w2) - H(w1) G(w2)) / sqrt 2``
    with ``G`` the Gaussian of intensity width ``sigma`` and ``H`` its first
    excited partner.  The parts are orthogonal and the dip minimum stays at
    zero delay for gamma well below 1/2.
    """
    if not 0 <= gamma <= 1:
        raise ValueError("gamma must lie in [0, 1]")
    w = grid.samples
    h = grid.step
    gauss = np.exp(-(w ** 2) / (4 * sigma ** 2))
    gauss /= np.sqrt(np.sum(gauss ** 2) * h)
    odd = w * gauss
    odd /= np.sqrt(np.sum(odd ** 2) * h)
    fs = np.outer(gauss, gauss)
    fa = (np.outer(gauss, odd) - np.outer(odd, gauss)) / np.sqrt(2)
    f = math.sqrt(1 - gamma) * fs + math.sqrt(gamma) * fa
    return JointSpectralAmplitude(grid, grid, f).normalized()
