"""Self-checks behind ``incoherent-pairs validate``.

Every check returns a dict with ``passed`` and the measured numbers; a check
that raises is recorded as failed with the error message.
"""

from __future__ import annotations

from typing import Any, Callable

import numpy as np

from .hom import coincidence_probability, hom_curve
from .jsa import JointSpectralAmplitude, apply_pump_phase, build_jsa, decompose, pump_grid_for
from .scenarios import JSA_PRESETS, gamma_mix_jsa, jsa_grid, phase_matching, pump_sigma_from_ghz
from .shg import incoherent_shg, monte_carlo_incoherent_shg, shape_distance
from .spectral import gaussian_profile, integrate, make_grid

MC_TOLERANCE = 0.05


def _scenario(corrupt: bool):
    p = JSA_PRESETS["fig3-narrow"]
    g = jsa_grid(p)
    pump = gaussian_profile(pump_grid_for(g, g), 0.0, pump_sigma_from_ghz(p["pump_ghz"]))
    pm = phase_matching(p)
    jsa = build_jsa(pump, pm, g, g)
    if corrupt:
        jsa = JointSpectralAmplitude(g, g, jsa.values * 1.01)
    return p, pump, pm, g, jsa


def check_normalization(jsa) -> dict[str, Any]:
    err = abs(jsa.norm - 1.0)
    return {"passed": err < 1e-10, "norm_error": err}


def check_phase_invariance(p, pump, pm, g, jsa, seed: int) -> dict[str, Any]:
    phased = apply_pump_phase(pump, pm, g, g, seed=seed)
    a = hom_curve(jsa, p["tau_min"], p["tau_max"], p["n_delays"]).probabilities
    b = hom_curve(phased, p["tau_min"], p["tau_max"], p["n_delays"]).probabilities
    diff = float(np.max(np.abs(a - b)))
    return {"passed": diff < 1e-12, "max_abs_difference": diff}


def check_p0_equals_gamma(jsa, seed: int) -> dict[str, Any]:
    rng = np.random.default_rng(seed)
    cases = [jsa]
    g = make_grid(0.0, 16.0, 129)
    for gamma in rng.uniform(0.0, 1.0, 4):
        cases.append(gamma_mix_jsa(g, float(gamma)))
    worst = 0.0
    for case in cases:
        worst = max(worst, abs(coincidence_probability(case, 0.0) - decompose(case).gamma))
    return {"passed": worst < 1e-8, "max_abs_error": worst, "cases": len(cases)}


def check_energy_bookkeeping(grid_count: int) -> dict[str, Any]:
    a = gaussian_profile(make_grid(0.0, 16.0, grid_count), 0.0, 1.0)
    out = incoherent_shg(a)
    total = integrate(out.intensity.values, out.grid)
    expected = integrate(np.abs(a.values) ** 2, a.grid) ** 2
    rel = abs(total / expected - 1)
    return {"passed": rel < 1e-8, "relative_error": rel}


def mc_schedule(realizations: int) -> list[int]:
    mid = int(round(np.sqrt(100 * realizations)))
    return sorted({100, mid, realizations})


def check_monte_carlo(seed: int, realizations: int, grid_count: int) -> dict[str, Any]:
    a = gaussian_profile(make_grid(0.0, 16.0, grid_count), 0.0, 1.0)
    reference = incoherent_shg(a).intensity
    schedule = mc_schedule(realizations)
    errors = [shape_distance(monte_carlo_incoherent_shg(a, m, seed), reference) for m in schedule]
    monotone = all(x > y for x, y in zip(errors, errors[1:]))
    return {"passed": bool(monotone and errors[-1] < MC_TOLERANCE),
            "schedule": schedule, "relative_l2": errors, "tolerance": MC_TOLERANCE}


def _guard(fn: Callable[[], dict[str, Any]]) -> dict[str, Any]:
    try:
        return fn()
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        return {"passed": False, "error": str(exc)}


def run_validation(seed: int = 42, realizations: int = 10000, mc_grid_count: int = 1025,
                   corrupt_normalization: bool = False) -> dict[str, Any]:
    """Run every check; ``corrupt_normalization`` scales the test JSA off unit norm."""
    p, pump, pm, g, jsa = _scenario(corrupt_normalization)
    checks = {
        "normalization": _guard(lambda: check_normalization(jsa)),
        "phase_invariance": _guard(lambda: check_phase_invariance(p, pump, pm, g, jsa, seed)),
        "p0_equals_gamma": _guard(lambda: check_p0_equals_gamma(jsa, seed)),
        "energy_bookkeeping": _guard(lambda: check_energy_bookkeeping(mc_grid_count)),
        "monte_carlo_convergence": _guard(
            lambda: check_monte_carlo(seed, realizations, mc_grid_count)),
    }
    return {"seed": seed, "realizations": realizations,
            "passed": all(c["passed"] for c in checks.values()), "checks": checks}
