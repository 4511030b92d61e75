"""Hong-Ou-Mandel coincidence curves, visibility and delay Fisher information."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .jsa import JointSpectralAmplitude

BASELINE = 0.5
CLAMP_TOL = 1e-10
NORM_TOL = 1e-8
FISHER_EDGE = 1e-12


class DelayWindowError(ValueError):
    """The sampled dip minimum sits on the edge of the delay window."""


@dataclass(frozen=True)
class HomCurve:
    delays: np.ndarray
    probabilities: np.ndarray
    baseline: float = BASELINE

    def __post_init__(self):
        d = np.array(self.delays, dtype=float)
        p = np.array(self.probabilities, dtype=float)
        if d.shape != p.shape or d.ndim != 1:
            raise ValueError("delays and probabilities must be 1-D and equal length")
        if np.any(np.diff(d) <= 0):
            raise ValueError("delays must be strictly increasing")
        if np.any(p < 0) or np.any(p > 1):
            raise ValueError("coincidence probabilities must lie in [0, 1]")
        d.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "delays", d)
        object.__setattr__(self, "probabilities", p)


@dataclass(frozen=True)
class FisherCurve:
    delays: np.ndarray
    information: np.ndarray
    crb_single: np.ndarray
    degenerate: bool = False


def _check_jsa(jsa: JointSpectralAmplitude) -> None:
    if not jsa.is_square:
        raise ValueError("HOM interference needs identical signal and idler grids")
    if abs(jsa.norm - 1.0) > NORM_TOL:
        raise ValueError(f"JSA normalisation violated: norm = {jsa.norm!r}")


def _probability(f: np.ndarray, w: np.ndarray, cell: float, tau: float) -> float:
    e = np.exp(-1j * w * tau)
    # exp(-i (w1 - w2) tau) as an outer product
    swapped = f.T * np.outer(e, e.conj())
    p = 0.25 * float(np.sum(np.abs(f - swapped) ** 2)) * cell
    if p < -CLAMP_TOL or p > 1 + CLAMP_TOL:
        raise ValueError(f"coincidence probability {p!r} out of range; check normalisation")
    return min(max(p, 0.0), 1.0)


def coincidence_probability(jsa: JointSpectralAmplitude, tau: float) -> float:
    """``P(tau) = 1/4 sum |f(w1, w2) - f(w2, w1) exp(-i (w1 - w2) tau)|^2 dw1 dw2``."""
    _check_jsa(jsa)
    return _probability(jsa.values, jsa.grid_s.samples, jsa.cell, float(tau))


def hom_curve(jsa: JointSpectralAmplitude, tau_min: float, tau_max: float,
              n_points: int) -> HomCurve:
    if n_points < 2:
        raise ValueError("a HOM curve needs at least two delays")
    if not tau_max > tau_min:
        raise ValueError("tau_max must exceed tau_min")
    _check_jsa(jsa)
    taus = np.linspace(tau_min, tau_max, n_points)
    w = jsa.grid_s.samples
    probs = [_probability(jsa.values, w, jsa.cell, t) for t in taus]
    return HomCurve(taus, np.array(probs))


def visibility(curve: HomCurve) -> float:
    """``V = 1 - P_min / baseline`` with the analytic baseline 1/2."""
    p = curve.probabilities
    k = int(np.argmin(p))
    flat = np.ptp(p) < 1e-12
    if not flat and k in (0, len(p) - 1):
        raise DelayWindowError("delay window too narrow: dip minimum at the window edge")
    return float(1.0 - p[k] / curve.baseline)


def dip_fwhm(curve: HomCurve) -> float:
    """Full width of the dip at half depth between the baseline and the minimum."""
    p = curve.probabilities
    t = curve.delays
    k = int(np.argmin(p))
    level = 0.5 * (curve.baseline + p[k])
    left = k
    while left > 0 and p[left] < level:
        left -= 1
    right = k
    while right < len(p) - 1 and p[right] < level:
        right += 1
    if p[left] < level or p[right] < level:
        raise DelayWindowError("delay window too narrow to bracket the dip half depth")
    tl = np.interp(level, [p[left + 1], p[left]], [t[left + 1], t[left]])
    tr = np.interp(level, [p[right - 1], p[right]], [t[right - 1], t[right]])
    return float(tr - tl)


def _quadratic_limit(q: np.ndarray, k: int, dt: float) -> float:
    """``4 a`` for ``q ~ a (tau - tau_k)^2`` near an exact zero of ``q``."""
    if 0 < k < len(q) - 1:
        a = (q[k - 1] + q[k + 1] - 2 * q[k]) / (2 * dt * dt)
    elif k == 0:
        a = (q[1] - q[0]) / (dt * dt)
    else:
        a = (q[-2] - q[-1]) / (dt * dt)
    return 4.0 * max(a, 0.0)


def fisher_information(curve: HomCurve) -> FisherCurve:
    """``I(tau) = (dP/dtau)^2 / (P (1 - P))`` from the sampled curve.

    Derivatives are central differences (one-sided at the ends).  Where P is
    within 1e-12 of 0 or 1 the 0/0 limit is taken from a local quadratic.
    """
    t = curve.delays
    p = curve.probabilities
    if len(t) < 3:
        raise ValueError("Fisher information needs at least three delays")
    steps = np.diff(t)
    dt = steps[0]
    if not np.allclose(steps, dt, rtol=1e-9, atol=0):
        raise ValueError("Fisher information needs a uniform delay step")
    dp = np.gradient(p, dt)
    denom = p * (1 - p)
    info = np.zeros_like(p)
    regular = (p >= FISHER_EDGE) & (p <= 1 - FISHER_EDGE)
    info[regular] = dp[regular] ** 2 / denom[regular]
    for k in np.flatnonzero(~regular):
        q = p if p[k] < FISHER_EDGE else 1 - p
        info[k] = _quadratic_limit(q, k, dt)
    degenerate = bool(np.all(~regular) and np.all(info == 0))
    if degenerate:
        warnings.warn("HOM curve is constant at 0 or 1; Fisher information set to zero",
                      RuntimeWarning, stacklevel=2)
    with np.errstate(divide="ignore"):
        crb = np.where(info > 0, 1.0 / np.where(info > 0, info, 1.0), np.inf)
    return FisherCurve(t.copy(), info, crb, degenerate)


def cramer_rao_bound(fisher: FisherCurve, n_events: int) -> np.ndarray:
    """Per-delay variance bound ``1 / (n I(tau))``; ``inf`` where ``I = 0``."""
    if n_events < 1:
        raise ValueError(f"n_events must be >= 1, got {n_events}")
    info = fisher.information
    out = np.full(info.shape, np.inf)
    pos = info > 0
    out[pos] = 1.0 / (n_events * info[pos])
    return out
