"""Localization diagnostics: position distributions, origin return, decay length."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CoinField, WaveState, apply_step
from .spectral import EigenCandidate

# Diagnostic thresholds and defaults, kept together so sweeps and tests agree.
DEFAULT_INITIAL = (1.0 / math.sqrt(2.0), 1j / math.sqrt(2.0))
LOCALIZED_MIN_TIME_AVERAGE = 0.02
DELOCALIZED_MAX_TIME_AVERAGE = 0.01
_MASS_TOL = 1e-10


@dataclass(frozen=True)
class ProbabilityField:
    """Per-site probability mass over a window; must sum to one."""

    window_min: int
    window_max: int
    mass: np.ndarray

    def __post_init__(self):
        mass = np.asarray(self.mass, dtype=float)
        n = self.window_max - self.window_min + 1
        if mass.shape != (n,):
            raise ValueError(f"mass shape {mass.shape} does not match window of {n} sites")
        total = float(mass.sum())
        if abs(total - 1.0) > _MASS_TOL:
            raise ValueError(f"probability mass sums to {total}, not 1")
        mass = mass.copy()
        mass.flags.writeable = False
        object.__setattr__(self, "mass", mass)

    def at(self, x: int) -> float:
        if not self.window_min <= x <= self.window_max:
            return 0.0
        return float(self.mass[x - self.window_min])


def distribution(state: WaveState) -> ProbabilityField:
    """Position distribution of a normalized state."""
    mass = (np.abs(state.amplitudes) ** 2).sum(axis=1)
    return ProbabilityField(state.window_min, state.window_max, mass)


def origin_probability_series(field: CoinField, initial: WaveState, steps: int) -> np.ndarray:
    """mu_t(0) for t = 1..steps: probability at the origin after each step."""
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    state = initial
    out = np.empty(steps)
    for t in range(steps):
        state = apply_step(state, field)
        amp = state.amplitudes[-state.window_min]
        out[t] = float(np.abs(amp[0]) ** 2 + np.abs(amp[1]) ** 2)
    return out


def time_averaged_origin_probability(field: CoinField, initial: WaveState, steps: int) -> float:
    """Average origin probability over t = 1..steps, the localization witness.

    Stays bounded away from zero iff the initial state overlaps the point
    spectrum; decays to zero for a purely continuous walk.
    """
    return float(origin_probability_series(field, initial, steps).mean())


def default_initial_state() -> WaveState:
    """The reference launch state at the origin, (1, i)/sqrt(2)."""
    return WaveState.point_source(*DEFAULT_INITIAL)


def decay_length(value) -> float:
    """Sites over which an eigenfunction tail drops by 1/e: -1/log(decay).

    Accepts an EigenCandidate (uses its slower, binding side) or a bare decay
    modulus in (0, 1); a modulus at or above 1 has no finite decay length.
    """
    if isinstance(value, EigenCandidate):
        modulus = max(value.decay_left, value.decay_right)
    else:
        modulus = float(value)
    if not 0.0 < modulus < 1.0:
        raise ValueError(f"decay modulus must lie in (0, 1), got {modulus}")
    return -1.0 / math.log(modulus)
