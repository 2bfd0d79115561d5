"""Lattice states, coin fields, and one-step evolution for two-component walks.

The walk lives on the integer line with a two-dimensional internal (chirality)
space per site.  One step applies a site-dependent 2x2 unitary coin and then
shifts the upper component left and the lower component right, so amplitude at
site x after the step is

    L'(x) = a(x+1) L(x+1) + b(x+1) R(x+1)
    R'(x) = c(x-1) L(x-1) + d(x-1) R(x-1)

with (a, b; c, d) the coin entries at the indicated site.  Everything here is
pure: states and fields are immutable values and operations return new ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

UNITARITY_TOL = 1e-12


class WindowOverflowError(ValueError):
    """Amplitude sits on the outermost sites, so one more step would escape."""


@dataclass(frozen=True)
class CoinMatrix:
    """One site's 2x2 unitary coin, stored entrywise as rows (a, b; c, d)."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        m = self.as_array()
        dev = np.abs(m @ m.conj().T - np.eye(2)).max()
        if not dev < UNITARITY_TOL:
            raise ValueError(f"coin is not unitary within {UNITARITY_TOL:g} (deviation {dev:.3e})")

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def __eq__(self, other):
        if not isinstance(other, CoinMatrix):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))


@dataclass(frozen=True)
class CoinField:
    """Assignment of a coin to every site: two bulks, a split, finite overrides.

    Sites x < split_point get bulk_left, sites x >= split_point get bulk_right,
    except where overrides pins an explicit coin.  The two bulks may be equal
    (homogeneous field with local impurities) or differ (two-phase field).
    """

    bulk_left: CoinMatrix
    bulk_right: CoinMatrix
    overrides: Mapping[int, CoinMatrix] = field(default_factory=dict)
    split_point: int = 0

    def __post_init__(self):
        object.__setattr__(self, "overrides", dict(self.overrides))

    def coin_at(self, x: int) -> CoinMatrix:
        ov = self.overrides.get(x)
        if ov is not None:
            return ov
        return self.bulk_left if x < self.split_point else self.bulk_right

    def entry_arrays(self, x_min: int, x_max: int):
        """Coin entries over [x_min, x_max] as four aligned complex arrays."""
        xs = np.arange(x_min, x_max + 1)
        left = xs < self.split_point
        a = np.where(left, self.bulk_left.a, self.bulk_right.a).astype(complex)
        b = np.where(left, self.bulk_left.b, self.bulk_right.b).astype(complex)
        c = np.where(left, self.bulk_left.c, self.bulk_right.c).astype(complex)
        d = np.where(left, self.bulk_left.d, self.bulk_right.d).astype(complex)
        for x, coin in self.overrides.items():
            if x_min <= x <= x_max:
                i = x - x_min
                a[i], b[i], c[i], d[i] = coin.a, coin.b, coin.c, coin.d
        return a, b, c, d

    @property
    def uniform_below(self) -> int:
        """First index such that every site strictly below it carries bulk_left."""
        if self.overrides:
            return min(self.split_point, min(self.overrides))
        return self.split_point

    @property
    def uniform_from(self) -> int:
        """First index from which every site carries bulk_right."""
        if self.overrides:
            return max(self.split_point, max(self.overrides) + 1)
        return self.split_point


@dataclass(frozen=True, eq=False)
class WaveState:
    """Amplitudes over a finite window [window_min, window_max], (L, R) per site.

    The window is a promise that everything outside is exactly zero.  Evolution
    grows it by one site per side each step, so the promise is preserved.
    """

    window_min: int
    window_max: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        n = self.window_max - self.window_min + 1
        if amps.shape != (n, 2):
            raise ValueError(f"amplitude array shape {amps.shape} does not match window of {n} sites")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def point_source(cls, left: complex, right: complex, position: int = 0) -> "WaveState":
        """State concentrated on one site, with a zero guard site on each side."""
        amps = np.zeros((3, 2), dtype=complex)
        amps[1] = (left, right)
        return cls(position - 1, position + 1, amps)

    def component(self, x: int, chirality: int) -> complex:
        if not self.window_min <= x <= self.window_max:
            return 0.0 + 0.0j
        return complex(self.amplitudes[x - self.window_min, chirality])


def state_norm(state: WaveState) -> float:
    """l2 norm of the state's amplitude content."""
    return float(np.linalg.norm(state.amplitudes))


def _stepped_amplitudes(field: CoinField, window_min: int, window_max: int,
                        amps: np.ndarray) -> np.ndarray:
    """One step of the walk on a padded window, no boundary checking.

    Input arrays cover [window_min - 1, window_max + 1] with zeros at both ends;
    the result covers the same grown window.
    """
    a, b, c, d = field.entry_arrays(window_min - 1, window_max + 1)
    up = a * amps[:, 0] + b * amps[:, 1]      # leaves site x leftward as L
    down = c * amps[:, 0] + d * amps[:, 1]    # leaves site x rightward as R
    out = np.zeros_like(amps)
    out[:-1, 0] = up[1:]
    out[1:, 1] = down[:-1]
    return out


def apply_step(state: WaveState, field: CoinField) -> WaveState:
    """Advance the walk one step, growing the window by one site per side.

    Requires zero amplitude on the state's outermost site at each end, which the
    evolution itself maintains; raises WindowOverflowError otherwise rather than
    silently dropping probability.
    """
    amps = state.amplitudes
    if np.abs(amps[0]).max() > 0 or np.abs(amps[-1]).max() > 0:
        raise WindowOverflowError(
            f"nonzero amplitude on boundary sites {state.window_min} or {state.window_max}")
    padded = np.zeros((amps.shape[0] + 2, 2), dtype=complex)
    padded[1:-1] = amps
    out = _stepped_amplitudes(field, state.window_min, state.window_max, padded)
    return WaveState(state.window_min - 1, state.window_max + 1, out)


def truncated_operator(field: CoinField, n: int, boundary: str = "periodic") -> np.ndarray:
    """Dense one-step operator on sites -n..n with periodic wrap.

    Returns a 2(2n+1) x 2(2n+1) complex matrix, exactly unitary up to roundoff.
    Basis ordering is site-major: index 2(x+n) is the L component at site x and
    2(x+n)+1 the R component.  The wrap identifies site n+1 with -n, so the
    operator agrees with apply_step on states supported away from the seam.
    """
    if n < 2:
        raise ValueError(f"truncation radius must be at least 2, got {n}")
    if boundary != "periodic":
        raise ValueError(f"unsupported boundary condition {boundary!r}")
    m = 2 * n + 1
    dim = 2 * m
    u = np.zeros((dim, dim), dtype=complex)

    def idx(x: int, chirality: int) -> int:
        return 2 * ((x + n) % m) + chirality

    for x in range(-n, n + 1):
        coin = field.coin_at(x)
        u[idx(x - 1, 0), idx(x, 0)] += coin.a
        u[idx(x - 1, 0), idx(x, 1)] += coin.b
        u[idx(x + 1, 1), idx(x, 0)] += coin.c
        u[idx(x + 1, 1), idx(x, 1)] += coin.d
    return u
