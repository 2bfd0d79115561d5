"""Builders for the four coin-field families with known localized states.

Two impurity families on a balanced-coin background (a phase-rotated origin and
a reflective-defect origin) and two phase-split families (with and without an
extra origin defect).  Parameters are radians except the phase fraction phi,
which lives in (0, 1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .core import CoinField, CoinMatrix

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

HADAMARD = CoinMatrix(_INV_SQRT2, _INV_SQRT2, _INV_SQRT2, -_INV_SQRT2)


class ModelKind(str, Enum):
    WOJCIK = "wojcik"
    ONE_DEFECT = "one-defect"
    TWO_PHASE_DEFECT = "two-phase-defect"
    COMPLETE_TWO_PHASE = "complete-two-phase"


def phase_coin(sigma: float) -> CoinMatrix:
    """Balanced coin with off-diagonal phases e^{+-i sigma}."""
    e = cmath.exp(1j * sigma)
    return CoinMatrix(_INV_SQRT2, _INV_SQRT2 * e, _INV_SQRT2 * e.conjugate(), -_INV_SQRT2)


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def build_hadamard() -> CoinField:
    """Homogeneous balanced-coin field, the delocalized baseline."""
    return CoinField(HADAMARD, HADAMARD)


def build_wojcik(phi: float) -> CoinField:
    """Balanced-coin field whose origin coin is rotated by the phase e^{2 i pi phi}.

    phi must lie strictly inside (0, 1); the endpoints reproduce the homogeneous
    field and carry no localized state.
    """
    phi = _check_finite("phi", phi)
    if not 0.0 < phi < 1.0:
        raise ValueError(f"phi must lie in the open interval (0, 1), got {phi}")
    omega = cmath.exp(2j * math.pi * phi)
    origin = CoinMatrix(omega * HADAMARD.a, omega * HADAMARD.b,
                        omega * HADAMARD.c, omega * HADAMARD.d)
    return CoinField(HADAMARD, HADAMARD, {0: origin})


def build_one_defect(xi: float) -> CoinField:
    """Balanced-coin field with a reflective origin coin of mixing angle xi.

    xi in [0, pi/2]; xi = pi/4 reproduces the homogeneous balanced field, xi = 0
    gives the fully reflective diag(1, -1) origin.
    """
    xi = _check_finite("xi", xi)
    if not 0.0 <= xi <= math.pi / 2:
        raise ValueError(f"xi must lie in [0, pi/2], got {xi}")
    co, si = math.cos(xi), math.sin(xi)
    origin = CoinMatrix(co, si, si, -co)
    return CoinField(HADAMARD, HADAMARD, {0: origin})


def build_two_phase_defect(sigma_plus: float, sigma_minus: float) -> CoinField:
    """Phase coins on both half-lines plus a reflective diag(1, -1) origin.

    Sites x >= 1 carry the sigma_plus coin, sites x <= -1 the sigma_minus coin.
    """
    sigma_plus = _check_finite("sigma_plus", sigma_plus)
    sigma_minus = _check_finite("sigma_minus", sigma_minus)
    origin = CoinMatrix(1.0, 0.0, 0.0, -1.0)
    return CoinField(phase_coin(sigma_minus), phase_coin(sigma_plus),
                     {0: origin}, split_point=1)


def build_complete_two_phase(sigma_plus: float, sigma_minus: float) -> CoinField:
    """Pure phase-split field: sigma_plus coin for x >= 0, sigma_minus for x <= -1."""
    sigma_plus = _check_finite("sigma_plus", sigma_plus)
    sigma_minus = _check_finite("sigma_minus", sigma_minus)
    return CoinField(phase_coin(sigma_minus), phase_coin(sigma_plus), split_point=0)


_PARAM_NAMES = {
    ModelKind.WOJCIK: ("phi",),
    ModelKind.ONE_DEFECT: ("xi",),
    ModelKind.TWO_PHASE_DEFECT: ("sigma_plus", "sigma_minus"),
    ModelKind.COMPLETE_TWO_PHASE: ("sigma_plus", "sigma_minus"),
}


@dataclass(frozen=True)
class ModelSpec:
    """A model kind plus its named parameters, the unit the CLI passes around."""

    kind: ModelKind
    params: dict

    def __post_init__(self):
        expected = _PARAM_NAMES[self.kind]
        got = tuple(sorted(self.params))
        if got != tuple(sorted(expected)):
            raise ValueError(f"model {self.kind.value} expects parameters {expected}, got {got}")
        object.__setattr__(self, "params", {k: float(self.params[k]) for k in expected})

    def field(self) -> CoinField:
        p = self.params
        if self.kind is ModelKind.WOJCIK:
            return build_wojcik(p["phi"])
        if self.kind is ModelKind.ONE_DEFECT:
            return build_one_defect(p["xi"])
        if self.kind is ModelKind.TWO_PHASE_DEFECT:
            return build_two_phase_defect(p["sigma_plus"], p["sigma_minus"])
        return build_complete_two_phase(p["sigma_plus"], p["sigma_minus"])

    def serialize(self) -> str:
        """Flat key=value text form, e.g. 'kind=wojcik phi=0.5'."""
        parts = [f"kind={self.kind.value}"]
        parts += [f"{name}={self.params[name]:.17g}" for name in _PARAM_NAMES[self.kind]]
        return " ".join(parts)

    def display_params(self) -> dict:
        """Parameters with angles reduced to [0, 2pi) for reporting only."""
        out = {}
        for name, value in self.params.items():
            if name.startswith("sigma") or name == "xi":
                out[name] = value % (2 * math.pi)
            else:
                out[name] = value
        return out


def parse_model_spec(text: str) -> ModelSpec:
    """Inverse of ModelSpec.serialize."""
    fields = {}
    for token in text.split():
        if "=" not in token:
            raise ValueError(f"malformed model token {token!r}")
        key, value = token.split("=", 1)
        fields[key] = value
    if "kind" not in fields:
        raise ValueError(f"model text {text!r} lacks a kind")
    try:
        kind = ModelKind(fields.pop("kind"))
    except ValueError:
        raise ValueError(f"unknown model kind in {text!r}") from None
    return ModelSpec(kind, {k: float(v) for k, v in fields.items()})
