"""Closed-form point-spectrum eigenvalues and admissible parameter regions.

Each model family has up to four eigenvalue branches, indexed 1..4, coming in
sign pairs: branch 2 is the negative of branch 1 and branch 4 of branch 3.  For
the two impurity-on-balanced-background families the pairs correspond to the
two symmetry classes of the bound state (the conjugate cases); for the
phase-split families they are the four interface states.  admissible_region
returns, per branch, the parameter set on which the branch is an actual l2
eigenvalue of the infinite-line walk.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .models import ModelKind

SQRT2 = math.sqrt(2.0)
CONTINUOUS_IM_BOUND = 1.0 / SQRT2
_CONTAINS_TOL = 1e-12
_SINGULAR_TOL = 1e-12
_UNIMODULAR_TOL = 1e-8


class SingularDenominatorError(ZeroDivisionError):
    """A closed-form denominator vanished at this parameter."""


class BranchResolutionError(ArithmeticError):
    """No square-root branch produced unimodular eigenvalues."""


@dataclass(frozen=True)
class BranchLabel:
    """One eigenvalue branch of one model kind, indexed 1..4."""

    kind: ModelKind
    index: int

    def __post_init__(self):
        if self.index not in (1, 2, 3, 4):
            raise ValueError(f"branch index must be 1..4, got {self.index}")

    @property
    def pair(self) -> tuple:
        return (1, 2) if self.index in (1, 2) else (3, 4)

    @property
    def conjugate_case(self) -> str:
        """Symmetry-class tag for the impurity models: which sign of i*alpha."""
        if self.kind is ModelKind.WOJCIK:
            return "+ia" if self.index in (1, 2) else "-ia"
        if self.kind is ModelKind.ONE_DEFECT:
            return "-ia" if self.index in (1, 2) else "+ia"
        raise ValueError(f"model {self.kind.value} branches are not labeled by a conjugate case")


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool

    def contains(self, x: float) -> bool:
        if self.lo < x < self.hi:
            return True
        if x == self.lo and self.lo_closed:
            return True
        return x == self.hi and self.hi_closed

    def interior_contains(self, x: float, margin: float = 0.0) -> bool:
        return self.lo + margin < x < self.hi - margin


@dataclass(frozen=True)
class RegionSet:
    """Disjoint sorted intervals with per-endpoint open/closed tags."""

    intervals: tuple

    def __post_init__(self):
        ivs = tuple(self.intervals)
        for prev, cur in zip(ivs, ivs[1:]):
            if not prev.hi <= cur.lo:
                raise ValueError("intervals must be sorted and disjoint")
        object.__setattr__(self, "intervals", ivs)

    def contains(self, x: float) -> bool:
        return any(iv.contains(x) for iv in self.intervals)

    def interior_contains(self, x: float, margin: float = 0.0) -> bool:
        return any(iv.interior_contains(x, margin) for iv in self.intervals)

    def open_endpoints(self) -> list:
        out = []
        for iv in self.intervals:
            if not iv.lo_closed:
                out.append(iv.lo)
            if not iv.hi_closed:
                out.append(iv.hi)
        return sorted(out)

    def interior_points(self, n: int) -> list:
        """n deterministic parameters strictly inside, spread over the intervals.

        Each interval receives a share proportional to its length (at least one),
        placed at centered fractions so no point touches an endpoint.
        """
        if n < 1:
            raise ValueError(f"need at least one point, got {n}")
        lengths = [iv.hi - iv.lo for iv in self.intervals]
        total = sum(lengths)
        counts = [max(1, round(n * ln / total)) for ln in lengths]
        while sum(counts) > n:
            counts[counts.index(max(counts))] -= 1
        while sum(counts) < n:
            counts[counts.index(min(counts))] += 1
        points = []
        for iv, cnt in zip(self.intervals, counts):
            for k in range(cnt):
                points.append(iv.lo + (iv.hi - iv.lo) * (k + 0.5) / cnt)
        return points


def _open(lo: float, hi: float) -> Interval:
    return Interval(lo, hi, False, False)


_PI = math.pi
_REGIONS = {
    (ModelKind.WOJCIK, (1, 2)): RegionSet((_open(0.25, 1.0),)),
    (ModelKind.WOJCIK, (3, 4)): RegionSet((_open(0.0, 0.75),)),
    (ModelKind.ONE_DEFECT, (1, 2)): RegionSet((_open(0.0, _PI / 4),)),
    (ModelKind.ONE_DEFECT, (3, 4)): RegionSet((_open(0.0, _PI / 4),)),
    (ModelKind.TWO_PHASE_DEFECT, (1, 2)): RegionSet((
        Interval(0.0, 5 * _PI / 4, True, False),
        Interval(7 * _PI / 4, 2 * _PI, False, True),
    )),
    (ModelKind.TWO_PHASE_DEFECT, (3, 4)): RegionSet((
        Interval(0.0, _PI / 4, True, False),
        Interval(3 * _PI / 4, 2 * _PI, False, True),
    )),
    (ModelKind.COMPLETE_TWO_PHASE, (1, 2)): RegionSet((
        Interval(_PI / 2, _PI, True, False),
        Interval(3 * _PI / 2, 2 * _PI, False, True),
    )),
    (ModelKind.COMPLETE_TWO_PHASE, (3, 4)): RegionSet((
        Interval(0.0, _PI / 2, True, False),
        Interval(_PI, 3 * _PI / 2, False, True),
    )),
}


def admissible_region(kind: ModelKind, branch: BranchLabel) -> RegionSet:
    """Parameter region on which the branch is a genuine l2 eigenvalue."""
    if branch.kind is not kind:
        raise ValueError(f"branch belongs to {branch.kind.value}, not {kind.value}")
    return _REGIONS[(kind, branch.pair)]


def sweep_phase_pair(kind: ModelKind, sigma: float) -> tuple:
    """(plus-side, minus-side) phases realizing the one-parameter family at sigma.

    The defect-carrying split model uses the antisymmetric pair (sigma, -sigma).
    The pure split model uses (2 sigma, -2 sigma): its four branches complete a
    full turn of the unit circle twice per sweep period, and only at this rate do
    the branch formulas land on the interface eigenvalues over the whole of each
    admissible interval (checked against both numeric methods in the tests).
    """
    if kind is ModelKind.TWO_PHASE_DEFECT:
        return sigma, -sigma
    if kind is ModelKind.COMPLETE_TWO_PHASE:
        return 2.0 * sigma, -2.0 * sigma
    raise ValueError(f"model {kind.value} has no phase pair")


def wojcik_eigenvalues(phi: float, branch: BranchLabel) -> tuple:
    """Sign pair of bound-state eigenvalues for the phase-rotated-origin family."""
    if branch.kind is not ModelKind.WOJCIK:
        raise ValueError(f"branch {branch} does not belong to the wojcik family")
    if not 0.0 < phi < 1.0:
        raise ValueError(f"phi must lie in (0, 1), got {phi}")
    omega = cmath.exp(2j * math.pi * phi)
    denom = 1.0 - 2.0 * omega + 2.0 * omega * omega
    if abs(denom) < _SINGULAR_TOL:
        raise SingularDenominatorError(f"eigenvalue denominator vanishes at phi={phi}")
    sign = -1.0 if branch.index in (1, 2) else 1.0
    lam_sq = omega * ((1.0 - omega) ** 2 + sign * 1j * (1.0 - omega + omega * omega)) / denom
    root = cmath.sqrt(lam_sq)
    return root, -root


def one_defect_eigenvalues(xi: float, branch: BranchLabel) -> tuple:
    """Sign pair of bound-state eigenvalues for the reflective-defect family."""
    if branch.kind is not ModelKind.ONE_DEFECT:
        raise ValueError(f"branch {branch} does not belong to the one-defect family")
    if not 0.0 <= xi <= math.pi / 2:
        raise ValueError(f"xi must lie in [0, pi/2], got {xi}")
    co, si = math.cos(xi), math.sin(xi)
    scale = math.sqrt(3.0 - 2.0 * SQRT2 * si)
    base = complex(co, SQRT2 - si) / scale
    if branch.index in (3, 4):
        base = base.conjugate()
    return base, -base


def two_phase_defect_eigenvalues(sigma: float) -> tuple:
    """All four interface eigenvalues of the defect-carrying split family.

    Returned in branch order (1, 2, 3, 4) with branches 2 and 4 the exact
    negatives of 1 and 3.  sigma is the single sweep parameter; the field
    realizing it is build_two_phase_defect(sigma, -sigma).
    """
    co, si = math.cos(sigma), math.sin(sigma)
    lam1 = complex(co, si + SQRT2) / math.sqrt(3.0 + 2.0 * SQRT2 * si)
    lam3 = -complex(co, si - SQRT2) / math.sqrt(3.0 - 2.0 * SQRT2 * si)
    return lam1, -lam1, lam3, -lam3


@dataclass(frozen=True)
class TwoPhaseAux:
    """Intermediate quantities of the pure-split closed form, for diagnostics.

    sqrt_branch records which square root of q produced unimodular eigenvalues:
    +1 for the principal branch, -1 for its negative.
    """

    p: complex
    q: complex
    r_plus: complex
    r_minus: complex
    sigma_mid: float
    sqrt_branch: int = 1


def _complete_family(sigma_plus: float, sigma_minus: float, root_q: complex) -> tuple:
    ep = cmath.exp(1j * sigma_plus)
    sigma_mid = 0.5 * (sigma_plus + sigma_minus)
    e2p = cmath.exp(-2j * sigma_plus)
    e2m = cmath.exp(-2j * sigma_minus)
    e2mid = cmath.exp(-2j * sigma_mid)
    p = ep * (e2m - e2p - 4.0 * e2mid)
    q = e2m + e2p - 6.0 * e2mid
    r_minus = cmath.exp(-1j * sigma_plus) - cmath.exp(-1j * sigma_minus)
    den1 = 2.0 * (-r_minus - root_q)
    den3 = 2.0 * (-r_minus + root_q)
    if abs(den1) < _SINGULAR_TOL or abs(den3) < _SINGULAR_TOL:
        raise SingularDenominatorError(
            f"eigenvalue denominator vanishes at sigma_plus={sigma_plus}, sigma_minus={sigma_minus}")
    lam1 = cmath.sqrt((p + ep * r_minus * root_q) / den1)
    lam3 = cmath.sqrt((p - ep * r_minus * root_q) / den3)
    return lam1, lam3, p, q, r_minus, sigma_mid


def complete_two_phase_eigenvalues(sigma_plus: float, sigma_minus: float) -> tuple:
    """Four interface eigenvalues of the pure phase-split field, plus diagnostics.

    Returns ((lam1, lam2, lam3, lam4), TwoPhaseAux).  The square root of the
    discriminant-like quantity q is branch-ambiguous; the branch is resolved by
    demanding all four eigenvalues be unimodular, and the choice is recorded in
    the aux record.  Raises BranchResolutionError if neither branch works.
    """
    q_principal = cmath.sqrt(
        cmath.exp(-2j * sigma_minus) + cmath.exp(-2j * sigma_plus)
        - 6.0 * cmath.exp(-1j * (sigma_plus + sigma_minus)))
    last_err = None
    for flip in (1, -1):
        try:
            lam1, lam3, p, q, r_minus, sigma_mid = _complete_family(
                sigma_plus, sigma_minus, flip * q_principal)
        except SingularDenominatorError as err:
            last_err = err
            continue
        if abs(abs(lam1) - 1.0) < _UNIMODULAR_TOL and abs(abs(lam3) - 1.0) < _UNIMODULAR_TOL:
            r_plus = cmath.exp(-1j * sigma_plus) + cmath.exp(-1j * sigma_minus)
            aux = TwoPhaseAux(p, q, r_plus, r_minus, sigma_mid, sqrt_branch=flip)
            return (lam1, -lam1, lam3, -lam3), aux
    if last_err is not None:
        raise last_err
    raise BranchResolutionError(
        f"no square-root branch is unimodular at sigma_plus={sigma_plus}, sigma_minus={sigma_minus}")


def sweep_eigenvalue(kind: ModelKind, index: int, param: float) -> complex:
    """Branch eigenvalue as a function of the model's single sweep parameter."""
    branch = BranchLabel(kind, index)
    if kind is ModelKind.WOJCIK:
        pair = wojcik_eigenvalues(param, branch)
    elif kind is ModelKind.ONE_DEFECT:
        pair = one_defect_eigenvalues(param, branch)
    elif kind is ModelKind.TWO_PHASE_DEFECT:
        return two_phase_defect_eigenvalues(param)[index - 1]
    else:
        values, _ = complete_two_phase_eigenvalues(*sweep_phase_pair(kind, param))
        return values[index - 1]
    return pair[index - branch.pair[0]]


def continuous_spectrum_contains(lam: complex) -> bool:
    """Whether a unimodular value lies on the walk's continuous band.

    The band of the balanced bulk is the arc set {|Im lam| <= 1/sqrt(2)}, with a
    1e-12 tolerance so exact band-edge values count as inside.
    """
    return abs(lam.imag) <= CONTINUOUS_IM_BOUND + _CONTAINS_TOL
