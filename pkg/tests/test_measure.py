"""Position distributions, origin-return averages, and decay-length diagnostics."""

import math

import numpy as np
import pytest
from scipy import stats

from qwspectra import (BranchLabel, ModelKind, ProbabilityField, WaveState,
                       apply_step, build_hadamard, build_one_defect,
                       build_two_phase_defect, build_wojcik, decay_length,
                       default_initial_state, distribution, half_line_solution,
                       origin_probability_series, point_spectrum_search,
                       time_averaged_origin_probability, wojcik_eigenvalues)
from qwspectra.measure import (DEFAULT_INITIAL, DELOCALIZED_MAX_TIME_AVERAGE,
                               LOCALIZED_MIN_TIME_AVERAGE)


def test_distribution_point_source():
    d = distribution(WaveState.point_source(1.0, 0.0))
    assert d.at(0) == pytest.approx(1.0)
    assert d.at(1) == 0.0 and d.at(-1) == 0.0
    assert d.at(10**6) == 0.0


def test_distribution_one_step_hadamard():
    state = apply_step(WaveState.point_source(1.0, 0.0), build_hadamard())
    d = distribution(state)
    assert d.at(-1) == pytest.approx(0.5)
    assert d.at(1) == pytest.approx(0.5)
    assert d.at(0) == pytest.approx(0.0)


def test_probability_field_validation():
    with pytest.raises(ValueError):
        ProbabilityField(0, 1, np.array([0.5, 0.6]))
    with pytest.raises(ValueError):
        ProbabilityField(0, 1, np.array([1.0]))
    field = ProbabilityField(-1, 1, np.array([0.25, 0.5, 0.25]))
    assert field.at(-1) == 0.25
    with pytest.raises(ValueError):
        field.mass[0] = 1.0


def test_mass_conserved_under_evolution():
    for make in (build_hadamard, lambda: build_wojcik(0.5),
                 lambda: build_one_defect(math.pi / 6),
                 lambda: build_two_phase_defect(0.7, -0.7)):
        field = make()
        state = default_initial_state()
        for _ in range(50):
            state = apply_step(state, field)
        assert distribution(state).mass.sum() == pytest.approx(1.0, abs=1e-10)


def test_default_initial_state():
    state = default_initial_state()
    assert state.component(0, 0) == pytest.approx(DEFAULT_INITIAL[0])
    assert state.component(0, 1) == pytest.approx(DEFAULT_INITIAL[1])
    assert distribution(state).at(0) == pytest.approx(1.0)


def test_series_starts_after_first_step():
    series = origin_probability_series(build_hadamard(), default_initial_state(), 3)
    assert series.shape == (3,)
    # one Hadamard step moves all mass off the origin
    assert series[0] == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        origin_probability_series(build_hadamard(), default_initial_state(), 0)


def test_localization_dichotomy():
    avg_loc = time_averaged_origin_probability(
        build_wojcik(0.5), default_initial_state(), 2000)
    assert avg_loc >= LOCALIZED_MIN_TIME_AVERAGE
    assert avg_loc > 0.3    # observed value is about 0.32

    series = origin_probability_series(build_hadamard(), default_initial_state(), 2000)
    running = np.cumsum(series) / np.arange(1, 2001)
    checkpoints = [running[499], running[999], running[1999]]
    assert all(v <= DELOCALIZED_MAX_TIME_AVERAGE for v in checkpoints)
    assert checkpoints[0] > checkpoints[1] > checkpoints[2]


def test_decay_length_values():
    assert decay_length(math.exp(-1.0)) == pytest.approx(1.0, abs=1e-12)
    assert decay_length(math.exp(-0.5)) == pytest.approx(2.0, abs=1e-12)
    for bad in (1.0, 1.5, 0.0, -0.2):
        with pytest.raises(ValueError):
            decay_length(bad)


def test_decay_length_uses_binding_side():
    cand = point_spectrum_search(build_wojcik(0.35))[0]
    expected = -1.0 / math.log(max(cand.decay_left, cand.decay_right))
    assert decay_length(cand) == pytest.approx(expected, rel=1e-12)


def test_origin_return_tracks_localization_strength():
    """The slower the eigenfunction tails decay, the less mass stays at the origin."""
    phis = np.linspace(0.28, 0.49, 8)
    mods, avgs = [], []
    for phi in phis:
        field = build_wojcik(float(phi))
        worst = 0.0
        for idx in (1, 3):
            lam = wojcik_eigenvalues(float(phi), BranchLabel(ModelKind.WOJCIK, idx))[0]
            worst = max(worst, half_line_solution(field, lam, "right")[0],
                        half_line_solution(field, lam, "left")[0])
        mods.append(worst)
        avgs.append(time_averaged_origin_probability(field, default_initial_state(), 1000))
    rho = stats.spearmanr(mods, avgs).statistic
    assert rho < -0.99
