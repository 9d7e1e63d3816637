"""N-photon fringe identities and two-photon path interference."""

import cmath
import math

import numpy as np
import pytest

from geophase import (
    SetupConfig,
    closed_form_one_photon,
    coincidence_amplitude,
    mz_two_photon_expand,
    nfold_geometric_phase,
    nphoton_fringe,
    nphoton_postselect,
    nulling_offset,
    two_photon_coincidence_rate,
    wrap_angle,
)
from geophase.errors import InvalidAngle
from geophase.nphoton import TwoPhotonPathState


def test_single_photon_reduction():
    for theta1, theta2 in [(0.1, 0.4), (-0.9, 2.2), (1.2, math.pi / 20)]:
        one = closed_form_one_photon(theta1, theta2)
        rep = nphoton_postselect(SetupConfig(theta1, theta2, 1))
        assert rep.success_probability == pytest.approx(one.success_probability, abs=1e-15)
        assert rep.phase == pytest.approx(one.phase_f, abs=1e-15)
        assert rep.phase_m == pytest.approx(one.phase_m, abs=1e-15)
        assert rep.visibility_m == pytest.approx(one.visibility_m, abs=1e-15)
        assert rep.visibility == 1.0


def test_two_photon_values():
    rep = nphoton_postselect(SetupConfig(0.0, math.pi / 4, 2))
    assert rep.success_probability == pytest.approx(0.25, abs=1e-12)
    assert abs(wrap_angle(rep.phase - math.pi)) < 1e-12


@pytest.mark.parametrize("theta2", [math.pi / 50, math.pi / 10, math.pi / 4, 1.2])
def test_phase_slope_doubles(theta2):
    h = 1e-6

    def slope(n):
        up = nphoton_postselect(SetupConfig(h, theta2, n)).phase
        down = nphoton_postselect(SetupConfig(-h, theta2, n)).phase
        return (up - down) / (2 * h)

    assert slope(2) == pytest.approx(2 * slope(1), rel=1e-9)


def test_power_law_and_phase_multiples():
    theta1s = np.linspace(-1.5, 1.5, 21)
    theta2s = np.linspace(0.1, 3.0, 9)
    for n in range(1, 6):
        for theta1 in theta1s:
            for theta2 in theta2s:
                one = closed_form_one_photon(float(theta1), float(theta2))
                rep = nphoton_postselect(SetupConfig(float(theta1), float(theta2), n))
                assert rep.success_probability == pytest.approx(
                    one.success_probability**n, abs=1e-12
                )
                assert abs(wrap_angle(rep.phase - n * one.phase_f)) < 1e-9
                assert rep.visibility == 1.0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_unwrapped_phase_spans_n_periods(n):
    theta2 = 0.35
    grid = np.linspace(-math.pi / 2, math.pi / 2, 721)
    phases = [nphoton_postselect(SetupConfig(float(t), theta2, n)).phase for t in grid]
    assert phases[-1] - phases[0] == pytest.approx(2 * math.pi * n, rel=1e-9)
    # and the curve is continuous (no branch jumps to unwrap)
    assert np.max(np.abs(np.diff(phases))) < math.pi


def test_fringe_period_halves_for_two_photons():
    config1 = SetupConfig(0.2, 0.5, 1)
    config2 = SetupConfig(0.2, 0.5, 2)
    chis = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    f1 = np.array([nphoton_fringe(config1, c) for c in chis])
    f2 = np.array([nphoton_fringe(config2, c) for c in chis])
    np.testing.assert_allclose(f1, [nphoton_fringe(config1, c + 2 * math.pi) for c in chis], atol=1e-12)
    np.testing.assert_allclose(f2, [nphoton_fringe(config2, c + math.pi) for c in chis], atol=1e-12)
    # pi is not a period of the one-photon fringe
    assert np.max(np.abs(f1 - [nphoton_fringe(config1, c + math.pi) for c in chis])) > 0.1


def test_fringe_minimum_is_dark():
    config = SetupConfig(0.3, 0.7, 2)
    rep = nphoton_postselect(config)
    chi_min = (rep.phase + math.pi) / rep.photon_number
    assert nphoton_fringe(config, chi_min) == pytest.approx(0.0, abs=1e-12)


def test_preselection_fringe_is_flat_at_quarter_pi():
    config = SetupConfig(math.pi / 4, 0.9, 2)
    values = [nphoton_fringe(config, c, post_selected=False) for c in np.linspace(0, 6, 50)]
    np.testing.assert_allclose(values, 2.0, atol=1e-12)


def test_nfold_geometric_phase_scales():
    config = SetupConfig(0.4, 0.3, 3)
    one = closed_form_one_photon(0.4, 0.3)
    assert nfold_geometric_phase(config) == pytest.approx(3 * one.geometric, abs=1e-12)


# ---------------------------------------------------------------------------
# Two-photon beam-splitter expansion


def test_expand_at_zero_phase():
    state = mz_two_photon_expand(0.0)
    assert state.amp_20 == pytest.approx(1.0)
    assert state.amp_02 == pytest.approx(1.0)
    assert state.amp_11 == pytest.approx(2.0)


def test_expand_at_quarter_period():
    state = mz_two_photon_expand(math.pi / 2)
    assert state.amp_02 == pytest.approx(-1.0, abs=1e-12)
    assert state.amp_11 == pytest.approx(2j, abs=1e-12)


@pytest.mark.parametrize("chi", np.linspace(-3, 3, 13))
def test_path_amplitudes_are_unimodular(chi):
    state = mz_two_photon_expand(float(chi))
    assert abs(state.amp_20) == pytest.approx(1.0, abs=1e-12)
    assert abs(state.amp_02) == pytest.approx(1.0, abs=1e-12)


def test_coincidence_kills_one_one_term():
    # pure |1,1> input contributes exactly nothing to the coincidence
    assert coincidence_amplitude(TwoPhotonPathState(0, 0, 1)) == 0
    assert coincidence_amplitude(TwoPhotonPathState(0, 0, 5 - 3j)) == 0


def test_coincidence_dark_and_bright_fringe():
    assert abs(coincidence_amplitude(mz_two_photon_expand(math.pi / 2))) < 1e-12
    bright = abs(coincidence_amplitude(mz_two_photon_expand(0.0)))
    assert bright == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_coincidence_rate_is_pump_period_fringe():
    chis = np.linspace(-2 * math.pi, 2 * math.pi, 257)
    rates = np.array([two_photon_coincidence_rate(float(c)) for c in chis])
    scale = rates.max() / 2.0
    np.testing.assert_allclose(rates / scale, 1.0 + np.cos(2 * chis), atol=1e-12)


def test_coincidence_amplitude_proportional_to_sum_phase():
    for chi in np.linspace(0, math.pi, 11):
        amp = coincidence_amplitude(mz_two_photon_expand(float(chi)))
        expect = (1j / math.sqrt(2)) * (1 + cmath.exp(2j * chi))
        assert amp == pytest.approx(expect, abs=1e-12)


def test_nulling_offset():
    assert nulling_offset(1) == pytest.approx(math.pi)
    assert nulling_offset(2) == pytest.approx(0.75 * math.pi)
    with pytest.raises(ValueError):
        nulling_offset(0)


def test_invalid_theta2_propagates():
    with pytest.raises(InvalidAngle):
        nphoton_postselect(SetupConfig(0.1, 0.0, 2))
