"""N identically polarized photons: collective fringes and two-photon paths.

A group of N photons in the same polarization state behaves as a single
entity whose overlaps are the N-th powers of the one-photon overlaps, so the
fringe phase is N-fold and the post-selection probability is the N-th power
of the one-photon probability.  Nothing here materializes 2^N-dimensional
tensors; every quantity uses the overlap-power identities directly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .phases import closed_form_one_photon
from .polarization import SetupConfig


@dataclass(frozen=True)
class NPhotonReport:
    """Fringe parameters of the N-photon interferometer.

    phase / visibility describe the post-selected coincidence fringe in the
    N-fold phase variable, phase_m / visibility_m the fringe before
    post-selection, success_probability the chance that all N photons pass
    the analyzer.
    """

    success_probability: float
    visibility: float
    phase: float
    phase_m: float
    visibility_m: float
    photon_number: int


@dataclass(frozen=True)
class TwoPhotonPathState:
    """Unnormalized two-photon path amplitudes after the first beam splitter.

    amp_20, amp_02, amp_11 multiply |2,0>, |0,2>, |1,1> over the two arms.
    """

    amp_20: complex
    amp_02: complex
    amp_11: complex


def nulling_offset(photon_number: int) -> float:
    """Arm phase offset chi that zeroes the balanced ratio estimator at theta1 = 0."""
    if photon_number < 1:
        raise ValueError("photon_number must be positive")
    return (photon_number + 1) * math.pi / (2 * photon_number)


def nphoton_postselect(config: SetupConfig) -> NPhotonReport:
    """Closed-form N-photon fringe report for the configured setup.

    The post-selection probability is p^N for one-photon probability p, the
    fringe visibility stays 1, and the phase is N times the one-photon value:
    2*N*atan(tan(theta1)/tan(theta2)) + N*pi/2.
    """
    n = config.photon_number
    one = closed_form_one_photon(config.theta1, config.theta2)
    return NPhotonReport(
        success_probability=one.success_probability**n,
        visibility=1.0,
        phase=n * one.phase_f,
        phase_m=n * one.phase_m,
        visibility_m=one.visibility_m**n,
        photon_number=n,
    )


def nphoton_fringe(config: SetupConfig, chi: float, post_selected: bool = True) -> float:
    """Relative N-photon coincidence intensity at arm phase offset chi.

    Post-selected: 2*P*(1 + V_f*cos(N*chi - Phi_f)).  Without post-selection
    the fringe is 2*(1 + V_m*cos(N*chi - Phi_m)), whose contrast dies when
    the arm states become distinguishable.
    """
    rep = nphoton_postselect(config)
    n = rep.photon_number
    if post_selected:
        return 2.0 * rep.success_probability * (
            1.0 + rep.visibility * math.cos(n * chi - rep.phase)
        )
    return 2.0 * (1.0 + rep.visibility_m * math.cos(n * chi - rep.phase_m))


# Symmetric 50:50 beam splitter: transmission 1/sqrt(2), reflection i/sqrt(2).
_BS_T = 1.0 / math.sqrt(2.0)
_BS_R = 1j / math.sqrt(2.0)


def mz_two_photon_expand(chi: float) -> TwoPhotonPathState:
    """Two-photon path state after the first beam splitter.

    For a photon pair entering one input port, the arms carry the
    unnormalized amplitudes (1, e^{2i*chi}, 2*e^{i*chi}) for |2,0>, |0,2>,
    |1,1>, with chi the relative arm phase.
    """
    return TwoPhotonPathState(
        amp_20=1.0 + 0.0j,
        amp_02=cmath.exp(2j * chi),
        amp_11=2.0 * cmath.exp(1j * chi),
    )


def coincidence_amplitude(state: TwoPhotonPathState) -> complex:
    """Amplitude for one photon at each output of the recombining beam splitter.

    The |1,1> intermediate term maps to bunched outputs only (its coincidence
    coefficient t^2 + r^2 cancels exactly for a symmetric splitter), so the
    coincidence signal keeps just the |2,0> and |0,2> contributions and is
    proportional to 1 + e^{2i*chi} for the expanded pair state.
    """
    coeff_20 = math.sqrt(2.0) * _BS_T * _BS_R
    coeff_02 = math.sqrt(2.0) * _BS_R * _BS_T
    coeff_11 = _BS_T * _BS_T + _BS_R * _BS_R
    return state.amp_20 * coeff_20 + state.amp_02 * coeff_02 + state.amp_11 * coeff_11


def two_photon_coincidence_rate(chi: float) -> float:
    """Coincidence rate of the pair interferometer, proportional to 1 + cos(2*chi)."""
    return abs(coincidence_amplitude(mz_two_photon_expand(chi))) ** 2


def nfold_geometric_phase(config: SetupConfig) -> float:
    """N-photon geometric phase (post-selection-induced fringe shift).

    N times the one-photon value; reported unwrapped on the branch of the
    closed form, so it ranges over (-N*pi, 2*N*pi].
    """
    one = closed_form_one_photon(config.theta1, config.theta2)
    return config.photon_number * one.geometric


__all__ = [
    "NPhotonReport",
    "TwoPhotonPathState",
    "nulling_offset",
    "nphoton_postselect",
    "nphoton_fringe",
    "mz_two_photon_expand",
    "coincidence_amplitude",
    "two_photon_coincidence_rate",
    "nfold_geometric_phase",
]
