"""Closed-form signal-to-noise ratios of the two measurement schemes.

Both schemes estimate a small analyzer angle theta1 from the ratio of two
sequential counting windows.  Direct polarimetry reads the angle straight
off crossed analyzers; the geometric scheme reads it off the shifted
N-photon fringe, which multiplies the signal by N/tan(theta2) at the price
of a post-selection loss sin(theta2)^(2N) in the counted flux.  The SNR of
either scheme grows as sqrt(M) while shot noise dominates and saturates at a
plateau set by the technical noise; the geometric plateau exceeds the direct
one by the signal enhancement factor.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

from .counting import NoiseModel, check_linear_regime
from .errors import InvalidAngle, SmallAngleViolation
from .polarization import SetupConfig


@dataclass(frozen=True)
class SnrPoint:
    """SNR of one scheme at one total photon rate M (photons per unit time)."""

    total_photon_rate: float
    snr: float
    scheme: str
    config: Optional[SetupConfig]
    model: NoiseModel


@dataclass(frozen=True)
class SnrSweep:
    """SNR curve over a photon-rate grid plus the shot/technical crossover rate."""

    points: list[SnrPoint]
    crossover_rate: float


def snr_direct(theta1: float, total_photon_rate: float, model: NoiseModel) -> SnrPoint:
    """SNR of direct polarimetry: 2*sqrt(tau)*theta1 / sqrt(1/(eta*M) + xi2/2)."""
    if abs(theta1) > 0.1:
        warnings.warn(
            f"|theta1| = {abs(theta1):.3g} is not << 1; the 2*theta1 signal "
            "linearization degrades",
            SmallAngleViolation,
            stacklevel=2,
        )
    if total_photon_rate < 0:
        raise ValueError("total_photon_rate must be >= 0")
    eta = model.detection_efficiency
    tau = model.integration_time
    xi2 = model.technical_power
    if total_photon_rate == 0 or eta == 0:
        return SnrPoint(total_photon_rate, 0.0, "direct", None, model)
    denom = 1.0 / (eta * total_photon_rate) + 0.5 * xi2
    snr = 2.0 * theta1 * math.sqrt(tau / denom)
    return SnrPoint(total_photon_rate, snr, "direct", None, model)


def snr_geometric(
    config: SetupConfig,
    total_photon_rate: float,
    model: NoiseModel,
    visibility: float = 1.0,
) -> SnrPoint:
    """SNR of the geometric-phase scheme.

    (2*N*V*theta1/tan(theta2)) * sqrt(tau / (N/(eta*M*P0) + xi2/2)) with
    P0 = sin(theta2)^(2N) the zero-angle post-selection probability and
    M = nu*N the total photon rate of the N-photon source.
    """
    if abs(math.sin(config.theta2)) < 1e-12:
        raise InvalidAngle("theta2 must not be a multiple of pi")
    if total_photon_rate < 0:
        raise ValueError("total_photon_rate must be >= 0")
    check_linear_regime(config)
    n = config.photon_number
    eta = model.detection_efficiency
    tau = model.integration_time
    xi2 = model.technical_power
    p_zero = math.sin(config.theta2) ** (2 * n)
    signal = 2.0 * n * visibility * config.theta1 / math.tan(config.theta2)
    if total_photon_rate == 0 or eta == 0:
        return SnrPoint(total_photon_rate, 0.0, "geometric", config, model)
    denom = n / (eta * total_photon_rate * p_zero) + 0.5 * xi2
    snr = signal * math.sqrt(tau / denom)
    return SnrPoint(total_photon_rate, snr, "geometric", config, model)


def crossover_rate(
    scheme: str, model: NoiseModel, config: Optional[SetupConfig] = None
) -> float:
    """Total photon rate at which shot and technical variances are equal.

    Above it the SNR saturates; below it the SNR grows as sqrt(M).  Infinite
    when the model carries no technical noise.
    """
    eta = model.detection_efficiency
    xi2 = model.technical_power
    if xi2 == 0 or eta == 0:
        return math.inf
    if scheme == "direct":
        return 2.0 / (eta * xi2)
    if scheme == "geometric":
        if config is None:
            raise ValueError("geometric crossover needs a SetupConfig")
        n = config.photon_number
        p_zero = math.sin(config.theta2) ** (2 * n)
        return 2.0 * n / (eta * p_zero * xi2)
    raise ValueError(f"unknown scheme {scheme!r}")


def snr_sweep(
    scheme: str,
    config: Optional[SetupConfig],
    m_values,
    model: NoiseModel,
    visibility: float = 1.0,
) -> SnrSweep:
    """Evaluate one scheme across a monotone grid of total photon rates."""
    m_list = [float(m) for m in m_values]
    if any(b <= a for a, b in zip(m_list, m_list[1:])):
        raise ValueError("m_values must be strictly increasing")
    if scheme == "direct":
        theta1 = config.theta1 if config is not None else 0.0
        points = [snr_direct(theta1, m, model) for m in m_list]
    elif scheme == "geometric":
        if config is None:
            raise ValueError("geometric sweep needs a SetupConfig")
        points = [snr_geometric(config, m, model, visibility) for m in m_list]
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return SnrSweep(points, crossover_rate(scheme, model, config))
