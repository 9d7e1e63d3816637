"""Stochastic photon-counting engine with shot and technical noise.

The counting rate in a window of length tau fluctuates for two reasons:
Poisson arrival statistics (shot noise) and a white relative intensity
fluctuation of the source (technical noise) with power spectrum xi2, so the
integrated count I over one window has

    <I>      = eta * rate * tau
    Var(I)   = <I> + <I>^2 * xi2 / tau

The technical fluctuation is drawn once per window as a Gaussian with
variance xi2/tau (the white-noise average over the window), and the
fluctuated rate is clamped at zero before Poisson sampling.  Two sequential
windows always use independent draws, so their technical noises are
uncorrelated and survive in the difference of the two outputs.

Determinism: every trial of a Monte Carlo ensemble uses its own random
stream derived from (rng_seed, trial_index) via numpy's SeedSequence
spawn keys.  Results are therefore reproducible bit-exactly and independent
of trial execution order; means and variances are reduced with numpy's
pairwise summation over the trial-ordered array.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EmptyWindow, InvalidAngle, InvalidRate, SmallAngleViolation
from .nphoton import nphoton_postselect
from .polarization import SetupConfig

#: "Much smaller" margin for the linear-regime check of the geometric scheme.
SMALL_ANGLE_MARGIN = 0.1


@dataclass(frozen=True)
class NoiseModel:
    """Source flux and noise parameters of a counting measurement.

    mean_rate is the incident flux per unit time (photons for the direct
    scheme, N-photon events for the coincidence scheme), technical_power the
    white-noise power spectrum xi2 of the relative intensity fluctuation (in
    seconds), integration_time the window length tau, detection_efficiency
    the combined quantum efficiency eta, and rng_seed the root seed of all
    random streams.
    """

    mean_rate: float
    technical_power: float = 0.0
    integration_time: float = 1.0
    detection_efficiency: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.mean_rate < 0:
            raise InvalidRate(f"mean_rate must be >= 0, got {self.mean_rate}")
        if self.technical_power < 0:
            raise ValueError("technical_power must be >= 0")
        if self.integration_time <= 0:
            raise ValueError("integration_time must be > 0")
        if not 0.0 <= self.detection_efficiency <= 1.0:
            raise ValueError("detection_efficiency must be in [0, 1]")


@dataclass(frozen=True)
class CountRecord:
    """Photon count integrated over one window."""

    counts: int
    window_start: float
    window_length: float


@dataclass(frozen=True)
class EstimatorSample:
    """One ratio-estimator sample n = (I+ - I-)/(I+ + I-)."""

    n_value: float
    i_plus: CountRecord
    i_minus: CountRecord


@dataclass(frozen=True)
class TrialStats:
    """Summary of a Monte Carlo ensemble of ratio-estimator samples.

    outlier_fraction is the fraction of trials whose summed counts deviate by
    more than 30% from the ensemble mean sum; it flags departure from the
    linearization regime that underlies the variance prediction.
    """

    n_values: np.ndarray
    mean: float
    variance: float
    outlier_fraction: float
    n_trials: int
    n_dropped: int


def trial_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent random stream for a given root seed and trial key."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.PCG64(ss))


def simulate_count(
    model: NoiseModel,
    rate: float,
    rng: Optional[np.random.Generator] = None,
    window_start: float = 0.0,
) -> CountRecord:
    """Draw one integrated count for the given incident rate.

    A relative technical fluctuation with variance xi2/tau is drawn for the
    window, the fluctuated rate is clamped at zero, and the count is Poisson
    with mean eta * rate * (1 + xi) * tau.
    """
    if rate < 0:
        raise InvalidRate(f"rate must be >= 0, got {rate}")
    if rng is None:
        rng = trial_rng(model.rng_seed)
    tau = model.integration_time
    sigma = math.sqrt(model.technical_power / tau)
    xi = rng.normal(0.0, sigma)
    effective = max(0.0, rate * (1.0 + xi))
    lam = model.detection_efficiency * effective * tau
    return CountRecord(int(rng.poisson(lam)), window_start, tau)


def ratio_estimator(plus: CountRecord, minus: CountRecord) -> EstimatorSample:
    """Ratio of difference to sum of two counting windows."""
    total = plus.counts + minus.counts
    if total <= 0:
        raise EmptyWindow("both windows are empty")
    return EstimatorSample((plus.counts - minus.counts) / total, plus, minus)


def predicted_ratio_variance(
    mean_plus: float, mean_minus: float, model: NoiseModel
) -> float:
    """Analytic variance of the ratio estimator for uncorrelated windows.

    Each window contributes shot variance equal to its mean count plus
    technical variance (mean count)^2 * xi2 / tau; the total divides by the
    squared sum of means.  At balanced outputs this reduces to
    (1/tau) * (1/<rate_sum> + xi2/2).
    """
    total = mean_plus + mean_minus
    if total <= 0:
        raise ValueError("sum of mean counts must be positive")
    rel = model.technical_power / model.integration_time
    var_plus = mean_plus + mean_plus**2 * rel
    var_minus = mean_minus + mean_minus**2 * rel
    return (var_plus + var_minus) / total**2


# ---------------------------------------------------------------------------
# Direct polarimetry: sequential 135 and 45 degree analyzer windows.


def direct_rates(theta1: float, model: NoiseModel) -> tuple[float, float]:
    """Incident rates of the two analyzer windows, (1 +- sin(2*theta1))*M/2."""
    m = model.mean_rate
    s = math.sin(2.0 * theta1)
    return 0.5 * m * (1.0 + s), 0.5 * m * (1.0 - s)


def direct_measurement(
    theta1: float, model: NoiseModel, rng: Optional[np.random.Generator] = None
) -> EstimatorSample:
    """One sequential direct measurement of the analyzer angle theta1.

    The ensemble mean of the returned ratio converges to sin(2*theta1),
    about twice the angle in the small-angle regime.
    """
    if rng is None:
        rng = trial_rng(model.rng_seed)
    rate_plus, rate_minus = direct_rates(theta1, model)
    tau = model.integration_time
    plus = simulate_count(model, rate_plus, rng=rng, window_start=0.0)
    minus = simulate_count(model, rate_minus, rng=rng, window_start=tau)
    return ratio_estimator(plus, minus)


# ---------------------------------------------------------------------------
# Geometric-phase scheme: two out-of-phase N-photon coincidence fringes.


def check_linear_regime(config: SetupConfig) -> float:
    """Warn when theta1 leaves the linear regime of the geometric scheme.

    Returns the ratio |theta1|/tan(theta2); a SmallAngleViolation warning is
    issued when it exceeds SMALL_ANGLE_MARGIN * tan(1/(2N)).
    """
    n = config.photon_number
    ratio = abs(config.theta1) / math.tan(config.theta2)
    bound = math.tan(1.0 / (2.0 * n))
    if ratio > SMALL_ANGLE_MARGIN * bound:
        warnings.warn(
            f"|theta1|/tan(theta2) = {ratio:.4g} is not << tan(1/2N) = {bound:.4g}; "
            "the ratio estimator responds nonlinearly",
            SmallAngleViolation,
            stacklevel=3,
        )
    return ratio


def gp_rates(
    config: SetupConfig, model: NoiseModel, visibility: float = 1.0
) -> tuple[float, float]:
    """Incident N-photon coincidence rates of the two out-of-phase outputs."""
    rep = nphoton_postselect(config)
    n = rep.photon_number
    contrast = visibility * math.cos(n * config.chi - rep.phase)
    base = 0.5 * model.mean_rate * rep.success_probability
    return base * (1.0 + contrast), base * (1.0 - contrast)


def gp_measurement(
    config: SetupConfig,
    model: NoiseModel,
    visibility: float = 1.0,
    rng: Optional[np.random.Generator] = None,
) -> EstimatorSample:
    """One sequential measurement using the N-photon geometric-phase fringe.

    Requires the offset chi to null the estimator at theta1 = 0, i.e.
    N*chi = (N+1)*pi/2 modulo 2*pi.  The ensemble mean of the ratio then
    converges to visibility * sin(2*N*atan(tan(theta1)/tan(theta2))), which
    grows 2*N*visibility/tan(theta2) times faster than theta1 in the linear
    regime.  model.mean_rate is the incident N-photon event flux.
    """
    n = config.photon_number
    nulling = math.remainder(n * config.chi - (n + 1) * math.pi / 2.0, 2.0 * math.pi)
    if abs(nulling) > 1e-9:
        raise InvalidAngle(
            "chi must satisfy N*chi = (N+1)*pi/2 (mod 2*pi) to null the estimator "
            f"at theta1 = 0; got residual {nulling:.3e}"
        )
    check_linear_regime(config)
    if rng is None:
        rng = trial_rng(model.rng_seed)
    rate_plus, rate_minus = gp_rates(config, model, visibility)
    tau = model.integration_time
    plus = simulate_count(model, rate_plus, rng=rng, window_start=0.0)
    minus = simulate_count(model, rate_minus, rng=rng, window_start=tau)
    return ratio_estimator(plus, minus)


# ---------------------------------------------------------------------------
# Monte Carlo ensembles.


def _ratio_trials(
    rate_plus: float, rate_minus: float, model: NoiseModel, n_trials: int
) -> TrialStats:
    if n_trials < 2:
        raise ValueError("need at least 2 trials")
    tau = model.integration_time
    n_values = np.empty(n_trials)
    totals = np.empty(n_trials)
    dropped = 0
    for i in range(n_trials):
        rng = trial_rng(model.rng_seed, i)
        plus = simulate_count(model, rate_plus, rng=rng, window_start=2 * i * tau)
        minus = simulate_count(model, rate_minus, rng=rng, window_start=(2 * i + 1) * tau)
        total = plus.counts + minus.counts
        totals[i] = total
        if total == 0:
            n_values[i] = np.nan
            dropped += 1
        else:
            n_values[i] = (plus.counts - minus.counts) / total
    valid = ~np.isnan(n_values)
    values = n_values[valid]
    mean_total = float(np.mean(totals[valid]))
    outliers = np.abs(totals[valid] - mean_total) > 0.3 * mean_total
    return TrialStats(
        n_values=values,
        mean=float(np.mean(values)),
        variance=float(np.var(values, ddof=1)),
        outlier_fraction=float(np.mean(outliers)),
        n_trials=n_trials,
        n_dropped=dropped,
    )


def direct_trials(theta1: float, model: NoiseModel, n_trials: int) -> TrialStats:
    """Monte Carlo ensemble of direct measurements (one substream per trial)."""
    rate_plus, rate_minus = direct_rates(theta1, model)
    return _ratio_trials(rate_plus, rate_minus, model, n_trials)


def gp_trials(
    config: SetupConfig, model: NoiseModel, n_trials: int, visibility: float = 1.0
) -> TrialStats:
    """Monte Carlo ensemble of geometric-phase measurements."""
    n = config.photon_number
    nulling = math.remainder(n * config.chi - (n + 1) * math.pi / 2.0, 2.0 * math.pi)
    if abs(nulling) > 1e-9:
        raise InvalidAngle("chi must null the estimator at theta1 = 0")
    check_linear_regime(config)
    rate_plus, rate_minus = gp_rates(config, model, visibility)
    return _ratio_trials(rate_plus, rate_minus, model, n_trials)
