"""Noisy fringe synthesis, sinusoid fitting, and phase-shift curves.

A fringe scan samples the N-photon coincidence rate while the arm phase chi
is swept.  The fitter performs weighted least squares in the linear
(offset, cos, sin) basis with a one-dimensional refinement of the period, so
the only nonlinear parameter is handled by a bracketed golden-section search.
Fitted phases follow the convention

    counts ~ offset + amplitude * cos(2*pi*chi/period - phase)

so for a fringe with N-fold phase variable the fitted phase estimates the
fringe phase directly.  Phase-shift curves repeat the synthesize-and-fit
cycle over an analyzer grid, unwrap the fitted phases by
nearest-multiple-of-2*pi chaining, reference them to the first grid point,
and report the displacement in fringe periods next to the analytic curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .counting import NoiseModel, simulate_count, trial_rng
from .errors import FitDiverged
from .nphoton import nphoton_postselect
from .polarization import SetupConfig

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FringeScan:
    """Sampled counts versus arm phase chi for one interferometer setting."""

    chi_values: np.ndarray
    counts: np.ndarray
    scheme: str
    config: SetupConfig
    model: NoiseModel


@dataclass(frozen=True)
class FringeFit:
    """Sinusoid fit of a fringe scan.

    phase is reported in (-pi, pi]; phase_stderr comes from the weighted
    least-squares covariance and is infinite when the fringe amplitude is
    consistent with zero (unidentifiable phase).
    """

    amplitude: float
    offset: float
    phase: float
    period: float
    visibility: float
    residual_rms: float
    phase_stderr: float


@dataclass(frozen=True)
class PhaseShiftCurve:
    """Fitted fringe displacement versus analyzer angle, in fringe periods."""

    theta1: np.ndarray
    displacement: np.ndarray
    theory: np.ndarray
    phase_stderr: np.ndarray
    success_probability: np.ndarray
    flagged: np.ndarray
    fits: list[FringeFit]


def unwrap_phases(phases) -> np.ndarray:
    """Chain phases to a continuous curve by nearest multiples of 2*pi."""
    return np.unwrap(np.asarray(phases, dtype=float))


def synthesize_scan(
    config: SetupConfig,
    model: NoiseModel,
    n_points: int,
    visibility_factor: float = 1.0,
    chi_start: float = 0.0,
    chi_span: float = 2.0 * _TWO_PI,
    sample_noise: bool = True,
    rng: Optional[np.random.Generator] = None,
) -> FringeScan:
    """Synthesize a fringe scan of the configured interferometer.

    The expected counts per point are eta * tau * mean_rate * P *
    (1 + visibility_factor * cos(N*chi - Phi_f)); visibility_factor models
    experimental contrast loss phenomenologically.  With sample_noise=False
    the exact expected values are returned instead of Poisson draws (counts
    are then not integers), which is the noiseless limit used to validate the
    fitter.
    """
    if n_points < 8:
        raise ValueError("a scan needs at least 8 points")
    if not 0.0 <= visibility_factor <= 1.0:
        raise ValueError("visibility_factor must be in [0, 1]")
    if chi_span <= 0:
        raise ValueError("chi_span must be positive")
    rep = nphoton_postselect(config)
    n = rep.photon_number
    chi = chi_start + chi_span * np.arange(n_points) / n_points
    rate = model.mean_rate * rep.success_probability * (
        1.0 + visibility_factor * rep.visibility * np.cos(n * chi - rep.phase)
    )
    tau = model.integration_time
    eta = model.detection_efficiency
    if sample_noise:
        if rng is None:
            rng = trial_rng(model.rng_seed)
        counts = np.array(
            [
                simulate_count(model, float(r), rng=rng, window_start=i * tau).counts
                for i, r in enumerate(rate)
            ],
            dtype=float,
        )
    else:
        counts = eta * tau * rate
    scheme = "single" if n == 1 else "coincidence"
    return FringeScan(chi, counts, scheme, config, model)


def _linear_fit(chi, counts, weights, period):
    """Weighted least squares in the (1, cos, sin) basis at fixed period."""
    x = _TWO_PI * chi / period
    design = np.column_stack([np.ones_like(chi), np.cos(x), np.sin(x)])
    sw = np.sqrt(weights)
    coeffs, _, rank, _ = np.linalg.lstsq(design * sw[:, None], counts * sw, rcond=None)
    if rank < 3:
        raise FitDiverged("rank-deficient design matrix (scan too short or flat)")
    residuals = counts - design @ coeffs
    rss = float(np.sum(weights * residuals**2))
    return coeffs, residuals, rss, design


def fit_sinusoid(scan: FringeScan, period_hint: float) -> FringeFit:
    """Fit offset + amplitude*cos(2*pi*chi/period - phase) to a scan.

    Weighted least squares with Poisson weights (variance taken as the
    observed counts, clamped at 1).  The period is refined around the hint
    with a coarse bracket followed by golden-section search; the scan must
    cover at least one period of the hint.
    """
    chi = np.asarray(scan.chi_values, dtype=float)
    counts = np.asarray(scan.counts, dtype=float)
    if chi.ndim != 1 or chi.shape != counts.shape or chi.size < 8:
        raise ValueError("scan needs matching chi/count vectors of length >= 8")
    if np.any(np.diff(chi) <= 0):
        raise ValueError("chi_values must be strictly increasing")
    if chi[-1] - chi[0] < period_hint:
        raise ValueError("scan must span at least one period of the hint")
    weights = 1.0 / np.clip(counts, 1.0, None)

    def rss_at(period):
        return _linear_fit(chi, counts, weights, period)[2]

    # Coarse bracket, then golden-section refinement of the period.
    grid = period_hint * np.linspace(0.75, 1.3, 45)
    losses = [rss_at(t) for t in grid]
    k = int(np.argmin(losses))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, len(grid) - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = rss_at(c), rss_at(d)
    while b - a > 1e-12 * period_hint:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = rss_at(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = rss_at(d)
    period = 0.5 * (a + b)

    coeffs, residuals, _, design = _linear_fit(chi, counts, weights, period)
    offset, cos_c, sin_c = (float(v) for v in coeffs)
    amplitude = math.hypot(cos_c, sin_c)
    phase = math.atan2(sin_c, cos_c)
    if phase <= -math.pi:
        phase = math.pi

    # Covariance of the linear parameters with the stated weights.
    xtwx = design.T @ (design * weights[:, None])
    try:
        cov = np.linalg.inv(xtwx)
    except np.linalg.LinAlgError as exc:
        raise FitDiverged("singular normal equations") from exc
    var_c, var_s, cov_cs = cov[1, 1], cov[2, 2], cov[1, 2]
    amp_sq = amplitude**2
    sigma_amp = math.sqrt(
        max(0.0, (cos_c**2 * var_c + sin_c**2 * var_s + 2 * cos_c * sin_c * cov_cs))
    ) / max(amplitude, 1e-300)
    if amplitude <= 2.0 * sigma_amp:
        phase_stderr = math.inf
    else:
        num = sin_c**2 * var_c + cos_c**2 * var_s - 2 * cos_c * sin_c * cov_cs
        phase_stderr = math.sqrt(max(0.0, num)) / amp_sq

    visibility = amplitude / offset if offset > 0 else math.nan
    return FringeFit(
        amplitude=amplitude,
        offset=offset,
        phase=phase,
        period=period,
        visibility=visibility,
        residual_rms=float(np.sqrt(np.mean(residuals**2))),
        phase_stderr=phase_stderr,
    )


def phase_shift_curve(
    theta2: float,
    theta1_grid,
    n_photons: int,
    model: NoiseModel,
    visibility_factor: float = 1.0,
    points_per_scan: int = 64,
    normalize_flux: bool = True,
    min_expected_counts: float = 25.0,
) -> PhaseShiftCurve:
    """Fitted fringe displacement across an analyzer-angle grid.

    For each theta1 a fringe scan is synthesized (with a per-point random
    substream) and fitted; fitted phases are unwrapped along the grid,
    referenced to the first point, and divided by 2*pi to give the
    displacement in fringe periods.  The grid must start at -pi/2, the
    reference angle of the analytic curve.

    With normalize_flux=True the incident flux is rescaled by the inverse
    post-selection probability at every point, mimicking an integration time
    adjusted to keep the counts per point constant; otherwise points whose
    expected offset counts fall below min_expected_counts are flagged.
    """
    grid = np.asarray(theta1_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3 or np.any(np.diff(grid) <= 0):
        raise ValueError("theta1_grid must be increasing with at least 3 points")
    if abs(grid[0] + math.pi / 2) > 1e-9:
        raise ValueError("theta1_grid must start at -pi/2 (the phase reference)")

    phases = np.empty(grid.size)
    stderrs = np.empty(grid.size)
    probs = np.empty(grid.size)
    theory = np.empty(grid.size)
    flagged = np.zeros(grid.size, dtype=bool)
    fits: list[FringeFit] = []
    span = 2.0 * _TWO_PI / n_photons  # two fringe periods per scan
    for k, theta1 in enumerate(grid):
        config = SetupConfig(float(theta1), theta2, n_photons)
        rep = nphoton_postselect(config)
        probs[k] = rep.success_probability
        theory[k] = rep.phase
        rate = model.mean_rate / rep.success_probability if normalize_flux else model.mean_rate
        expected = (
            model.detection_efficiency
            * model.integration_time
            * rate
            * rep.success_probability
        )
        flagged[k] = expected < min_expected_counts
        point_model = replace(model, mean_rate=rate)
        scan = synthesize_scan(
            config,
            point_model,
            points_per_scan,
            visibility_factor,
            chi_start=-0.5 * span,
            chi_span=span,
            rng=trial_rng(model.rng_seed, k),
        )
        fit = fit_sinusoid(scan, period_hint=_TWO_PI / n_photons)
        fits.append(fit)
        phases[k] = fit.phase
        stderrs[k] = fit.phase_stderr

    unwrapped = unwrap_phases(phases)
    displacement = (unwrapped - unwrapped[0]) / _TWO_PI
    theory_disp = (theory - theory[0]) / _TWO_PI
    return PhaseShiftCurve(
        theta1=grid,
        displacement=displacement,
        theory=theory_disp,
        phase_stderr=stderrs,
        success_probability=probs,
        flagged=flagged,
        fits=fits,
    )
