"""Nonlinear geometric phases of N identically polarized photons.

A numpy-based toolkit for a polarization Mach-Zehnder interferometer:
Jones-calculus state preparation, three independent routes to the
Pancharatnam geometric phase (gauge-invariant overlap products, closed
forms, Poincare-sphere solid angles), N-photon fringe statistics with
Hong-Ou-Mandel path interference, a stochastic photon-counting engine with
shot and technical noise, closed-form SNR curves for direct versus
geometric-phase-amplified polarimetry, and fringe synthesis/fitting.
"""

from .counting import (
    CountRecord,
    EstimatorSample,
    NoiseModel,
    TrialStats,
    direct_measurement,
    direct_trials,
    gp_measurement,
    gp_trials,
    predicted_ratio_variance,
    ratio_estimator,
    simulate_count,
    trial_rng,
)
from .errors import (
    DegenerateOverlap,
    DegenerateTriangle,
    EmptyWindow,
    FitDiverged,
    GeophaseError,
    InvalidAngle,
    InvalidRate,
    SmallAngleViolation,
)
from .fringes import (
    FringeFit,
    FringeScan,
    PhaseShiftCurve,
    fit_sinusoid,
    phase_shift_curve,
    synthesize_scan,
    unwrap_phases,
)
from .nphoton import (
    NPhotonReport,
    TwoPhotonPathState,
    coincidence_amplitude,
    mz_two_photon_expand,
    nfold_geometric_phase,
    nphoton_fringe,
    nphoton_postselect,
    nulling_offset,
    two_photon_coincidence_rate,
)
from .phases import (
    EPS_DEGENERATE,
    PhaseReport,
    StokesVector,
    closed_form_one_photon,
    pancharatnam_phase,
    postselect_stats,
    relative_phase,
    setup_phase_report,
    signed_solid_angle,
    to_stokes,
    wrap_angle,
)
from .polarization import (
    D,
    H,
    L,
    PolarizationState,
    R,
    SetupConfig,
    V,
    X,
    apply_jones,
    inner,
    linear,
    linear_polarizer,
    prepare_setup_states,
    quarter_wave_plate,
    same_ray,
)
from .snr import SnrPoint, SnrSweep, crossover_rate, snr_direct, snr_geometric, snr_sweep

__version__ = "0.1.0"
