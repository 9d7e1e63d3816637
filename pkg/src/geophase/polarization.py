"""Jones calculus for a polarization Mach-Zehnder interferometer.

States are complex two-vectors over the horizontal/vertical basis and
optical elements are 2x2 Jones matrices.  Wave plates follow the convention
that the fast axis is unretarded while the slow axis picks up the full
retardance phase (i for a quarter-wave plate).  With that choice the four
states of the interferometer (input polarizer at 90 deg + theta1, quarter-wave
plates at 0 and 90 deg in the two arms, output polarizer at theta2) come out as

    psi_1 = (-sin theta1,    cos theta1)
    psi_A = (-sin theta1,  i cos theta1)
    psi_B = (-i sin theta1,  cos theta1)
    psi_2 = (cos theta2,     sin theta2)

All angles are radians.  States are immutable values; normalization is
explicit so that the zero vector produced by a blocked polarizer remains
representable and detectable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidAngle

_BLOCKED_NORM = 1e-12


@dataclass(frozen=True)
class PolarizationState:
    """Single-photon polarization state with H and V complex amplitudes."""

    h_amplitude: complex
    v_amplitude: complex

    def norm(self) -> float:
        return math.sqrt(abs(self.h_amplitude) ** 2 + abs(self.v_amplitude) ** 2)

    def normalize(self) -> "PolarizationState":
        """Return the unit-norm state along the same ray.

        Raises ValueError for a blocked (numerically zero) state, whose
        direction carries no information.
        """
        n = self.norm()
        if n < _BLOCKED_NORM:
            raise ValueError("cannot normalize a blocked (zero-norm) state")
        return PolarizationState(self.h_amplitude / n, self.v_amplitude / n)

    def is_blocked(self) -> bool:
        return self.norm() < _BLOCKED_NORM

    def as_array(self) -> np.ndarray:
        return np.array([self.h_amplitude, self.v_amplitude], dtype=complex)


def linear(angle: float) -> PolarizationState:
    """Unit linear polarization at `angle` from horizontal."""
    return PolarizationState(math.cos(angle), math.sin(angle))


H = linear(0.0)
V = linear(math.pi / 2)
D = linear(math.pi / 4)
X = linear(3 * math.pi / 4)
# Right circular sits at the north pole of the Poincare sphere in the
# convention used by `phases.to_stokes`.
R = PolarizationState(1 / math.sqrt(2), -1j / math.sqrt(2))
L = PolarizationState(1 / math.sqrt(2), 1j / math.sqrt(2))


def inner(a: PolarizationState, b: PolarizationState) -> complex:
    """Hermitian inner product <a|b>, conjugating the first argument."""
    return (
        a.h_amplitude.conjugate() * b.h_amplitude
        + a.v_amplitude.conjugate() * b.v_amplitude
    )


def same_ray(a: PolarizationState, b: PolarizationState, tol: float = 1e-12) -> bool:
    """True if the two states differ only by a global phase."""
    na, nb = a.norm(), b.norm()
    if na < _BLOCKED_NORM or nb < _BLOCKED_NORM:
        raise ValueError("ray comparison undefined for blocked states")
    return abs(inner(a, b)) / (na * nb) >= 1.0 - tol


def linear_polarizer(angle: float) -> np.ndarray:
    """Jones matrix projecting onto the linear polarization at `angle`.

    The result is a Hermitian idempotent projector.
    """
    if not math.isfinite(angle):
        raise InvalidAngle("polarizer angle must be finite")
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c * c, c * s], [c * s, s * s]], dtype=complex)


def quarter_wave_plate(fast_axis_angle: float) -> np.ndarray:
    """Jones matrix of a quarter-wave plate with its fast axis at the given angle.

    Unitary retarder: the fast axis is unretarded, the slow axis gains the
    phase i.  Applying the plate four times reproduces the input ray.
    """
    if not math.isfinite(fast_axis_angle):
        raise InvalidAngle("wave-plate angle must be finite")
    c, s = math.cos(fast_axis_angle), math.sin(fast_axis_angle)
    rot = np.array([[c, -s], [s, c]], dtype=complex)
    retard = np.array([[1.0, 0.0], [0.0, 1.0j]], dtype=complex)
    return rot @ retard @ rot.conj().T


def apply_jones(matrix: np.ndarray, state: PolarizationState) -> PolarizationState:
    """Apply a 2x2 Jones matrix to a state (no normalization)."""
    m = np.asarray(matrix, dtype=complex)
    h = complex(m[0, 0]) * state.h_amplitude + complex(m[0, 1]) * state.v_amplitude
    v = complex(m[1, 0]) * state.h_amplitude + complex(m[1, 1]) * state.v_amplitude
    return PolarizationState(h, v)


@dataclass(frozen=True)
class SetupConfig:
    """Interferometer configuration.

    theta1 is the input-polarizer offset from vertical (-pi/2..pi/2), theta2
    the output-analyzer angle from horizontal (0..pi), photon_number the size
    of the identically polarized photon group, and chi the U(1) phase offset
    between the arms.
    """

    theta1: float
    theta2: float
    photon_number: int = 1
    chi: float = 0.0

    _ANGLE_TOL = 1e-9

    def __post_init__(self):
        if not (-math.pi / 2 - self._ANGLE_TOL <= self.theta1 <= math.pi / 2 + self._ANGLE_TOL):
            raise InvalidAngle(f"theta1 = {self.theta1} outside [-pi/2, pi/2]")
        if not (-self._ANGLE_TOL <= self.theta2 <= math.pi + self._ANGLE_TOL):
            raise InvalidAngle(f"theta2 = {self.theta2} outside [0, pi]")
        if not isinstance(self.photon_number, int) or self.photon_number < 1:
            raise ValueError(f"photon_number must be a positive integer, got {self.photon_number}")
        if not math.isfinite(self.chi):
            raise InvalidAngle("chi must be finite")


# Fixed arm retarders: fast axes at 0 and 90 degrees.
_QWP_ARM_A = quarter_wave_plate(0.0)
_QWP_ARM_B = quarter_wave_plate(math.pi / 2)


def prepare_setup_states(
    config: SetupConfig,
) -> tuple[PolarizationState, PolarizationState, PolarizationState, PolarizationState]:
    """States (psi_1, psi_A, psi_B, psi_2) of the configured interferometer.

    psi_1 is prepared by the input polarizer, psi_A and psi_B by the arm
    quarter-wave plates acting on psi_1, and psi_2 is the post-selection
    analyzer state.  All four are unit norm; the arm states satisfy the
    balance condition |<psi_2|psi_A>| = |<psi_2|psi_B>|.
    """
    psi1 = linear(math.pi / 2 + config.theta1)
    psi_a = apply_jones(_QWP_ARM_A, psi1)
    psi_b = apply_jones(_QWP_ARM_B, psi1)
    psi2 = linear(config.theta2)
    return psi1, psi_a, psi_b, psi2
