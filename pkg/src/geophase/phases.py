"""Relative, post-selected, and geometric phases of polarization states.

Three independent routes to the geometric phase are provided:

* ``pancharatnam_phase`` evaluates the gauge-invariant three-state product
  arg(<a|b><b|c><c|a>), which is insensitive to the global phase of every
  argument.
* ``closed_form_one_photon`` evaluates the analytic expressions valid for
  the standard interferometer states produced by
  :func:`geophase.polarization.prepare_setup_states`.
* ``signed_solid_angle`` computes the oriented solid angle of the geodesic
  triangle on the Poincare sphere; the geometric phase equals half of it.

Orientation convention: the solid angle is positive when the circuit
a -> b -> c encloses its interior clockwise as seen from outside the sphere
(equivalently, it is minus the right-handed signed solid angle).  This is the
unique choice for which ``pancharatnam_phase`` equals ``signed_solid_angle/2``
with the Stokes mapping of :func:`to_stokes`.

All arg-valued results are reported in (-pi, pi]; solid angles in
(-2*pi, 2*pi].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOverlap, DegenerateTriangle, InvalidAngle
from .polarization import PolarizationState, SetupConfig, inner, prepare_setup_states

#: Overlap magnitude below which arg() is numerically meaningless.
EPS_DEGENERATE = 1e-9

_TWO_PI = 2.0 * math.pi


def wrap_angle(x: float, period: float = _TWO_PI) -> float:
    """Wrap `x` into the half-open interval (-period/2, period/2]."""
    half = 0.5 * period
    r = math.remainder(x, period)
    return r + period if r <= -half else r


def _arg(z: complex) -> float:
    """Argument of z in (-pi, pi], mapping the -pi branch edge to +pi."""
    p = cmath.phase(z)
    return math.pi if p <= -math.pi else p


@dataclass(frozen=True)
class PhaseReport:
    """All phase and post-selection quantities for one interferometer setup.

    visibility_m / phase_m describe the fringe before post-selection,
    success_probability / visibility_f / phase_f the fringe after projecting
    both arms onto the analyzer state.  geometric is the post-selection-induced
    phase shift (phase_f - phase_m modulo 2*pi) and solid_angle the oriented
    Poincare-sphere triangle area, equal to twice the geometric phase.
    overlap_a and overlap_b are the analyzer overlaps <psi_2|psi_A> and
    <psi_2|psi_B>.
    """

    visibility_m: float
    phase_m: float
    success_probability: float
    visibility_f: float
    phase_f: float
    geometric: float
    solid_angle: float
    overlap_a: complex
    overlap_b: complex


@dataclass(frozen=True)
class StokesVector:
    """Unit vector on the Poincare sphere."""

    s1: float
    s2: float
    s3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.s1, self.s2, self.s3])


def relative_phase(a: PolarizationState, b: PolarizationState) -> float:
    """Interferometric phase arg(<b|a>) between two arm states.

    Raises DegenerateOverlap for (near-)orthogonal states, whose relative
    phase is undefined.
    """
    z = inner(b, a)
    if abs(z) <= EPS_DEGENERATE:
        raise DegenerateOverlap(
            f"overlap magnitude {abs(z):.3e} too small for a relative phase"
        )
    return _arg(z)


def postselect_stats(
    psi_a: PolarizationState, psi_b: PolarizationState, psi2: PolarizationState
) -> tuple[float, float, float]:
    """Success probability, visibility, and phase of the post-selected fringe.

    Returns (p, v_f, phi_f) where p = (|c_A|^2 + |c_B|^2)/2 with
    c_A = <psi2|psi_a>, c_B = <psi2|psi_b>, v_f = 2|c_A c_B| / (|c_A|^2 + |c_B|^2)
    and phi_f = arg(<psi_b|psi2><psi2|psi_a>).
    """
    c_a = inner(psi2, psi_a)
    c_b = inner(psi2, psi_b)
    wa, wb = abs(c_a) ** 2, abs(c_b) ** 2
    if wa + wb <= EPS_DEGENERATE**2:
        raise DegenerateOverlap("both arms are orthogonal to the post-selection state")
    p = 0.5 * (wa + wb)
    v_f = 2.0 * abs(c_a * c_b) / (wa + wb)
    phi_f = _arg(c_b.conjugate() * c_a)
    return p, v_f, phi_f


def pancharatnam_phase(
    psi_a: PolarizationState, psi_b: PolarizationState, psi_c: PolarizationState
) -> float:
    """Geometric phase arg(<a|b><b|c><c|a>) of the closed three-state circuit.

    Gauge invariant: multiplying any argument by a unit phase leaves the
    result unchanged.  Cyclic permutations preserve it, transpositions negate
    it.  Raises DegenerateOverlap when any pairwise overlap (and with it the
    whole product) vanishes.
    """
    z_ab = inner(psi_a, psi_b)
    z_bc = inner(psi_b, psi_c)
    z_ca = inner(psi_c, psi_a)
    for z in (z_ab, z_bc, z_ca):
        if abs(z) <= EPS_DEGENERATE:
            raise DegenerateOverlap(
                f"pairwise overlap magnitude {abs(z):.3e} below {EPS_DEGENERATE}"
            )
    return _arg(z_ab * z_bc * z_ca)


def to_stokes(state: PolarizationState) -> StokesVector:
    """Map a normalized state to its Poincare-sphere unit vector.

    Axes: s1 separates H (+1) from V (-1), s2 the diagonal pair, s3 the
    circular pair with right circular at the north pole.
    """
    h, v = state.h_amplitude, state.v_amplitude
    s1 = abs(h) ** 2 - abs(v) ** 2
    cross = h * v.conjugate()
    s2 = 2.0 * cross.real
    s3 = 2.0 * cross.imag
    return StokesVector(s1, s2, s3)


def _unit3(v) -> np.ndarray:
    arr = np.asarray(v.as_array() if isinstance(v, StokesVector) else v, dtype=float)
    if arr.shape != (3,):
        raise ValueError("expected a 3-vector")
    n = math.sqrt(float(arr @ arr))
    if n == 0.0:
        raise DegenerateTriangle("zero vertex vector")
    return arr / n


def signed_solid_angle(a, b, c) -> float:
    """Oriented solid angle of the geodesic triangle with vertices a, b, c.

    Vertices are unit 3-vectors (StokesVector or array-like).  The magnitude
    is the spherical excess, the sign follows the orientation convention in
    the module docstring: swapping two vertices negates the result.  Raises
    DegenerateTriangle when two vertices are parallel or antiparallel, since
    the geodesic between them is then not unique (or has zero length).
    """
    va, vb, vc = _unit3(a), _unit3(b), _unit3(c)

    cross_ab = np.cross(va, vb)
    cross_bc = np.cross(vb, vc)
    cross_ca = np.cross(vc, va)
    for cr in (cross_ab, cross_bc, cross_ca):
        if math.sqrt(float(cr @ cr)) <= EPS_DEGENERATE:
            raise DegenerateTriangle("two vertices are (anti)parallel")

    def corner(p, q, r):
        # Interior angle at p between the geodesics toward q and r.
        tq = q - float(p @ q) * p
        tr = r - float(p @ r) * p
        cosang = float(tq @ tr) / math.sqrt(float(tq @ tq) * float(tr @ tr))
        return math.acos(max(-1.0, min(1.0, cosang)))

    excess = (
        corner(va, vb, vc) + corner(vb, vc, va) + corner(vc, va, vb) - math.pi
    )
    triple = float(va @ cross_bc)
    return -excess if triple > 0.0 else excess


def closed_form_one_photon(theta1: float, theta2: float) -> PhaseReport:
    """Analytic phase report for the standard interferometer states.

    Evaluates the closed forms

        phi_m   = +pi/2 for cos(2*theta1) >= 0, else -pi/2
        gamma   = 2*atan(tan(theta1)/tan(theta2))    (+pi on the second branch)
        phi_f   = 2*atan(tan(theta1)/tan(theta2)) + pi/2
        p       = sin^2(theta1)*cos^2(theta2) + cos^2(theta1)*sin^2(theta2)

    with atan ranging over (-pi/2, pi/2].  The fringe visibility after
    post-selection is identically 1 because the two analyzer overlaps are
    balanced.  Raises InvalidAngle for theta2 at 0 or pi where the analyzer
    is orthogonal to one decomposition and tan(theta2) vanishes.
    """
    if abs(math.sin(theta2)) < 1e-12:
        raise InvalidAngle("theta2 must not be a multiple of pi")
    s1, c1 = math.sin(theta1), math.cos(theta1)
    s2, c2 = math.sin(theta2), math.cos(theta2)
    cos_2t1 = math.cos(2.0 * theta1)

    half = math.atan(math.tan(theta1) / math.tan(theta2))
    gamma = 2.0 * half if cos_2t1 >= 0.0 else 2.0 * half + math.pi
    phi_m = math.pi / 2 if cos_2t1 >= 0.0 else -math.pi / 2
    phi_f = 2.0 * half + math.pi / 2
    p = (s1 * c2) ** 2 + (c1 * s2) ** 2

    overlap_a = complex(-s1 * c2, c1 * s2)
    overlap_b = complex(c1 * s2, -s1 * c2)
    return PhaseReport(
        visibility_m=abs(cos_2t1),
        phase_m=phi_m,
        success_probability=p,
        visibility_f=1.0,
        phase_f=phi_f,
        geometric=gamma,
        solid_angle=wrap_angle(2.0 * gamma, 2.0 * _TWO_PI),
        overlap_a=overlap_a,
        overlap_b=overlap_b,
    )


def setup_phase_report(theta1: float, theta2: float) -> PhaseReport:
    """Phase report computed through the general gauge-invariant pipeline.

    Builds the four setup states and derives every quantity from inner
    products alone; no closed forms are used.  Raises DegenerateOverlap where
    a phase is undefined (e.g. the relative phase at theta1 = +-pi/4, where
    the two arm states are orthogonal).
    """
    _, psi_a, psi_b, psi2 = prepare_setup_states(SetupConfig(theta1, theta2))
    p, v_f, phi_f = postselect_stats(psi_a, psi_b, psi2)
    phi_m = relative_phase(psi_a, psi_b)
    gamma = pancharatnam_phase(psi_a, psi_b, psi2)
    omega = signed_solid_angle(to_stokes(psi_a), to_stokes(psi_b), to_stokes(psi2))
    return PhaseReport(
        visibility_m=abs(inner(psi_b, psi_a)),
        phase_m=phi_m,
        success_probability=p,
        visibility_f=v_f,
        phase_f=phi_f,
        geometric=gamma,
        solid_angle=omega,
        overlap_a=inner(psi2, psi_a),
        overlap_b=inner(psi2, psi_b),
    )
