"""Probe susceptibility of the four-level N-type system.

Levels: ground |1>, |2>; excited |3>, |4>. The probe drives 1-3, the vortex
beam 2-3 and the standing-wave coupling field 2-4. All rates, detunings and
Rabi frequencies are in units of the excited-state decay rate gamma, and the
susceptibility is dimensionless (the N mu^2 / (2 eps0 hbar) prefactor is
absorbed into the interaction-length unit).

Three routes to the same number are provided and checked against each other:
the closed form (:func:`chi_full`), a direct linear solve of the amplitude
equations at their fixed point (:func:`steady_state_chi`) and explicit RK4
integration of the amplitude equations (:func:`time_evolve`).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import SingularDenominator, SingularSystem, StepTooLarge, ValidationError

DEFAULT_GAMMA2 = 1e-3
WEAK_PROBE_LIMIT = 0.1
POLE_TOL = 1e-12
MAX_STEP = 1e-2


class SignConvention(enum.Enum):
    """Overall sign of the closed-form susceptibility.

    ``AS_PRINTED`` is the unnegated closed form, which gives gain
    for a resonant two-level atom. ``PHYSICAL`` is its negation and equals the
    steady-state amplitude ratio a3/Omega_p.
    """

    PHYSICAL = "physical"
    AS_PRINTED = "as-printed"


class CoefficientSource(enum.Enum):
    REDERIVED = "rederived"
    AS_PRINTED = "as-printed"


class VortexSquare(enum.Enum):
    """How the vortex Rabi frequency enters squared.

    ``HERMITIAN`` uses |Omega_LG|^2 (conjugate coupling in the |2> equation);
    ``ANALYTIC`` uses Omega_LG^2 with no conjugation anywhere. They coincide
    for real Omega_LG.
    """

    HERMITIAN = "hermitian"
    ANALYTIC = "analytic"


@dataclass(frozen=True)
class AtomParams:
    gamma3: float = 1.0
    gamma4: float = 1.0
    gamma2: float = DEFAULT_GAMMA2

    def __post_init__(self):
        if not self.gamma3 > 0:
            raise ValidationError(f"gamma3 must be > 0, got {self.gamma3}")
        if not self.gamma4 > 0:
            raise ValidationError(f"gamma4 must be > 0, got {self.gamma4}")
        if not self.gamma2 >= 0:
            raise ValidationError(f"gamma2 must be >= 0, got {self.gamma2}")


@dataclass(frozen=True)
class DriveConfig:
    """Detunings and local field amplitudes at one spatial point."""

    delta_p: float = 0.0
    delta_c: float = 0.0
    delta_lg: float = 0.0
    omega_p: float = 1e-3
    omega_c: float = 0.0
    omega_lg: complex = 0.0

    def __post_init__(self):
        if self.omega_c < 0:
            raise ValidationError(f"omega_c must be >= 0, got {self.omega_c}")
        if abs(self.omega_p) > WEAK_PROBE_LIMIT:
            warnings.warn(
                f"omega_p={self.omega_p} exceeds the weak-probe limit {WEAK_PROBE_LIMIT}",
                stacklevel=3,
            )

    def with_fields(self, omega_c: float | None = None, omega_lg: complex | None = None):
        return DriveConfig(
            self.delta_p,
            self.delta_c,
            self.delta_lg,
            self.omega_p,
            self.omega_c if omega_c is None else omega_c,
            self.omega_lg if omega_lg is None else omega_lg,
        )


@dataclass(frozen=True)
class Denominators:
    a2: complex
    a3: complex
    a4: complex


@dataclass(frozen=True)
class ChiExpansion:
    chi1: complex
    chi3: complex


@dataclass(frozen=True)
class AmplitudeState:
    a1: complex = 1.0
    a2: complex = 0.0
    a3: complex = 0.0
    a4: complex = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.a3, self.a4], dtype=np.complex128)

    @classmethod
    def from_array(cls, a) -> AmplitudeState:
        return cls(*(complex(v) for v in a))

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.as_array()) ** 2))


def denominators(atom: AtomParams, drive: DriveConfig) -> Denominators:
    two_photon = drive.delta_p - drive.delta_lg
    return Denominators(
        a2=complex(two_photon, atom.gamma2),
        a3=complex(drive.delta_p, atom.gamma3 / 2),
        a4=complex(two_photon + drive.delta_c, atom.gamma4 / 2),
    )


def vortex_square(omega_lg, convention: VortexSquare = VortexSquare.HERMITIAN):
    """Omega_LG squared under ``convention``; works on scalars and arrays."""
    if convention is VortexSquare.HERMITIAN:
        return np.abs(omega_lg) ** 2
    return omega_lg * omega_lg


def chi_full_values(a2, a3, a4, lg_sq, c_sq, sign_convention: SignConvention):
    """Array form of :func:`chi_full`; NaN where the denominator is a pole."""
    den = a4 * (a2 * a3 - lg_sq) - a3 * c_sq
    pole = np.abs(den) <= POLE_TOL
    chi = (a2 * a4 - c_sq) / np.where(pole, np.nan, den)
    if sign_convention is SignConvention.PHYSICAL:
        return -chi
    return chi


def chi_full(
    atom: AtomParams,
    drive: DriveConfig,
    sign_convention: SignConvention = SignConvention.PHYSICAL,
    vortex: VortexSquare = VortexSquare.HERMITIAN,
) -> complex:
    d = denominators(atom, drive)
    lg_sq = vortex_square(complex(drive.omega_lg), vortex)
    c_sq = drive.omega_c**2
    den = d.a4 * (d.a2 * d.a3 - lg_sq) - d.a3 * c_sq
    if abs(den) <= POLE_TOL:
        raise SingularDenominator(f"|denominator| = {abs(den):.3e} at {drive}")
    chi = (d.a2 * d.a4 - c_sq) / den
    if sign_convention is SignConvention.PHYSICAL:
        return -chi
    return chi


def expansion_coefficients(
    a2, a3, a4, lg_sq, source: CoefficientSource, sign_convention: SignConvention
):
    """Array-friendly chi1/chi3 from denominators and the squared vortex field.

    Cells where the two-photon denominator A2*A3 - Omega_LG^2 is within
    ``POLE_TOL`` of zero come back as NaN; callers decide whether to raise.
    """
    a2, a3, a4, lg_sq = np.broadcast_arrays(
        np.asarray(a2, dtype=np.complex128),
        np.asarray(a3, dtype=np.complex128),
        np.asarray(a4, dtype=np.complex128),
        np.asarray(lg_sq, dtype=np.complex128),
    )
    d = a2 * a3 - lg_sq
    pole = np.abs(d) <= POLE_TOL
    d = np.where(pole, np.nan, d)
    with np.errstate(invalid="ignore"):  # NaN poles propagate quietly
        if source is CoefficientSource.REDERIVED:
            chi1 = -a2 / d
            chi3 = -lg_sq / (a4 * d * d)
            if sign_convention is SignConvention.AS_PRINTED:
                chi1, chi3 = -chi1, -chi3
        else:
            chi1 = -a3 / d
            chi3 = -lg_sq / (a4 * np.abs(d) ** 2)
    # exact zero where the vortex field vanishes, even at a pole
    chi3 = np.where(lg_sq == 0, 0.0, chi3)
    return chi1, chi3


def chi_expansion(
    atom: AtomParams,
    drive: DriveConfig,
    coefficient_source: CoefficientSource = CoefficientSource.REDERIVED,
    sign_convention: SignConvention = SignConvention.PHYSICAL,
    vortex: VortexSquare = VortexSquare.HERMITIAN,
) -> ChiExpansion:
    """Linear and cross-Kerr parts, chi = chi1 + Omega_c^2 * chi3 + O(Omega_c^4).

    ``REDERIVED`` gives the exact Taylor coefficients of :func:`chi_full`
    under ``sign_convention``. ``AS_PRINTED`` returns the alternative
    coefficient formulas (A3 in place of A2, |D|^2 in place of D^2) unchanged,
    ignoring ``sign_convention``; they reproduce some figure features the
    exact coefficients do not.
    """
    d = denominators(atom, drive)
    lg_sq = vortex_square(complex(drive.omega_lg), vortex)
    chi1, chi3 = expansion_coefficients(
        d.a2, d.a3, d.a4, lg_sq, coefficient_source, sign_convention
    )
    chi1, chi3 = complex(chi1), complex(chi3)
    if math.isnan(chi1.real):
        raise SingularDenominator(f"A2*A3 - Omega_LG^2 vanishes at {drive}")
    return ChiExpansion(chi1, chi3)


def _coupling_matrix(atom, drive, vortex):
    # a' = i * H a with H non-Hermitian through the decay terms on the diagonal
    d = denominators(atom, drive)
    lg = complex(drive.omega_lg)
    lg_back = lg.conjugate() if vortex is VortexSquare.HERMITIAN else lg
    wp, wc = drive.omega_p, drive.omega_c
    return np.array(
        [
            [0, 0, wp, 0],
            [0, d.a2, lg_back, wc],
            [wp, lg, d.a3, 0],
            [0, wc, 0, d.a4],
        ],
        dtype=np.complex128,
    )


def steady_state_chi(
    atom: AtomParams, drive: DriveConfig, vortex: VortexSquare = VortexSquare.HERMITIAN
) -> complex:
    """a3 per unit probe at the fixed point of the amplitude equations, a1 = 1."""
    h = _coupling_matrix(atom, drive, vortex)
    block = h[1:, 1:]
    sv = np.linalg.svd(block, compute_uv=False)
    if sv[-1] <= POLE_TOL * max(sv[0], 1.0):
        raise SingularSystem(f"steady-state system singular (sigma_min={sv[-1]:.3e})")
    # unit probe: the right-hand side is -(0, 1, 0)
    a2, a3, a4 = np.linalg.solve(block, np.array([0, -1, 0], dtype=np.complex128))
    return complex(a3)


def generator(atom: AtomParams, drive: DriveConfig, vortex: VortexSquare = VortexSquare.HERMITIAN):
    """Matrix G with da/dt = G a for the amplitude vector (a1, a2, a3, a4)."""
    return 1j * _coupling_matrix(atom, drive, vortex)


def relaxation_time(
    atom: AtomParams, drive: DriveConfig, vortex: VortexSquare = VortexSquare.HERMITIAN
) -> float:
    """1 / slowest decay rate of the (a2, a3, a4) block, in units of 1/gamma."""
    rates = -np.linalg.eigvals(1j * _coupling_matrix(atom, drive, vortex)[1:, 1:]).real
    slowest = rates.min()
    return math.inf if slowest <= 0 else 1.0 / slowest


def time_evolve(
    atom: AtomParams,
    drive: DriveConfig,
    initial: AmplitudeState,
    t_final: float,
    dt: float = MAX_STEP,
    vortex: VortexSquare = VortexSquare.HERMITIAN,
) -> AmplitudeState:
    """Fixed-step RK4 integration of the amplitude equations up to ``t_final``.

    The step is shrunk (never grown) so that an integer number of steps lands
    exactly on ``t_final``.
    """
    if not 0 < dt <= MAX_STEP:
        raise StepTooLarge(f"dt must lie in (0, {MAX_STEP}], got {dt}")
    if t_final < 0:
        raise ValueError(f"t_final must be >= 0, got {t_final}")
    nsteps = math.ceil(t_final / dt - 1e-9)
    if nsteps == 0:
        return initial
    h = t_final / nsteps
    gen = np.ascontiguousarray(generator(atom, drive, vortex))
    out = kernels.rk4_propagate(gen, initial.as_array(), h, nsteps)
    return AmplitudeState.from_array(out)


def evolved_chi(state: AmplitudeState, omega_p: float) -> complex:
    """Susceptibility read off an evolved state, a3 / (Omega_p a1).

    Dividing by a1 removes the slow probe-induced depletion of the ground
    state, which the steady-state solve excludes by pinning a1 = 1.
    """
    return complex(state.a3) / (omega_p * complex(state.a1))
