"""Grating transmission and Fraunhofer diffraction orders.

The susceptibility across one grating period is chi(x) = chi1 + Omega_c0^2
sin^2(pi x) chi3, with x the position in units of the period. Order n of the
far field is the n-th Fourier coefficient of T(x) = exp(i chi(x) L), and the
Jacobi-Anger expansion turns it into

    E_n = i^n exp(i L (chi1 + chi3 Omega_c0^2 / 2)) J_n(-L chi3 Omega_c0^2 / 2).

The grating period is the overall amplitude unit, so I_n = |E_n|^2 is
normalised to I_0 = 1 for a transparent medium. The closed form is
cross-checked by Gauss-Legendre quadrature of the Fourier integral.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .atomic import (
    AtomParams,
    CoefficientSource,
    DriveConfig,
    SignConvention,
    VortexSquare,
    chi_full_values,
    denominators,
    expansion_coefficients,
    vortex_square,
)
from .errors import (
    ArgumentTooLarge,
    QuadratureNonConvergent,
    TooManySingularCells,
    TransmissionOverflow,
    ValidationError,
)
from .fields import CompositeVortex, GridSpec, StandingWave, equal_oam_amplitude, polar_point, vortex_amplitude

SERIES_GUARD = 40.0
SCALED_GUARD = 1e5
EXP_LIMIT = 700.0
GL_NODES = 64
GL_PANELS = 8
QUAD_RTOL = 1e-8
MAX_NAN_FRACTION = 0.01


@dataclass(frozen=True)
class DiffractionConfig:
    period_over_wavelength: float = 4.0
    slit_count: int = 5
    length_over_xi: float = 50.0
    max_order: int = 3

    def __post_init__(self):
        if not self.period_over_wavelength > 0:
            raise ValidationError(
                f"period_over_wavelength must be > 0, got {self.period_over_wavelength}"
            )
        if int(self.slit_count) != self.slit_count or self.slit_count < 1:
            raise ValidationError(f"slit_count must be a positive integer, got {self.slit_count}")
        if not self.length_over_xi >= 0:
            raise ValidationError(f"length_over_xi must be >= 0, got {self.length_over_xi}")
        if int(self.max_order) != self.max_order or self.max_order < 0:
            raise ValidationError(f"max_order must be a non-negative integer, got {self.max_order}")
        if self.max_order > math.floor(self.period_over_wavelength):
            raise ValidationError(
                f"max_order={self.max_order} needs |sin theta| > 1 for "
                f"period_over_wavelength={self.period_over_wavelength}"
            )


@dataclass(frozen=True)
class OrderSpectrum:
    """Intensities of orders 0..max_order.

    ``zero_order_share`` is I_0 over the power in all orders |n| <= max_order,
    counting each +-n pair twice (the grating is symmetric, I_-n = I_n).
    """

    intensities: tuple[float, ...]
    zero_order_share: float


def transmission(chi, length_over_xi):
    """exp(-Im(chi) L) exp(i Re(chi) L)."""
    chi = np.asarray(chi, dtype=np.complex128)
    if np.any(chi.imag * length_over_xi < -EXP_LIMIT):
        raise TransmissionOverflow("Im(chi) * L below -700: unphysical gain")
    out = np.exp(-chi.imag * length_over_xi) * np.exp(1j * chi.real * length_over_xi)
    return out if out.ndim else complex(out)


def bessel_j(n: int, z: complex) -> complex:
    """J_n(z) for integer n >= 0 and complex z by the ascending power series."""
    if n < 0:
        raise ValueError("order must be non-negative")
    if abs(z) > SERIES_GUARD:
        raise ArgumentTooLarge(f"|z| = {abs(z):.3g} exceeds the series guard {SERIES_GUARD}")
    return complex(kernels.bessel_series(int(n), complex(z)))


def bessel_j_signed(n: int, z: complex) -> complex:
    """J_n(z) for any integer n via J_{-n} = (-1)^n J_n."""
    value = bessel_j(abs(n), z)
    return -value if n < 0 and n % 2 else value


def scaled_bessel_orders(z: complex, max_order: int) -> np.ndarray:
    """exp(-|Im z|) J_n(z) for n = 0..max_order.

    Uses the power series for |z| <= 12 and the trapezoid rule on the
    generating integral beyond, where the series loses accuracy to
    cancellation. The scaling keeps large imaginary arguments finite.
    """
    if abs(z) > SCALED_GUARD:
        raise ArgumentTooLarge(f"|z| = {abs(z):.3g} exceeds {SCALED_GUARD:g}")
    return np.asarray(kernels.scaled_bessel_orders(complex(z), int(max_order)))


def modulation_argument(chi3: complex, length_over_xi: float, omega_c0: float) -> complex:
    return -0.5 * length_over_xi * chi3 * omega_c0**2


def order_amplitude_closed_form(
    chi1: complex, chi3: complex, cfg: DiffractionConfig, n: int, omega_c0: float
) -> complex:
    L = cfg.length_over_xi
    z = modulation_argument(chi3, L, omega_c0)
    m = abs(int(n))
    scaled = scaled_bessel_orders(z, m)[m]
    # i L chi1 - i z plus the exp(|Im z|) undone from the scaled Bessel value
    expo = 1j * L * chi1 - 1j * z.real + (z.imag + abs(z.imag))
    if expo.real > EXP_LIMIT:
        raise TransmissionOverflow(f"order amplitude overflows (exponent {expo.real:.1f})")
    # E_{-n} = E_n: i^{-n} J_{-n} = i^n J_n
    return complex(1j**m * np.exp(expo) * scaled)


def order_intensity(
    chi1: complex, chi3: complex, cfg: DiffractionConfig, n: int, omega_c0: float
) -> float:
    return abs(order_amplitude_closed_form(chi1, chi3, cfg, n, omega_c0)) ** 2


def order_spectrum(
    chi1: complex, chi3: complex, cfg: DiffractionConfig, omega_c0: float
) -> OrderSpectrum:
    values = tuple(
        order_intensity(chi1, chi3, cfg, n, omega_c0) for n in range(cfg.max_order + 1)
    )
    total = values[0] + 2.0 * sum(values[1:])
    share = values[0] / total if total > 0 else math.nan
    return OrderSpectrum(values, share)


@lru_cache(maxsize=4)
def _panel_rule(panels: int):
    x, w = np.polynomial.legendre.leggauss(GL_NODES)
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _fourier_integral(chi_of_x, length, u, panels):
    x, w = _panel_rule(panels)
    t = np.asarray(transmission(chi_of_x(x), length))
    integrand = t * np.exp(-2j * np.pi * u * x)
    return np.sum(w * integrand), np.sum(w * np.abs(t))


def order_amplitude_quadrature(
    chi_of_x: Callable[[np.ndarray], np.ndarray], cfg: DiffractionConfig, n: float
) -> complex:
    """Fourier coefficient of T(x) over one period, exp(-2 pi i n x) phase.

    ``n`` may be non-integer (arbitrary diffraction angle). Returns the
    8-panel value after checking it against a 16-panel refinement.
    """
    coarse, _ = _fourier_integral(chi_of_x, cfg.length_over_xi, n, GL_PANELS)
    fine, l1 = _fourier_integral(chi_of_x, cfg.length_over_xi, n, 2 * GL_PANELS)
    # amplitudes far below the integrand's own size are judged on that size
    scale = max(abs(fine), 1e-6 * l1, 1e-300)
    if abs(coarse - fine) > QUAD_RTOL * scale:
        raise QuadratureNonConvergent(
            f"panel doubling moved the order-{n} amplitude by {abs(coarse - fine):.3e}"
        )
    return complex(coarse)


def expanded_chi_profile(chi1: complex, chi3: complex, omega_c0: float):
    """x -> chi1 + Omega_c(x)^2 chi3 with Omega_c(x) = Omega_c0 sin(pi x)."""

    def chi_of_x(x):
        return chi1 + (omega_c0 * np.sin(np.pi * x)) ** 2 * chi3

    return chi_of_x


def full_chi_profile(
    atom: AtomParams,
    drive: DriveConfig,
    omega_c0: float,
    sign_convention: SignConvention = SignConvention.PHYSICAL,
    vortex: VortexSquare = VortexSquare.HERMITIAN,
):
    """x -> unexpanded chi with the standing-wave amplitude at x."""
    d = denominators(atom, drive)
    lg_sq = vortex_square(complex(drive.omega_lg), vortex)

    def chi_of_x(x):
        c_sq = (omega_c0 * np.sin(np.pi * np.asarray(x))) ** 2
        return chi_full_values(d.a2, d.a3, d.a4, lg_sq, c_sq, sign_convention)

    return chi_of_x


def slit_envelope(u, slit_count: int):
    """sin^2(M pi u) / (M^2 sin^2(pi u)), equal to 1 at integer u."""
    u = np.asarray(u, dtype=float)
    den = slit_count * np.sin(np.pi * u)
    near_integer = np.abs(u - np.round(u)) < 1e-12
    safe = np.where(near_integer, 1.0, den)
    out = np.where(near_integer, 1.0, (np.sin(slit_count * np.pi * u) / safe) ** 2)
    return out if out.ndim else float(out)


def full_angular_pattern(
    chi1: complex,
    chi3: complex,
    cfg: DiffractionConfig,
    sin_theta_grid: Sequence[float],
    omega_c0: float,
) -> np.ndarray:
    s = np.asarray(sin_theta_grid, dtype=float)
    if np.any(np.abs(s) > 1):
        raise ValidationError("every sin(theta) must lie in [-1, 1]")
    u = cfg.period_over_wavelength * s
    profile = expanded_chi_profile(chi1, chi3, omega_c0)
    amp = np.array([order_amplitude_quadrature(profile, cfg, ui) for ui in u])
    return np.abs(amp) ** 2 * slit_envelope(u, cfg.slit_count)


# -- spatial structure --------------------------------------------------------


@dataclass(frozen=True)
class Flags:
    coefficients: CoefficientSource = CoefficientSource.REDERIVED
    sign: SignConvention = SignConvention.PHYSICAL
    vortex: VortexSquare = VortexSquare.HERMITIAN


DEFAULT_FLAGS = Flags()


def local_vortex(beam: CompositeVortex, x1, y1):
    if beam.l1 == -beam.l2:
        return equal_oam_amplitude(beam, x1, y1)
    return vortex_amplitude(beam, x1, y1)


def local_coefficients(atom: AtomParams, drive: DriveConfig, omega_lg, flags: Flags = DEFAULT_FLAGS):
    """chi1, chi3 arrays for an array of vortex amplitudes (NaN at poles)."""
    d = denominators(atom, drive)
    lg_sq = vortex_square(np.asarray(omega_lg), flags.vortex)
    return expansion_coefficients(d.a2, d.a3, d.a4, lg_sq, flags.coefficients, flags.sign)


def _intensities(chi1, chi3, cfg, omega_c0, threads):
    chi1 = np.ascontiguousarray(np.ravel(chi1), dtype=np.complex128)
    chi3 = np.ascontiguousarray(np.ravel(chi3), dtype=np.complex128)
    # the guard keeps the trapezoid node count bounded
    z = 0.5 * cfg.length_over_xi * omega_c0**2 * np.abs(chi3)
    too_large = z > SCALED_GUARD
    if too_large.any():
        chi1 = np.where(too_large, np.nan, chi1)
    L, c_sq, nmax = cfg.length_over_xi, omega_c0**2, cfg.max_order
    if threads <= 1 or chi1.size < 2 * threads:
        return kernels.grating_intensities(chi1, chi3, L, c_sq, nmax)
    bounds = np.linspace(0, chi1.size, threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(
            lambda ab: kernels.grating_intensities(
                chi1[ab[0]:ab[1]], chi3[ab[0]:ab[1]], L, c_sq, nmax
            ),
            zip(bounds[:-1], bounds[1:]),
        )
        return np.concatenate(list(parts), axis=0)


def order_intensities_at(
    atom: AtomParams,
    drive: DriveConfig,
    beam: CompositeVortex,
    sw: StandingWave,
    cfg: DiffractionConfig,
    x1,
    y1,
    flags: Flags = DEFAULT_FLAGS,
    threads: int = 1,
) -> np.ndarray:
    """Intensities of orders 0..max_order at arbitrary transverse points.

    Output shape is ``x1.shape + (max_order + 1,)``; singular cells are NaN.
    """
    x1, y1 = np.broadcast_arrays(np.asarray(x1, dtype=float), np.asarray(y1, dtype=float))
    omega_lg = local_vortex(beam, x1, y1)
    chi1, chi3 = local_coefficients(atom, drive, omega_lg, flags)
    out = _intensities(chi1, chi3, cfg, sw.omega_c0, threads)
    return out.reshape(x1.shape + (cfg.max_order + 1,))


def _check_nan_fraction(values):
    bad = int(np.isnan(values).any(axis=0).sum())
    total = values[0].size
    if bad > MAX_NAN_FRACTION * total:
        raise TooManySingularCells(bad, total)
    return bad


def spatial_maps(
    atom: AtomParams,
    drive: DriveConfig,
    beam: CompositeVortex,
    sw: StandingWave,
    cfg: DiffractionConfig,
    grid: GridSpec,
    flags: Flags = DEFAULT_FLAGS,
    threads: int = 1,
) -> np.ndarray:
    """Order maps over the transverse grid, shape (max_order + 1, ny, nx)."""
    x1, y1 = grid.mesh(beam.waist)
    values = order_intensities_at(atom, drive, beam, sw, cfg, x1, y1, flags, threads)
    maps = np.moveaxis(values, -1, 0)
    _check_nan_fraction(maps)
    return np.ascontiguousarray(maps)


def spatial_map(
    atom: AtomParams,
    drive: DriveConfig,
    beam: CompositeVortex,
    sw: StandingWave,
    cfg: DiffractionConfig,
    grid: GridSpec,
    n: int,
    flags: Flags = DEFAULT_FLAGS,
    threads: int = 1,
) -> np.ndarray:
    if not 0 <= n <= cfg.max_order:
        raise ValidationError(f"order {n} outside 0..{cfg.max_order}")
    return spatial_maps(atom, drive, beam, sw, cfg, grid, flags, threads)[n]


def length_sweep(
    atom: AtomParams,
    drive: DriveConfig,
    beam: CompositeVortex,
    sw: StandingWave,
    cfg: DiffractionConfig,
    lengths: Sequence[float],
    r_over_w: float = 1.0,
    phi: float = math.pi / 4,
    flags: Flags = DEFAULT_FLAGS,
) -> np.ndarray:
    """I_n(L) at one transverse point, shape (len(lengths), max_order + 1)."""
    lengths = np.asarray(lengths, dtype=float)
    if np.any(lengths < 0) or np.any(np.diff(lengths) < 0):
        raise ValidationError("lengths must be non-negative and ascending")
    x1, y1 = polar_point(r_over_w, phi, beam.waist)
    omega_lg = local_vortex(beam, x1, y1)
    chi1, chi3 = local_coefficients(atom, drive, omega_lg, flags)
    chi1 = np.full(lengths.size, complex(chi1))
    chi3 = np.full(lengths.size, complex(chi3))
    out = np.empty((lengths.size, cfg.max_order + 1))
    # L enters both the exponent and the Bessel argument, so go point by point
    for i, L in enumerate(lengths):
        out[i] = kernels.grating_intensities(
            chi1[i:i + 1], chi3[i:i + 1], float(L), sw.omega_c0**2, cfg.max_order
        )[0]
    return out


def zero_order_share(intensities: np.ndarray) -> np.ndarray:
    """I_0 / (I_0 + 2 sum_{n>=1} I_n) along the last axis."""
    intensities = np.asarray(intensities)
    total = intensities[..., 0] + 2.0 * intensities[..., 1:].sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return intensities[..., 0] / total


def detuning_map(
    atom: AtomParams,
    drive: DriveConfig,
    omega_lg: complex,
    sw: StandingWave,
    cfg: DiffractionConfig,
    delta_c_axis: Sequence[float],
    delta_lg_axis: Sequence[float],
    flags: Flags = DEFAULT_FLAGS,
    threads: int = 1,
) -> np.ndarray:
    """Order intensities over (Delta_LG rows, Delta_c columns) at fixed fields.

    Shape (max_order + 1, len(delta_lg_axis), len(delta_c_axis)).
    """
    dc, dlg = np.meshgrid(np.asarray(delta_c_axis, float), np.asarray(delta_lg_axis, float))
    two_photon = drive.delta_p - dlg
    a2 = two_photon + 1j * atom.gamma2
    a3 = complex(drive.delta_p, atom.gamma3 / 2)
    a4 = two_photon + dc + 1j * atom.gamma4 / 2
    lg_sq = vortex_square(complex(omega_lg), flags.vortex)
    chi1, chi3 = expansion_coefficients(a2, a3, a4, lg_sq, flags.coefficients, flags.sign)
    values = _intensities(chi1, chi3, cfg, sw.omega_c0, threads)
    maps = np.moveaxis(values.reshape(dc.shape + (cfg.max_order + 1,)), -1, 0)
    _check_nan_fraction(maps)
    return np.ascontiguousarray(maps)
