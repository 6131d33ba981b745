"""Standing-wave coupling field and composite Laguerre-Gaussian vortex.

Transverse coordinates (x1, y1) are in units of the vortex waist when the
waist is 1 (the default); the azimuth uses the atan2 branch (-pi, pi].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError, WindingMismatch

NODE_SNAP = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class StandingWave:
    omega_c0: float = 0.5
    lambda_x: float = 1.0

    def __post_init__(self):
        if self.omega_c0 < 0:
            raise ValidationError(f"omega_c0 must be >= 0, got {self.omega_c0}")
        if not self.lambda_x > 0:
            raise ValidationError(f"lambda_x must be > 0, got {self.lambda_x}")


@dataclass(frozen=True)
class CompositeVortex:
    omega: float = 1.5
    waist: float = 1.0
    l1: int = 0
    l2: int = 0

    def __post_init__(self):
        if not self.waist > 0:
            raise ValidationError(f"waist must be > 0, got {self.waist}")
        for name in ("l1", "l2"):
            v = getattr(self, name)
            if int(v) != v:
                raise ValidationError(f"{name} must be an integer, got {v}")


@dataclass(frozen=True)
class GridSpec:
    half_extent: float = 3.0
    points_per_axis: int = 301

    def __post_init__(self):
        if not self.half_extent > 0:
            raise ValidationError(f"half_extent must be > 0, got {self.half_extent}")
        n = self.points_per_axis
        if int(n) != n or n < 3 or n % 2 == 0:
            raise ValidationError(f"points_per_axis must be an odd integer >= 3, got {n}")

    def axis(self, waist: float = 1.0) -> np.ndarray:
        """Node coordinates along one axis; the middle node is exactly 0."""
        half = self.points_per_axis // 2
        return np.arange(-half, half + 1) * (self.half_extent * waist / half)

    def mesh(self, waist: float = 1.0):
        """(x1, y1) arrays in row-major order: row index follows y1, column x1."""
        ax = self.axis(waist)
        return np.meshgrid(ax, ax, indexing="xy")


def sw_amplitude(sw: StandingWave, x_over_period):
    return sw.omega_c0 * np.sin(np.pi * np.asarray(x_over_period, dtype=float))


def _radial(rho, l):
    # 0**0 == 1 keeps the l = 0 Gaussian continuous on the axis
    return np.power(rho, abs(int(l)))


def vortex_amplitude(beam: CompositeVortex, x1, y1):
    x1 = np.asarray(x1, dtype=float)
    y1 = np.asarray(y1, dtype=float)
    rho = np.hypot(x1, y1) / beam.waist
    phi = np.arctan2(y1, x1)
    envelope = beam.omega * np.exp(-rho * rho)
    out = envelope * (
        _radial(rho, beam.l1) * np.exp(1j * beam.l1 * phi)
        + _radial(rho, beam.l2) * np.exp(1j * beam.l2 * phi)
    )
    return out if out.ndim else complex(out)


def equal_oam_amplitude(beam: CompositeVortex, x1, y1):
    """Real amplitude 2 Omega exp(-r^2/w^2) (r/w)^|l| cos(l phi) for l1 = -l2 = l."""
    if beam.l1 != -beam.l2:
        raise WindingMismatch(f"need l1 == -l2, got l1={beam.l1}, l2={beam.l2}")
    x1 = np.asarray(x1, dtype=float)
    y1 = np.asarray(y1, dtype=float)
    rho = np.hypot(x1, y1) / beam.waist
    phi = np.arctan2(y1, x1)
    angular = np.cos(beam.l1 * phi)
    # cos(l*phi) on a nodal ray is only zero to rounding; make it exact
    angular = np.where(np.abs(angular) <= NODE_SNAP * (abs(beam.l1) + 1), 0.0, angular)
    out = 2.0 * beam.omega * np.exp(-rho * rho) * _radial(rho, beam.l1) * angular
    return out if out.ndim else float(out)


def polar_point(r_over_w: float, phi: float, waist: float = 1.0):
    return r_over_w * waist * np.cos(phi), r_over_w * waist * np.sin(phi)
