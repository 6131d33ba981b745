"""Probe diffraction from an electromagnetically induced grating shaped by a
standing-wave coupling field and a composite optical vortex."""

__version__ = "0.1.0"

from .atomic import (  # noqa: E402
    AmplitudeState,
    AtomParams,
    ChiExpansion,
    CoefficientSource,
    DriveConfig,
    SignConvention,
    VortexSquare,
    chi_expansion,
    chi_full,
    evolved_chi,
    steady_state_chi,
    time_evolve,
)
from .diffraction import (  # noqa: E402
    DiffractionConfig,
    Flags,
    full_angular_pattern,
    length_sweep,
    order_amplitude_closed_form,
    order_amplitude_quadrature,
    order_intensity,
    spatial_map,
    spatial_maps,
    transmission,
)
from .fields import CompositeVortex, GridSpec, StandingWave  # noqa: E402
from .kernels import BACKEND  # noqa: E402

__all__ = [
    "AmplitudeState",
    "AtomParams",
    "BACKEND",
    "ChiExpansion",
    "CoefficientSource",
    "CompositeVortex",
    "DiffractionConfig",
    "DriveConfig",
    "Flags",
    "GridSpec",
    "SignConvention",
    "StandingWave",
    "VortexSquare",
    "chi_expansion",
    "chi_full",
    "evolved_chi",
    "full_angular_pattern",
    "length_sweep",
    "order_amplitude_closed_form",
    "order_amplitude_quadrature",
    "order_intensity",
    "spatial_map",
    "spatial_maps",
    "steady_state_chi",
    "time_evolve",
    "transmission",
]
