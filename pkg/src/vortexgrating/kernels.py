"""Kernel backend selected at import: compiled Cython if built, else numpy."""

try:
    from . import _kernels as _impl
except ImportError:  # extension not built
    from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
rk4_propagate = _impl.rk4_propagate
bessel_series = _impl.bessel_series
scaled_bessel_orders = _impl.scaled_bessel_orders
grating_intensities = _impl.grating_intensities

__all__ = [
    "BACKEND",
    "rk4_propagate",
    "bessel_series",
    "scaled_bessel_orders",
    "grating_intensities",
]
