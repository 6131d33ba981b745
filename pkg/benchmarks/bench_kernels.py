"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from vortexgrating import _kernels_py
from vortexgrating.atomic import AmplitudeState, AtomParams, DriveConfig, generator
from vortexgrating.config import PRESETS
from vortexgrating.diffraction import local_coefficients, local_vortex

try:
    from vortexgrating import _kernels as compiled
except ImportError:
    compiled = None


def fig4_cells():
    s = PRESETS["fig4"]
    x1, y1 = s.grid.mesh(s.beam.waist)
    chi1, chi3 = local_coefficients(s.atom, s.detuning, local_vortex(s.beam, x1, y1))
    return (
        np.ascontiguousarray(chi1.ravel()),
        np.ascontiguousarray(chi3.ravel()),
        s.diffraction.length_over_xi,
        s.sw.omega_c0**2,
        s.diffraction.max_order,
    )


def rk4_case():
    drive = DriveConfig(0.0, -1.0, 2.0, omega_p=1e-3, omega_c=0.5, omega_lg=1.1)
    gen = np.ascontiguousarray(generator(AtomParams(), drive))
    return gen, AmplitudeState().as_array(), 1e-2, 20000


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled is None:
        print("compiled extension not built; only the fallback is available")
        return
    cases = {
        "grating_intensities (fig4, 301x301 cells)": ("grating_intensities", fig4_cells()),
        "rk4_propagate (20000 steps)": ("rk4_propagate", rk4_case()),
    }
    print(f"{'kernel':45s} {'cython s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for label, (name, case) in cases.items():
        fast = best(lambda: getattr(compiled, name)(*case), args.repeat)
        slow = best(lambda: getattr(_kernels_py, name)(*case), args.repeat)
        a = np.asarray(getattr(compiled, name)(*case))
        b = np.asarray(getattr(_kernels_py, name)(*case))
        agree = np.allclose(a, b, rtol=1e-10, atol=0, equal_nan=True)
        print(f"{label:45s} {fast:10.4f} {slow:10.4f} {slow / fast:7.1f}x  agree={agree}")


if __name__ == "__main__":
    main()
