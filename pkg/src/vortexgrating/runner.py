"""Turn a :class:`~vortexgrating.config.Scenario` into result tables."""

from __future__ import annotations

import time
from dataclasses import replace

import numpy as np

from . import __version__, kernels
from .config import Scenario
from .diffraction import (
    detuning_map,
    length_sweep,
    spatial_maps,
    zero_order_share,
)
from .errors import SimulationError
from .fields import vortex_amplitude
from .output import Axis, ResultTable


def _metadata(s: Scenario) -> dict:
    return {
        "scenario": s.name,
        "kind": s.kind,
        "coefficients": s.flags.coefficients.value,
        "sign": s.flags.sign.value,
        "vortex_square": s.flags.vortex.value,
        "code_version": __version__,
        "kernel_backend": kernels.BACKEND,
    }


def _map_tables(s: Scenario, threads: int):
    maps = spatial_maps(s.atom, s.detuning, s.beam, s.sw, s.diffraction, s.grid, s.flags, threads)
    ax = s.grid.axis()
    rows = Axis("y1_over_w", "w", ax)
    cols = Axis("x1_over_w", "w", ax)
    return [
        ResultTable(f"{s.name}_order{n}", rows, cols, maps[n], {"order": n})
        for n in range(maps.shape[0])
    ]


def _detuning_tables(s: Scenario, threads: int):
    half, npts = s.sweep.detuning_half_range, s.sweep.detuning_points
    axis = np.linspace(-half, half, npts)
    # single vortex term (winding l1) at the configured point
    x1 = s.sweep.point_r * s.beam.waist * np.cos(s.sweep.point_phi)
    y1 = s.sweep.point_r * s.beam.waist * np.sin(s.sweep.point_phi)
    single = replace(s.beam, l2=s.beam.l1, omega=s.beam.omega / 2)
    omega_lg = vortex_amplitude(single, x1, y1)
    maps = detuning_map(
        s.atom, s.detuning, omega_lg, s.sw, s.diffraction, axis, axis, s.flags, threads
    )
    rows = Axis("delta_lg", "gamma", axis)
    cols = Axis("delta_c", "gamma", axis)
    return [
        ResultTable(f"{s.name}_order{n}", rows, cols, maps[n], {"order": n})
        for n in range(maps.shape[0])
    ]


def _length_tables(s: Scenario):
    lengths = np.linspace(0.0, s.sweep.length_max, s.sweep.length_points)
    windings = s.sweep.windings
    curves = np.stack(
        [
            length_sweep(
                s.atom,
                s.detuning,
                replace(s.beam, l1=l, l2=-l),
                s.sw,
                s.diffraction,
                lengths,
                s.sweep.point_r,
                s.sweep.point_phi,
                s.flags,
            )
            for l in windings
        ],
        axis=1,
    )  # (L, winding, order)
    rows = Axis("length_over_xi", "xi", lengths)
    cols = Axis("winding_l", "1", np.asarray(windings, dtype=float))
    tables = [
        ResultTable(f"{s.name}_order{n}", rows, cols, curves[:, :, n], {"order": n})
        for n in range(curves.shape[2])
    ]
    tables.append(
        ResultTable(f"{s.name}_zero_order_share", rows, cols, zero_order_share(curves), {})
    )
    return tables


def run_scenario(s: Scenario, threads: int = 1) -> list[ResultTable]:
    start = time.perf_counter()
    try:
        if s.kind == "map":
            tables = _map_tables(s, threads)
        elif s.kind == "detuning":
            tables = _detuning_tables(s, threads)
        else:
            tables = _length_tables(s)
    except SimulationError as exc:
        # keep the exception type (and its fields), prefix the scenario
        exc.args = (f"scenario {s.name}: {exc}",)
        exc.scenario = s.name
        raise
    elapsed = time.perf_counter() - start
    meta = _metadata(s)
    for t in tables:
        t.metadata = {**meta, **t.metadata, "nan_count": t.nan_count, "runtime_s": elapsed}
    return tables
