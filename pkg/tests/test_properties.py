import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from vortexgrating.atomic import AtomParams, DriveConfig, SignConvention, chi_full, steady_state_chi
from vortexgrating.config import PRESETS, dump_config, loads_config
from vortexgrating.diffraction import (
    DiffractionConfig,
    expanded_chi_profile,
    order_amplitude_closed_form,
    order_amplitude_quadrature,
)
from vortexgrating.fields import CompositeVortex, vortex_amplitude
from dataclasses import replace

detuning = st.floats(-3, 3)
field = st.floats(0, 1.5)


@settings(max_examples=60, deadline=None)
@given(detuning, detuning, detuning, st.floats(0, 0.5), field)
def test_sign_conventions_are_negatives(dp, dc, dlg, wc, wlg):
    atom = AtomParams()
    drive = DriveConfig(dp, dc, dlg, omega_c=wc, omega_lg=wlg)
    assert chi_full(atom, drive, SignConvention.PHYSICAL) == -chi_full(atom, drive, SignConvention.AS_PRINTED)


@settings(max_examples=60, deadline=None)
@given(detuning, detuning, detuning, st.floats(0, 0.5), field, st.floats(-math.pi, math.pi))
def test_closed_forms_match_linear_solve(dp, dc, dlg, wc, wlg, phase):
    atom = AtomParams()
    drive = DriveConfig(dp, dc, dlg, omega_c=wc, omega_lg=wlg * complex(math.cos(phase), math.sin(phase)))
    full = chi_full(atom, drive)
    assert abs(full - steady_state_chi(atom, drive)) <= 1e-9 * max(1.0, abs(full))


@settings(max_examples=40, deadline=None)
@given(
    st.floats(-0.05, 0.05),
    st.floats(0, 0.05),
    st.floats(-3, 3),
    st.floats(0, 3),
    st.floats(0, 0.5),
    st.integers(0, 3),
)
def test_closed_form_matches_quadrature(r1, i1, r3, i3, wc0, n):
    cfg = DiffractionConfig(length_over_xi=50.0)
    chi1, chi3 = complex(r1, i1), complex(r3, i3)
    closed = order_amplitude_closed_form(chi1, chi3, cfg, n, wc0)
    quad = order_amplitude_quadrature(expanded_chi_profile(chi1, chi3, wc0), cfg, n)
    # exact zeros on the closed-form side meet quadrature rounding noise
    size = math.exp(-50.0 * i1)
    assert abs(closed - quad) <= 1e-8 * max(abs(closed), 1e-30) + 1e-14 * size


@settings(max_examples=40, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.floats(0.01, 3), st.floats(-math.pi, math.pi))
def test_vortex_intensity_rotation(l1, l2, r, phi):
    if l1 == l2:
        return
    beam = CompositeVortex(omega=1.0, l1=l1, l2=l2)
    step = 2 * math.pi / abs(l1 - l2)
    a = abs(vortex_amplitude(beam, r * math.cos(phi), r * math.sin(phi))) ** 2
    b = abs(vortex_amplitude(beam, r * math.cos(phi + step), r * math.sin(phi + step))) ** 2
    assert abs(a - b) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(
    st.floats(-3, 3, allow_subnormal=False),
    st.floats(0, 1, allow_subnormal=False),
    st.integers(-6, 6),
    st.floats(0.1, 4),
    st.lists(st.integers(-4, 4), min_size=1, max_size=4),
    st.sampled_from(["map", "detuning", "length"]),
)
def test_config_round_trip(dp, wc0, l1, extent, windings, kind):
    base = PRESETS["custom"]
    s = replace(
        base,
        kind=kind,
        detuning=replace(base.detuning, delta_p=dp),
        sw=replace(base.sw, omega_c0=wc0),
        beam=replace(base.beam, l1=l1),
        grid=replace(base.grid, half_extent=extent),
        sweep=replace(base.sweep, windings=tuple(windings)),
    )
    assert loads_config(dump_config(s)) == s
