import math

import pytest

from vortexgrating.atomic import CoefficientSource, SignConvention, VortexSquare
from vortexgrating.config import PRESETS, dump_config, load_config, loads_config
from vortexgrating.errors import ParseError, ValidationError

# stated figure parameters, typed in independently of the preset table
FIGURE_PARAMS = {
    "fig2": dict(dp=0.0, omega=1.5, omega_c0=0.5, length=50.0),
    "fig3": dict(dp=0.0, dc=-1.0, dlg=2.0, omega=1.1, l1=4, l2=-1, length=50.0),
    "fig4": dict(dp=0.0, dc=0.0, dlg=0.0, omega=1.5, omega_c0=0.2, l1=0, l2=0, length=50.0),
    "fig5": dict(dp=0.0, dc=0.0, dlg=0.0, omega=1.5, omega_c0=0.2, l1=2, l2=-2, length=50.0),
    "fig6": dict(dc=-1.0, dlg=2.0, omega_c0=0.5, l1=0, l2=0),
    "fig7": dict(dc=-1.0, dlg=2.0, omega_c0=0.5, l1=2, l2=-2),
    "fig8": dict(dp=0.0, dc=0.0, dlg=0.0, point_r=1.0, point_phi=math.pi / 4),
}


@pytest.mark.parametrize("name", sorted(FIGURE_PARAMS))
def test_presets_match_figure_parameters(name):
    s = loads_config(f'scenario = "{name}"')
    fields = {
        "dp": s.detuning.delta_p,
        "dc": s.detuning.delta_c,
        "dlg": s.detuning.delta_lg,
        "omega": s.beam.omega,
        "omega_c0": s.sw.omega_c0,
        "l1": s.beam.l1,
        "l2": s.beam.l2,
        "length": s.diffraction.length_over_xi,
        "point_r": s.sweep.point_r,
        "point_phi": s.sweep.point_phi,
    }
    for key, value in FIGURE_PARAMS[name].items():
        assert fields[key] == value, key


def test_minimal_fig4_fully_populated():
    s = loads_config('scenario = "fig4"')
    assert s.kind == "map"
    assert s.grid.points_per_axis == 301 and s.grid.half_extent == 3.0
    assert s.diffraction.max_order == 2
    assert s.atom.gamma2 == 1e-3
    assert s.flags.coefficients is CoefficientSource.REDERIVED
    assert s.flags.sign is SignConvention.PHYSICAL
    assert s.flags.vortex is VortexSquare.HERMITIAN


def test_fig2_and_fig8_sweep_axes():
    s2 = loads_config('scenario = "fig2"')
    assert (s2.sweep.detuning_half_range, s2.sweep.detuning_points) == (3.0, 121)
    s8 = loads_config('scenario = "fig8"')
    assert (s8.sweep.length_max, s8.sweep.length_points) == (100.0, 501)


def test_max_order_beyond_grating():
    with pytest.raises(ValidationError, match="max_order"):
        loads_config('scenario = "custom"\n[diffraction]\nmax_order = 5\nperiod_over_wavelength = 4.0\n')


def test_empty_file():
    with pytest.raises(ValidationError, match="scenario missing"):
        loads_config("")


def test_parse_error_location():
    with pytest.raises(ParseError) as info:
        loads_config('scenario = "fig4"\n[beam]\nomega = = 2\n')
    assert info.value.line == 3
    assert info.value.column is not None


@pytest.mark.parametrize(
    "text",
    [
        'scenario = "fig4"\nfoo = 1\n',
        'scenario = "fig4"\n[beam]\nradius = 2.0\n',
        'scenario = "fig4"\n[optics]\nx = 1\n',
        'scenario = "fig9"\n',
        'scenario = "fig4"\n[grid]\npoints_per_axis = 2.5\n',
        'scenario = "fig4"\n[grid]\nhalf_extent = "3"\n',
        'scenario = "fig4"\ncoefficients = "guess"\n',
        'scenario = "fig4"\nkind = "length"\n',
        'scenario = "fig4"\n[beam]\nomega = 2.0\n',
        'scenario = "fig8"\n[sweep]\npoint_r = 0.5\n',
        'scenario = "custom"\n[grid]\npoints_per_axis = 300\n',
    ],
)
def test_validation_errors(text):
    with pytest.raises(ValidationError):
        loads_config(text)


def test_preset_accepts_same_pinned_value_and_free_keys():
    s = loads_config('scenario = "fig4"\n[beam]\nomega = 1.5\nwaist = 2.0\n[grid]\npoints_per_axis = 101\n')
    assert s.beam.waist == 2.0 and s.grid.points_per_axis == 101


def test_custom_overrides():
    s = loads_config(
        'scenario = "custom"\nkind = "length"\nsign = "as-printed"\n'
        '[standing_wave]\nomega_c0 = 0.0\n[sweep]\nwindings = [1, 3]\n'
    )
    assert s.kind == "length" and s.sw.omega_c0 == 0.0
    assert s.sweep.windings == (1, 3)
    assert s.flags.sign is SignConvention.AS_PRINTED


def test_scenario_override(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text('scenario = "fig4"\n')
    assert load_config(p, "fig5").name == "fig5"


def test_missing_file(tmp_path):
    with pytest.raises(ValidationError, match="cannot read"):
        load_config(tmp_path / "nope.toml")


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_round_trip(name):
    s = PRESETS[name]
    assert loads_config(dump_config(s)) == s
    assert dump_config(loads_config(dump_config(s))) == dump_config(s)


def test_round_trip_custom_values():
    s = loads_config(
        'scenario = "custom"\nvortex_square = "analytic"\noutput_dir = "a \\"b\\""\n'
        '[detuning]\ndelta_p = 0.1\n[beam]\nl1 = -3\nl2 = 5\n[sweep]\npoint_phi = 0.3333333333333333\n'
    )
    assert loads_config(dump_config(s)) == s
