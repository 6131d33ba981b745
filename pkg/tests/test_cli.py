import json
import subprocess
import sys

import numpy as np
import pytest

from vortexgrating.cli import main
from vortexgrating.config import loads_config
from vortexgrating.runner import run_scenario

SMALL_GRID = "[grid]\nhalf_extent = 3.0\npoints_per_axis = 31\n"


def _write(tmp_path, text, name="c.toml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_fig4_outputs(tmp_path):
    cfg = _write(tmp_path, 'scenario = "fig4"\n' + SMALL_GRID)
    out = tmp_path / "out"
    assert main([str(cfg), "--out", str(out)]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == [
        "fig4_order0.csv", "fig4_order0.pgm", "fig4_order1.csv", "fig4_order1.pgm",
        "fig4_order2.csv", "fig4_order2.pgm", "resolved_config.toml", "run_manifest.json",
    ]
    resolved = loads_config((out / "resolved_config.toml").read_text())
    assert resolved.name == "fig4" and resolved.output_dir == str(out)
    manifest = json.loads((out / "run_manifest.json").read_text())
    assert manifest["runtime_s"] >= 0 and manifest["kernel_backend"] in ("cython", "python")


def test_flag_overrides(tmp_path):
    cfg = _write(tmp_path, 'scenario = "fig3"\n' + SMALL_GRID)
    out = tmp_path / "o"
    rc = main([str(cfg), "--out", str(out), "--coefficients", "as-printed", "--sign", "as-printed",
               "--vortex-square", "analytic", "--threads", "3"])
    assert rc == 0
    text = (out / "fig3_order0.csv").read_text()
    assert "# coefficients: as-printed" in text
    assert "# vortex_square: analytic" in text
    assert "# sign: as-printed" in text


def test_scenario_flag(tmp_path):
    cfg = _write(tmp_path, 'scenario = "fig4"\n' + SMALL_GRID)
    assert main([str(cfg), "--out", str(tmp_path / "o"), "--scenario", "fig5"]) == 0
    assert (tmp_path / "o" / "fig5_order1.csv").exists()


def test_validation_exit_code(tmp_path, capsys):
    assert main([str(_write(tmp_path, ""))]) == 1
    assert "scenario missing" in capsys.readouterr().err
    assert main([str(_write(tmp_path, "scenario = = 1", "b.toml"))]) == 1
    assert main([str(tmp_path / "absent.toml")]) == 1
    assert main([str(_write(tmp_path, 'scenario = "fig4"', "c.toml")), "--threads", "0"]) == 1


def test_numerical_exit_code(tmp_path, capsys):
    # gamma2 = 0 on exact resonance puts every cell on the A2 A3 = Omega_LG^2 pole
    text = 'scenario = "custom"\n[atom]\ngamma2 = 0.0\n[beam]\nomega = 0.0\n' + SMALL_GRID
    assert main([str(_write(tmp_path, text)), "--out", str(tmp_path / "o")]) == 2
    assert "scenario custom" in capsys.readouterr().err


def test_console_script_runs(tmp_path):
    cfg = _write(tmp_path, 'scenario = "fig8"\n[sweep]\nlength_points = 11\n')
    out = tmp_path / "o"
    proc = subprocess.run(
        [sys.executable, "-m", "vortexgrating.cli", str(cfg), "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (out / "fig8_zero_order_share.csv").exists()
    assert not list(out.glob("*.pgm"))


def test_determinism(tmp_path):
    cfg = _write(tmp_path, 'scenario = "fig5"\n' + SMALL_GRID)
    main([str(cfg), "--out", str(tmp_path / "a"), "--threads", "1"])
    main([str(cfg), "--out", str(tmp_path / "b"), "--threads", "4"])
    for f in (tmp_path / "a").glob("*.csv"):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_run_scenario_shapes():
    s = loads_config('scenario = "fig2"\n[sweep]\ndetuning_points = 21\n')
    tables = run_scenario(s)
    assert [t.name for t in tables] == [f"fig2_order{n}" for n in range(4)]
    assert tables[0].values.shape == (21, 21)
    assert tables[0].rows.name == "delta_lg" and tables[0].cols.name == "delta_c"
    for key in ("scenario", "coefficients", "sign", "code_version", "runtime_s", "nan_count"):
        assert key in tables[0].metadata


def test_fig8_l2_orders_vanish():
    tables = run_scenario(loads_config('scenario = "fig8"'))
    by_name = {t.name: t for t in tables}
    col = list(by_name["fig8_order1"].cols.values).index(2.0)
    for n in (1, 2, 3):
        t = by_name[f"fig8_order{n}"]
        assert t.values.shape == (501, 3)
        assert np.all(t.values[:, col] == 0.0)


def test_custom_without_standing_wave():
    s = loads_config('scenario = "custom"\n[standing_wave]\nomega_c0 = 0.0\n' + SMALL_GRID)
    tables = run_scenario(s)
    assert np.nanmax(tables[0].values) > 0
    for t in tables[1:]:
        assert np.all(t.values == 0.0)


@pytest.mark.parametrize("name", ["fig3", "fig6", "fig7"])
def test_map_scenarios_have_four_orders(name):
    tables = run_scenario(loads_config(f'scenario = "{name}"\n' + SMALL_GRID))
    assert len(tables) == 4
    assert tables[0].rows.name == "y1_over_w"
