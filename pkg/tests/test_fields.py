import math

import numpy as np
import pytest

from vortexgrating.errors import ValidationError, WindingMismatch
from vortexgrating.fields import (
    CompositeVortex,
    GridSpec,
    StandingWave,
    equal_oam_amplitude,
    polar_point,
    sw_amplitude,
    vortex_amplitude,
)


def test_standing_wave_nodes_and_antinodes():
    sw = StandingWave(omega_c0=0.5)
    assert sw_amplitude(sw, 0.0) == 0.0
    assert sw_amplitude(sw, 0.5) == 0.5
    assert sw_amplitude(sw, 1 / 6) == pytest.approx(0.25, abs=1e-15)


def test_vortex_on_axis():
    assert vortex_amplitude(CompositeVortex(omega=1.1, l1=4, l2=-1), 0.0, 0.0) == 0
    assert vortex_amplitude(CompositeVortex(omega=1.5), 0.0, 0.0) == 3.0


@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_equal_and_opposite_reduces_to_cosine(l, rng):
    beam = CompositeVortex(omega=1.5, l1=l, l2=-l)
    x, y = rng.uniform(-3, 3, (2, 200))
    np.testing.assert_allclose(vortex_amplitude(beam, x, y), equal_oam_amplitude(beam, x, y), atol=1e-14)


def test_equal_oam_nodes():
    assert equal_oam_amplitude(CompositeVortex(l1=2, l2=-2), *polar_point(1.0, math.pi / 4)) == 0.0
    assert equal_oam_amplitude(CompositeVortex(omega=1.5), 0.0, 0.0) == 3.0
    beam = CompositeVortex(l1=1, l2=-1)
    for r in (0.3, 1.0, 2.5):
        assert equal_oam_amplitude(beam, *polar_point(r, math.pi / 2)) == 0.0


def test_equal_oam_rejects_mismatch():
    with pytest.raises(WindingMismatch):
        equal_oam_amplitude(CompositeVortex(l1=4, l2=-1), 1.0, 0.0)


@pytest.mark.parametrize("l1,l2", [(4, -1), (2, 0), (3, 1), (-2, 3)])
def test_rotational_symmetry_of_intensity(l1, l2):
    beam = CompositeVortex(omega=1.1, l1=l1, l2=l2)
    r, phi = np.meshgrid(np.linspace(0.05, 3, 40), np.linspace(-math.pi, math.pi, 73))
    step = 2 * math.pi / abs(l1 - l2)
    a = np.abs(vortex_amplitude(beam, r * np.cos(phi), r * np.sin(phi))) ** 2
    b = np.abs(vortex_amplitude(beam, r * np.cos(phi + step), r * np.sin(phi + step))) ** 2
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_cosine_parity(l):
    beam = CompositeVortex(l1=l, l2=-l)
    r, phi = np.meshgrid(np.linspace(0.1, 2.5, 20), np.linspace(-3, 3, 31))
    base = equal_oam_amplitude(beam, r * np.cos(phi), r * np.sin(phi))
    mirrored = equal_oam_amplitude(beam, r * np.cos(-phi), r * np.sin(-phi))
    np.testing.assert_allclose(base, mirrored, atol=1e-13)
    shifted = phi + math.pi / l
    flipped = equal_oam_amplitude(beam, r * np.cos(shifted), r * np.sin(shifted))
    np.testing.assert_allclose(flipped, -base, atol=1e-13)


@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_peak_radius(l):
    beam = CompositeVortex(omega=1.0, l1=l, l2=l)
    r = np.linspace(0, 3, 3001)
    amp = np.abs(vortex_amplitude(beam, r, 0 * r))
    assert abs(r[np.argmax(amp)] - math.sqrt(l / 2)) <= r[1] - r[0]


def test_grid_center_is_exact_node():
    g = GridSpec()
    ax = g.axis()
    assert ax.size == 301
    assert ax[150] == 0.0
    assert ax[0] == -3.0 and ax[-1] == 3.0
    x, y = g.mesh()
    assert x[0, 1] > x[0, 0] and y[1, 0] > y[0, 0]


@pytest.mark.parametrize("kwargs", [dict(points_per_axis=300), dict(points_per_axis=1), dict(half_extent=0)])
def test_grid_validation(kwargs):
    with pytest.raises(ValidationError):
        GridSpec(**kwargs)


def test_field_validation():
    with pytest.raises(ValidationError):
        StandingWave(omega_c0=-1)
    with pytest.raises(ValidationError):
        StandingWave(lambda_x=0)
    with pytest.raises(ValidationError):
        CompositeVortex(waist=0)
    with pytest.raises(ValidationError):
        CompositeVortex(l1=1.5)
