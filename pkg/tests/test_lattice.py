import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quenchlat.lattice import (
    TWO_PI,
    QuenchConfig,
    ReducedGrid,
    cell_sites,
    dispersion,
    full_zone_grid,
    group_velocity,
    kshifts,
    site_index,
)

momenta = st.floats(-10.0, 10.0, allow_nan=False)


def test_dispersion_values():
    cfg = QuenchConfig((4,))
    assert dispersion(cfg, 0.0) == pytest.approx(2.0)
    assert dispersion(cfg, np.pi) == pytest.approx(-2.0)
    cfg2 = QuenchConfig((2, 2), J=0.5)
    assert dispersion(cfg2, [0.0, np.pi / 2]) == pytest.approx(1.0)


def test_velocity_values_and_vmax():
    cfg = QuenchConfig((4,))
    assert group_velocity(cfg, np.pi / 2) == pytest.approx(-2.0)
    assert cfg.v_max == 2.0
    assert QuenchConfig((2, 2), J=3.0).v_max == 6.0


def test_config_validation():
    with pytest.raises(ValueError):
        QuenchConfig((0,))
    with pytest.raises(ValueError):
        QuenchConfig((2,), J=0.0)


def test_kshifts_order():
    ks = kshifts(QuenchConfig((2, 2)))
    np.testing.assert_allclose(ks, [[0, 0], [0, np.pi], [np.pi, 0], [np.pi, np.pi]])
    np.testing.assert_allclose(kshifts(QuenchConfig((4,)))[:, 0], [0, np.pi / 2, np.pi, 3 * np.pi / 2])


def test_cell_sites_and_index():
    sites = cell_sites((2, 3))
    assert sites.shape == (6, 2)
    for i, s in enumerate(sites):
        assert site_index((2, 3), s) == i


@given(kx=momenta, ky=momenta)
def test_velocity_is_gradient(kx, ky):
    cfg = QuenchConfig((2, 2), J=1.3)
    k = np.array([kx, ky])
    h = 1e-6
    for a in range(2):
        e = np.zeros(2)
        e[a] = h
        fd = (dispersion(cfg, k + e) - dispersion(cfg, k - e)) / (2 * h)
        assert fd == pytest.approx(group_velocity(cfg, k)[a], abs=1e-6)


@given(k=momenta, n=st.integers(-3, 3))
def test_periodicity(k, n):
    cfg = QuenchConfig((4,))
    assert dispersion(cfg, k + TWO_PI * n) == pytest.approx(dispersion(cfg, k), abs=1e-9)
    assert abs(group_velocity(cfg, k)) <= cfg.v_max + 1e-12


@pytest.mark.parametrize("nu,M", [((4,), 10), ((2, 2), 7), ((3, 2), (5, 4))])
def test_reduced_grid_weights(nu, M):
    g = ReducedGrid(nu, M)
    assert g.size * g.weight == pytest.approx(1.0 / np.prod(nu))
    assert g.points.shape == (g.size, len(nu))
    upper = TWO_PI / np.asarray(nu)
    assert np.all(g.points > 0) and np.all(g.points < upper)


def test_full_zone_grid():
    g = full_zone_grid(2, 16)
    assert g.size * g.weight == pytest.approx(1.0)
