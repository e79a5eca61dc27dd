import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quenchlat.errors import DegenerateRegion
from quenchlat.geometry import (
    PENTAGRAM_RATIO,
    interval,
    polygon,
    rectangle,
    region_from_spec,
    regular_polygon,
    star,
    unit_rectangle,
)


def test_interval_contains_and_sites():
    reg = interval(5)
    assert reg.area() == 5
    assert reg.contains(np.array([0.0, 4.0, -0.6, 4.6])).tolist() == [True, True, False, False]
    np.testing.assert_array_equal(reg.lattice_sites()[:, 0], np.arange(5))


def test_rectangle_sites():
    reg = rectangle(3, 4)
    sites = reg.lattice_sites()
    assert len(sites) == 12
    assert sites.min(0).tolist() == [0, 0] and sites.max(0).tolist() == [2, 3]


def test_pentagon_area():
    assert regular_polygon(5, 1.0).area() == pytest.approx(2.37764, abs=1e-5)


def test_star_area_formula():
    reg = star(5, 1.0)
    # ten triangles between consecutive outer and inner vertices
    expected = 10 * 0.5 * 1.0 * PENTAGRAM_RATIO * np.sin(np.pi / 5)
    assert reg.area() == pytest.approx(expected)


def test_unit_rectangle():
    reg = unit_rectangle(5.0, theta=0.3)
    assert reg.area() == pytest.approx(1.0)
    assert reg.linear_size() == pytest.approx(1.0)
    assert reg.params["lx"] == pytest.approx(np.sqrt(5))


@given(theta=st.floats(-np.pi, np.pi), q=st.integers(3, 8))
def test_rotation_preserves_area_and_centroid(theta, q):
    reg = regular_polygon(q, 1.3, center=(0.2, -0.4))
    rot = reg.rotated(theta)
    assert rot.area() == pytest.approx(reg.area())
    np.testing.assert_allclose(rot.world_vertices.mean(0), reg.world_vertices.mean(0), atol=1e-12)


@given(theta=st.floats(0, 2 * np.pi))
def test_rotated_membership_matches_inverse_rotation(theta):
    reg = unit_rectangle(3.0)
    rot = reg.rotated(theta)
    pts = np.random.default_rng(0).uniform(-1.2, 1.2, (200, 2))
    c, s = np.cos(theta), np.sin(theta)
    back = pts @ np.array([[c, -s], [s, c]])  # rotate by -theta
    inside = rot.contains(pts)
    clear = np.abs(np.abs(back) - np.array([np.sqrt(3) / 2, 0.5 / np.sqrt(3)])).min(-1) > 1e-9
    np.testing.assert_array_equal(inside[clear], reg.contains(back)[clear])


def test_sample_uniform_mean_and_membership(rng):
    reg = regular_polygon(5, 1.0, center=(3.0, -2.0))
    pts = reg.sample_uniform(rng, 20000)
    assert pts.shape == (20000, 2)
    assert np.all(reg.contains(pts))
    np.testing.assert_allclose(pts.mean(0), [3.0, -2.0], atol=0.02)


def test_star_hit_fraction(rng):
    reg = star(5, 1.0)
    lo, hi = reg.bounding_box()
    pts = lo + (hi - lo) * rng.random((200000, 2))
    frac = reg.contains(pts).mean()
    assert frac == pytest.approx(reg.area() / np.prod(hi - lo), abs=0.005)


def test_lattice_sites_scale_with_area():
    reg = regular_polygon(6, 1.0)
    for factor in (10, 20, 40):
        n = len(reg.scaled(factor).lattice_sites())
        assert n / reg.scaled(factor).area() == pytest.approx(1.0, abs=3.0 / factor)


def test_scaled_updates_params():
    reg = rectangle(2, 3).scaled(2)
    assert reg.params == {"lx": 4, "ly": 6}
    assert reg.area() == pytest.approx(24)


def test_clockwise_vertices_reoriented():
    reg = polygon([[0, 0], [0, 1], [1, 1], [1, 0]])
    assert reg.area() == pytest.approx(1.0)
    assert reg.contains(np.array([[0.5, 0.5]]))[0]


@pytest.mark.parametrize(
    "vertices",
    [[[0, 0], [1, 1], [2, 2]], [[0, 0], [1, 0]], [[0, 0], [1, 1], [1, 0], [0, 1]]],
)
def test_degenerate_polygons(vertices):
    with pytest.raises(DegenerateRegion):
        polygon(vertices)


def test_degenerate_interval():
    with pytest.raises(DegenerateRegion):
        interval(0)


def test_region_from_spec():
    assert region_from_spec({"shape": "rectangle", "r": 5, "theta": 0.1}).area() == pytest.approx(1.0)
    assert region_from_spec({"shape": "square", "l": 3}).area() == pytest.approx(9.0)
    assert region_from_spec({"shape": "interval", "l": 7}).area() == 7
    assert region_from_spec({"shape": "star", "points": 5, "outer": 1.0}).shape == "star"
