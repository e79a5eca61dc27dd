import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quenchlat.areas import (
    POPCOUNT,
    areas_1d_nu4,
    areas_2d_rect,
    areas_2d_rect_rotated,
    chain_classes,
    chain_velocity_order,
    mask_areas,
    mode_velocities,
    rotated_areas_corner_lengths,
)
from quenchlat.errors import DegenerateVelocities
from quenchlat.lattice import QuenchConfig

CHAIN = QuenchConfig((4,))
PLAQ = QuenchConfig((2, 2))


def _grid_oracle(cfg, sides, p, t, theta=0.0, n=400):
    """Mask areas by counting origins on a fine grid."""
    v = mode_velocities(cfg, p)[0] * t  # (modes, d)
    d = cfg.d
    c, s = np.cos(theta), np.sin(theta)
    R = np.array([[c, -s], [s, c]]) if d == 2 else np.eye(1)
    sides = np.asarray(sides, dtype=float)
    reach = np.abs(v).max() + sides.max() * 1.5
    h = 2 * reach / n
    axis = -reach + (np.arange(n) + 0.5) * h
    X = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), -1).reshape(-1, d)
    mask = np.zeros(len(X), dtype=int)
    for i, vi in enumerate(v):
        local = (X + vi) @ R  # box frame coordinates of the mode position
        inside = np.all((local >= 0) & (local <= sides), axis=-1)
        mask |= inside.astype(int) << i
    out = np.zeros(1 << cfg.volume)
    np.add.at(out, mask, h**d)
    return out


@pytest.mark.parametrize("t", [0.3, 2.0, 9.0])
def test_chain_tracer_matches_grid_oracle(t):
    p = np.array([[0.37]])
    got = mask_areas(CHAIN, (10.0,), p, t)[0]
    want = _grid_oracle(CHAIN, (10.0,), p, t, n=200000)
    np.testing.assert_allclose(got[1:], want[1:], atol=5e-3)


@pytest.mark.parametrize("t,theta", [(0.4, 0.0), (1.5, 0.0), (0.6, 0.3), (2.5, 1.1)])
def test_plaquette_tracer_matches_grid_oracle(t, theta):
    p = np.array([[0.4, 1.2]])
    got = mask_areas(PLAQ, (3.0, 2.0), p, t, theta)[0]
    want = _grid_oracle(PLAQ, (3.0, 2.0), p, t, theta, n=800)
    np.testing.assert_allclose(got[1:], want[1:], atol=0.06)


@given(
    px=st.floats(0.01, np.pi - 0.01),
    py=st.floats(0.01, np.pi - 0.01),
    t=st.floats(0.0, 5.0),
    theta=st.floats(0.0, np.pi),
)
def test_mode_weighted_area_is_conserved(px, py, t, theta):
    ma = mask_areas(PLAQ, (2.0, 3.0), [[px, py]], t, theta)[0]
    assert (ma * POPCOUNT[:16]).sum() == pytest.approx(4 * 6.0)


def _class_sums(ma, classes):
    return {c: np.where(classes == c, ma, 0.0).sum(axis=1) for c in (1, 2, 3)}


@given(p=st.floats(0.01, np.pi / 2 - 0.01), t=st.floats(0.0, 12.0))
def test_chain_table_matches_tracer(p, t):
    pp = np.array([[p]])
    br = areas_1d_nu4(10.0, pp, t)
    traced = _class_sums(mask_areas(CHAIN, (10.0,), pp, t), chain_classes(pp))
    for c in (1, 2, 3):
        assert br.areas[c][0] == pytest.approx(traced[c][0], abs=1e-9)


def test_chain_examples():
    p = np.array([[0.3]])
    br0 = areas_1d_nu4(10.0, p, 0.0)
    assert [float(br0.areas[c][0]) for c in (1, 2, 3)] == [0.0, 0.0, 0.0]
    late = areas_1d_nu4(10.0, p, 1e4)
    assert [float(late.areas[c][0]) for c in (1, 2, 3)] == pytest.approx([40.0, 0.0, 0.0])
    tad = float(br0.times["tau_ad"][0])
    early = areas_1d_nu4(10.0, p, 0.999 * tad)
    assert float(early.areas[3][0]) == 0.0
    dab = float(early.lengths["Delta_ab"][0])
    assert float(early.areas[1][0]) == pytest.approx(4 * dab)


def test_chain_velocity_order_and_degeneracy():
    order = chain_velocity_order(np.array([[0.3]]))
    v = mode_velocities(CHAIN, [[0.3]])[0, :, 0]
    assert np.all(np.diff(v[order[0]]) < 0)
    with pytest.raises(DegenerateVelocities):
        chain_velocity_order(np.array([[0.0]]))


@given(px=st.floats(0.01, np.pi - 0.01), py=st.floats(0.01, np.pi - 0.01), t=st.floats(0.0, 6.0))
def test_rect_table_matches_tracer(px, py, t):
    pp = np.array([[px, py]])
    br = areas_2d_rect(3.0, 5.0, pp, t)
    ma = mask_areas(PLAQ, (3.0, 5.0), pp, t)
    traced = _class_sums(ma, br.class_of_mask)
    for c in (1, 2, 3):
        assert br.areas[c][0] == pytest.approx(traced[c][0], abs=1e-9)


def test_rect_rows():
    p = np.array([[np.pi / 2, np.pi / 2]])
    br = areas_2d_rect(4.0, 4.0, p, 0.5)  # X = Y = 2
    assert [float(br.areas[c][0]) for c in (1, 2, 3)] == pytest.approx([16.0, 8.0, 8.0])
    sat = areas_2d_rect(4.0, 4.0, p, 10.0)
    assert [float(sat.areas[c][0]) for c in (1, 2, 3)] == pytest.approx([64.0, 0.0, 0.0])


def test_rotated_tracer_reduces_to_aligned():
    p = np.random.default_rng(0).random((20, 2)) * np.pi
    a = areas_2d_rect_rotated(2.0, 3.0, 0.0, p, 0.7)
    b = areas_2d_rect(2.0, 3.0, p, 0.7)
    for c in (1, 2, 3):
        np.testing.assert_allclose(a.areas[c], b.areas[c], atol=1e-12)
    np.testing.assert_allclose(a.areas[4], 0.0, atol=1e-12)


def test_rotated_square_quarter_turn_symmetry():
    p = np.random.default_rng(1).random((20, 2)) * np.pi
    a = mask_areas(PLAQ, (2.0, 2.0), p, 0.8, 0.3)
    b = mask_areas(PLAQ, (2.0, 2.0), p, 0.8, 0.3 + np.pi / 2)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_corner_length_construction_small_angle():
    p = np.random.default_rng(2).uniform(0.1, np.pi - 0.1, (30, 2))
    l, t = 10.0, 1.2
    approx = rotated_areas_corner_lengths(l, p, 1e-7, t)
    exact = areas_2d_rect_rotated(l, l, 1e-7, p, t)
    for c in (1, 2, 3):
        np.testing.assert_allclose(approx[c], exact.areas[c], atol=1e-4)


@pytest.mark.parametrize("theta", [0.2, 0.5, 0.7])
def test_corner_length_construction_singles_before_saturation(theta):
    p = np.random.default_rng(3).uniform(0.1, np.pi - 0.1, (30, 2))
    l, t = 10.0, 0.5  # all corner lengths stay positive
    approx = rotated_areas_corner_lengths(l, p, theta, t)
    exact = areas_2d_rect_rotated(l, l, theta, p, t)
    np.testing.assert_allclose(approx[1], exact.areas[1], atol=1e-9)
