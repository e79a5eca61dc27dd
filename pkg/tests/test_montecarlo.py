import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quenchlat.analytic import qp_entropy_analytic
from quenchlat.cellstate import named_state
from quenchlat.entropy import stationary_entropy_density
from quenchlat.errors import GeometryStateMismatch
from quenchlat.geometry import interval, regular_polygon, unit_rectangle
from quenchlat.montecarlo import McConfig, qp_entropy_curve_mc, qp_entropy_mc

STATE = named_state("phi22", 0.5)


def test_zero_time_is_exactly_zero():
    est = qp_entropy_mc(STATE, regular_polygon(5), 0.0, McConfig(samples=5000))
    assert est.mean == 0.0 and est.stderr == 0.0


@settings(max_examples=5)
@given(seed=st.integers(0, 2**32 - 1))
def test_seed_determinism(seed):
    cfg = McConfig(samples=3000, seed=seed, batch=1000)
    a = qp_entropy_mc(STATE, unit_rectangle(2.0, 0.3), 0.2, cfg)
    b = qp_entropy_mc(STATE, unit_rectangle(2.0, 0.3), 0.2, cfg)
    assert a == b


def test_thread_count_independence():
    base = McConfig(samples=20000, seed=7, batch=4096)
    a = qp_entropy_mc(STATE, regular_polygon(3), 0.3, base)
    b = qp_entropy_mc(STATE, regular_polygon(3), 0.3, McConfig(samples=20000, seed=7, batch=4096, threads=4))
    assert a == b


def test_different_seeds_differ():
    a = qp_entropy_mc(STATE, regular_polygon(3), 0.3, McConfig(samples=5000, seed=1))
    b = qp_entropy_mc(STATE, regular_polygon(3), 0.3, McConfig(samples=5000, seed=2))
    assert a.mean != b.mean


def test_stderr_scales_as_inverse_sqrt():
    small = qp_entropy_mc(STATE, unit_rectangle(1.0), 0.25, McConfig(samples=10**4, seed=3))
    large = qp_entropy_mc(STATE, unit_rectangle(1.0), 0.25, McConfig(samples=16 * 10**4, seed=3))
    assert small.stderr / large.stderr == pytest.approx(4.0, rel=0.1)


@pytest.mark.parametrize(
    "state,region",
    [(named_state("1d:0,1"), interval(1.0)), (STATE, unit_rectangle(5.0)), (STATE, unit_rectangle(1.0, np.pi / 8))],
)
def test_agrees_with_analytic(state, region):
    t = np.array([0.1, 0.3])
    ref = qp_entropy_analytic(state, region, t, grid=2000 if state.d == 1 else 100).values
    mc = qp_entropy_curve_mc(state, region, t, McConfig(samples=2 * 10**5, seed=11))
    assert np.all(np.abs(mc.values - ref) < 4 * mc.stderr)


def test_overcount_mutation_is_detected():
    region, t = unit_rectangle(1.0), 0.3
    ref = qp_entropy_analytic(STATE, region, [t], grid=100).values[0]
    bad = qp_entropy_mc(STATE, region, t, McConfig(samples=10**5, seed=5, overcount_correction=False))
    assert abs(bad.mean - ref) > 10 * bad.stderr


def test_saturation_at_late_time():
    sat = stationary_entropy_density(STATE, 512)
    est = qp_entropy_mc(STATE, regular_polygon(5, 0.1), 2500.0, McConfig(samples=10**5, seed=9))
    assert abs(est.mean - sat) < 4 * est.stderr + 2e-3


def test_curve_metadata():
    curve = qp_entropy_curve_mc(STATE, unit_rectangle(1.0), [0.1, 0.2], McConfig(samples=500, seed=4))
    assert curve.engine == "mc"
    assert curve.meta["seed"] == 4
    np.testing.assert_allclose(curve.zeta, [0.4, 0.8])


def test_config_validation_and_mismatch():
    with pytest.raises(ValueError):
        McConfig(samples=0)
    with pytest.raises(GeometryStateMismatch):
        qp_entropy_mc(named_state("1d:0"), unit_rectangle(1.0), 0.1, McConfig(samples=10))
