import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import unitary_group

from quenchlat.cellstate import cell_green, multiplet_correlation, named_state
from quenchlat.entropy import (
    binary_entropy,
    bipartition_entropy,
    contribution_table,
    fermi_entropy,
    mask_modes,
    modes_mask,
    saturation_closed_form,
    stationary_entropy_density,
)
from quenchlat.errors import NotACorrelationMatrix

LN2 = np.log(2.0)


def test_binary_entropy_values():
    np.testing.assert_allclose(binary_entropy([0.0, 0.5, 1.0]), [0.0, LN2, 0.0])


def test_fermi_entropy_examples():
    assert fermi_entropy(np.eye(3)) == 0.0
    assert fermi_entropy(0.5 * np.eye(2)) == pytest.approx(2 * LN2)
    assert fermi_entropy(np.zeros((0, 0))) == 0.0


def test_fermi_entropy_rejects_bad_spectrum():
    with pytest.raises(NotACorrelationMatrix):
        fermi_entropy(np.diag([1.5, 0.2]))


def test_mask_roundtrip():
    assert mask_modes(0b1011, 4) == [0, 1, 3]
    assert modes_mask([0, 1, 3]) == 0b1011
    with pytest.raises(ValueError):
        bipartition_entropy(np.eye(2), 4)


def _random_projector(n, rank, seed):
    U = unitary_group.rvs(n, random_state=seed)
    return U[:, :rank] @ U[:, :rank].conj().T


@given(n=st.integers(2, 6), data=st.data())
def test_pure_state_complementarity_and_bounds(n, data):
    rank = data.draw(st.integers(0, n))
    C = _random_projector(n, rank, data.draw(st.integers(0, 2**31)))
    mask = data.draw(st.integers(0, (1 << n) - 1))
    full = (1 << n) - 1
    s = bipartition_entropy(C, mask)
    assert s == pytest.approx(bipartition_entropy(C, full ^ mask), abs=1e-9)
    k = bin(mask).count("1")
    assert -1e-12 <= s <= min(k, n - k) * LN2 + 1e-9


def test_contribution_table_complement_symmetry():
    g = cell_green(named_state("phi22", 0.4))
    table = contribution_table(g, np.random.default_rng(1).random((30, 2)) * np.pi)
    full = 15
    for m in range(16):
        np.testing.assert_allclose(table[:, m], table[:, full ^ m], atol=1e-12)
    assert np.all(table[:, 0] == 0) and np.all(table[:, full] == 0)


@pytest.mark.parametrize("alpha", [0.3, 0.7, 2.0])
def test_phi4_single_mode_formula(alpha):
    g = cell_green(named_state("phi4", alpha))
    p = np.linspace(0.05, np.pi / 2 - 0.05, 7)
    table = contribution_table(g, p)
    for q in range(4):
        f = alpha / (1 + alpha**2) * np.cos(p - np.pi / 2 * q)
        np.testing.assert_allclose(table[:, 1 << q], binary_entropy((1 + f) / 2), atol=1e-12)


@pytest.mark.parametrize("alpha", [0.3, 0.7, 2.0])
def test_phi22_contribution_formulas(alpha):
    g = cell_green(named_state("phi22", alpha))
    p = np.random.default_rng(2).random((10, 2)) * np.pi
    table = contribution_table(g, p)
    gx = alpha * np.cos(p[:, 0]) / (1 + alpha**2)
    x = 1 / np.sqrt(1 + alpha**2)
    s1 = binary_entropy((1 + gx) / 2)
    s2 = 2 * binary_entropy((1 + x) / 2)
    s3 = LN2 + binary_entropy(0.5 + gx)
    for q in range(4):
        np.testing.assert_allclose(table[:, 1 << q], s1, atol=1e-12)
    for m in (5, 10):
        np.testing.assert_allclose(table[:, m], s2, atol=1e-12)
    for m in (3, 12):
        np.testing.assert_allclose(table[:, m], s3, atol=1e-12)


def test_classical_contributions_momentum_independent():
    g = cell_green(named_state("2d:0,3"))
    table = contribution_table(g, np.random.default_rng(3).random((25, 2)) * np.pi)
    np.testing.assert_allclose(table, table[:1].repeat(25, 0), atol=1e-12)


def test_stationary_values():
    assert stationary_entropy_density(named_state("phi22", 0.5), 512) == pytest.approx(0.652301, abs=1e-5)
    assert stationary_entropy_density(named_state("phi22", 10 / 7), 512) == pytest.approx(0.63632, abs=1e-4)


@pytest.mark.parametrize("name", ["1d:0", "2d:0"])
def test_stationary_single_site(name):
    # filling 1/4 with flat occupation
    assert stationary_entropy_density(named_state(name), 128) == pytest.approx(binary_entropy(0.25), abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_saturation_closed_form_random_alpha(seed):
    alpha = float(np.random.default_rng(seed).uniform(0.05, 5.0))
    want = saturation_closed_form(alpha)
    assert stationary_entropy_density(named_state("phi4", alpha), 4096) == pytest.approx(want, abs=1e-9)
    assert stationary_entropy_density(named_state("phi22", alpha), 128) == pytest.approx(want, abs=1e-9)


def test_saturation_symmetric_in_inverse_alpha():
    assert saturation_closed_form(0.3) == pytest.approx(saturation_closed_form(1 / 0.3))


def test_stationary_grid_too_coarse():
    with pytest.raises(ValueError):
        stationary_entropy_density(named_state("1d:0"), 16)


def test_multiplet_entropy_zero_for_whole():
    g = cell_green(named_state("phi4", 0.5))
    C = multiplet_correlation(g, [0.3])
    assert bipartition_entropy(C, 15) == 0.0
