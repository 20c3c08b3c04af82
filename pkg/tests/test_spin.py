import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stabilitylab import spin
from stabilitylab.errors import SizeExceeded


def test_two_spin_energies():
    assert spin.sk_energy([0.5], (1, 1)) == -0.5
    assert spin.sk_energy([0.5], (1, -1)) == 0.5
    for x in (0.7, -0.3):
        g = spin.sk_ground_state([x])
        assert g.encoding == (1, 1 if x > 0 else -1)
        assert g.objective_value == pytest.approx(-abs(x))


def test_ferromagnet():
    assert spin.sk_ground_state(np.ones(10)).encoding == (1,) * 5
    lat = spin.LatticeBox((3, 3))
    assert spin.ea_ground_state(lat, np.ones(len(lat.bonds))).encoding == (1,) * 9


def test_lattice_geometry():
    lat = spin.LatticeBox((4, 5))
    assert lat.size == 20 and len(lat.bonds) == 31 and lat.is_connected()
    chain = spin.LatticeBox((2,))
    g = spin.ea_ground_state(chain, [-1.3])
    assert g.objective_value == pytest.approx(-1.3)


def test_metric_examples():
    assert spin.spin_metric((1, 1, 1, 1), (1, 1, 1, 1)) == 0
    assert spin.spin_metric((1, 1, 1, 1), (1, -1, -1, -1)) == 0.75
    chain = spin.LatticeBox((2,))
    assert spin.spin_metric((1, 1), (1, -1), "EA", chain) == pytest.approx(math.sqrt(2))


def test_cap():
    with pytest.raises(SizeExceeded):
        spin.ground_state(23, spin.sk_bonds(23), np.zeros(253))


@pytest.mark.parametrize("n", range(2, 11))
def test_gray_code_matches_naive(n, rng):
    pairs = spin.sk_bonds(n)
    for _ in range(5):
        J = rng.standard_normal(len(pairs))
        fast = spin.ground_state(n, pairs, J)
        slow = spin.naive_ground_state(n, pairs, J)
        assert fast.encoding == slow.encoding
        assert fast.objective_value == pytest.approx(slow.objective_value, abs=1e-12)


@pytest.mark.parametrize("shape", [(2, 3), (2, 5), (3, 3), (1, 4), (2, 2, 2)])
def test_ea_matches_naive(shape, rng):
    lat = spin.LatticeBox(shape)
    J = rng.standard_normal(len(lat.bonds))
    assert spin.ea_ground_state(lat, J).encoding == spin.naive_ground_state(lat.size, lat.bonds, J).encoding


def test_gray_energies_cover_every_state(rng):
    n = 7
    pairs = spin.sk_bonds(n)
    J = rng.standard_normal(len(pairs))
    E = spin.gray_energies(n, pairs, J)
    states = spin.gray_states(np.arange(E.size), n)
    assert len({tuple(s) for s in states}) == 2 ** (n - 1)
    assert np.allclose(E, [spin.energy(pairs, J, s) for s in states])


@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_flip_symmetry_and_gauge(n, seed):
    rng = np.random.default_rng(seed)
    J = rng.standard_normal(n * (n - 1) // 2)
    s = tuple(int(v) for v in rng.choice([-1, 1], n))
    assert spin.sk_energy(J, s) == pytest.approx(spin.sk_energy(J, tuple(-v for v in s)))
    g = spin.gauge(s)
    assert g[0] == 1 and spin.gauge(g) == g


@given(st.integers(0, 2**32 - 1))
def test_ea_metric_zero_means_equal(seed):
    rng = np.random.default_rng(seed)
    lat = spin.LatticeBox((2, 3))
    a = spin.gauge(rng.choice([-1, 1], lat.size))
    b = spin.gauge(rng.choice([-1, 1], lat.size))
    assert (spin.spin_metric(a, b, "EA", lat) == 0) == (a == b)


def test_row_blocks_hold_each_bond_twice():
    blocks = spin.sk_row_blocks(6)
    counts = np.zeros(15, dtype=int)
    for b in blocks:
        counts[b] += 1
    assert np.all(counts == 2)


def test_ground_energy_bound(rng):
    for n in range(10, 17):
        for _ in range(5):
            g = spin.sk_ground_state(rng.standard_normal(n * (n - 1) // 2))
            assert g.objective_value > spin.sk_ground_energy_bound(n)
