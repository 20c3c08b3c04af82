import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stabilitylab import matrices as rm
from stabilitylab.errors import DegenerateEigenspace, SizeExceeded
from stabilitylab.laws import make_law


def test_small_cases():
    w, V = rm.symmetric_eigen(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(w, [1, 2, 3])
    w, V = rm.symmetric_eigen([[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(w, [-1, 1])
    assert np.allclose(np.abs(V), 1 / np.sqrt(2))


def test_extreme_pairs():
    ep = rm.extreme_eigenpair(np.array([[0.0, 1.0], [1.0, 0.0]]), "wigner_min")
    assert ep.value == pytest.approx(-1)
    assert np.allclose(ep.vector, [0.70711, -0.70711], atol=1e-5)
    ep = rm.extreme_eigenpair(np.diag([1.0, 2.0]), "wishart_max")
    assert ep.value == pytest.approx(4)
    assert np.allclose(ep.vector, [0, 1])


def test_degenerate_flagged():
    with pytest.warns(DegenerateEigenspace):
        rm.extreme_eigenpair(np.eye(3), "wigner_min")


def test_cap():
    with pytest.raises(SizeExceeded):
        rm.symmetric_eigen(np.zeros((513, 513)))


@pytest.mark.parametrize("n", [1, 2, 3, 6, 17, 40])
def test_residuals_and_orthogonality(n, rng):
    A = rm.sample_wigner(n, make_law("gaussian"), rng)
    assert np.array_equal(A, A.T)
    w, V = rm.symmetric_eigen(A)
    norm = max(np.linalg.norm(A), 1.0)
    assert np.linalg.norm(A @ V - V * w, axis=0).max() <= 1e-8 * norm
    assert np.abs(V.T @ V - np.eye(n)).max() <= 1e-10
    assert np.allclose(w, np.linalg.eigvalsh(A), atol=1e-9 * norm)


coords = st.one_of(st.just(0.0), st.floats(1e-3, 3), st.floats(-3, -1e-3))


@given(st.lists(coords, min_size=2, max_size=8).filter(any))
def test_gauge(v):
    v = np.asarray(v) / np.linalg.norm(v)
    g = rm.gauge_vector(v)
    assert np.array_equal(rm.gauge_vector(g), g)
    assert rm.vector_metric(rm.gauge_vector(-v), g) == 0


def test_gauge_skips_tiny_first_coordinate():
    assert np.array_equal(rm.gauge_vector([0.0, -0.6, 0.8]), [0.0, 0.6, -0.8])
    assert rm.vector_metric([1, 0], [0, 1]) == pytest.approx(np.sqrt(2))


def test_interlacing_examples():
    rep = rm.interlacing_check(np.array([[1.0, 0.4], [0.4, 2.0]]))
    assert rep.passed
    # at epsilon = 0 the gap bound reads lambda_n >= mu_{n-1}
    w = np.linalg.eigvalsh([[1.0, 0.4], [0.4, 2.0]])
    assert rep.gap_margins[0.0] == pytest.approx(w[-1] - 1.0)


@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_interlacing_property(n, seed):
    A = rm.sample_wigner(n, make_law("gaussian"), np.random.default_rng(seed))
    assert rm.interlacing_check(A).passed


def test_row_block_positions():
    assert len(rm.wigner_row_block_positions(5, 2)) == 2 * 5 - 1


def test_entry_means(rng):
    M = rm.sample_wishart(300, 100, make_law("gaussian"), rng)
    assert abs(M.mean()) < 3 / np.sqrt(M.size)
