import numpy as np
import pytest
from hypothesis import given, strategies as st

from stabilitylab import laws
from stabilitylab.errors import UnsupportedLaw
from stabilitylab.seeding import hash64, substream


@given(st.integers(0, 2**63), st.integers(0, 10**6))
def test_hash_deterministic(a, b):
    assert hash64(a, b) == hash64(a, b)
    assert 0 <= hash64(a, b) < 2**64


def test_substreams_differ():
    assert hash64(1, 2) != hash64(2, 1)
    x = substream(5, 0).standard_normal(4)
    assert np.array_equal(x, substream(5, 0).standard_normal(4))
    assert not np.array_equal(x, substream(5, 1).standard_normal(4))


@pytest.mark.parametrize("name", laws.LAW_NAMES)
def test_law_moments(name, rng):
    law = laws.make_law(name)
    x = law.sample(rng, 200_000)
    assert x.mean() == pytest.approx(law.mean(), abs=0.02)
    grid = np.quantile(x, [0.25, 0.5, 0.75])
    assert np.allclose(law.cdf(grid), [0.25, 0.5, 0.75], atol=0.01)
    assert np.all(np.isfinite(law.logpdf(grid)))


def test_unknown_law():
    with pytest.raises(UnsupportedLaw):
        laws.make_law("cauchy")
