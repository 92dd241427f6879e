import numpy as np
from hypothesis import given, settings, strategies as st

from halfspace_thinness.rng import CounterStream, philox4x64, to_unit_open


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 64 - 1), st.integers(0, 2 ** 40))
def test_block_function_matches_numpy_philox(key, counter):
    # numpy bumps the counter before producing its first block
    ref = np.random.Philox(key=key, counter=counter).random_raw(4)
    ours = philox4x64(np.array([[counter + 1, 0, 0, 0]], dtype=np.uint64),
                      np.array([[key, 0]], dtype=np.uint64))[0]
    np.testing.assert_array_equal(ours, ref)


def test_unit_interval_open():
    u = to_unit_open(np.array([0, 2 ** 64 - 1], dtype=np.uint64))
    assert 0 < u[0] < 1e-15 and 1 - 1e-15 < u[1] < 1.0


def test_streams_independent_of_batching():
    s = CounterStream(7)
    paths = np.arange(10, dtype=np.uint64)
    whole = s.uniforms(paths, 3, 1, 2)
    parts = np.vstack([s.uniforms(paths[:4], 3, 1, 2), s.uniforms(paths[4:], 3, 1, 2)])
    np.testing.assert_array_equal(whole, parts)
    assert not np.array_equal(whole, s.uniforms(paths, 4, 1, 2))
    assert not np.array_equal(whole, CounterStream(8).uniforms(paths, 3, 1, 2))


def test_normals_moments():
    s = CounterStream(1)
    z = s.normals(np.arange(200000, dtype=np.uint64), 0, 0, 3)
    assert z.shape == (200000, 3)
    assert abs(z.mean()) < 0.01
    assert abs(z.var() - 1) < 0.01
