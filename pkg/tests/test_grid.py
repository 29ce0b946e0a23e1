import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vqivp.grid import CapacityError, ConfigurationError, build_domain, wrap_index


@pytest.mark.parametrize("args, N, dx, dt, steps", [
    ((3, 0, 1, 0.5, 1.0), 8, 0.125, 0.0625, 16),
    ((1, 0, 2, 1.0, 1.0), 2, 1.0, 1.0, 1),
    ((6, 0, 1, 0.5, 1.0), 64, 1 / 64, 1 / 128, 128),
])
def test_build_domain_examples(args, N, dx, dt, steps):
    d = build_domain(*args)
    assert (d.N, d.dx, d.dt, d.n_steps) == (N, dx, dt, steps)
    assert math.isclose(d.n_steps * d.dt, d.t_final)
    assert d.x[0] == d.x_min and len(d.x) == N


@pytest.mark.parametrize("args", [
    (0, 0, 1, 0.5, 1.0),
    (3, 1, 1, 0.5, 1.0),
    (3, 0, 1, 0.0, 1.0),
    (3, 0, 1, -0.5, 1.0),
    (3, 0, 1, 0.5, 0.0),
    (3, 0, 1, 0.3, 1.0),  # t_final not a multiple of dt
])
def test_build_domain_rejects(args):
    with pytest.raises(ConfigurationError):
        build_domain(*args)


def test_capacity_limit():
    with pytest.raises(CapacityError):
        build_domain(40, 0, 1, 0.5, 1.0)


@pytest.mark.parametrize("i, N, expected", [(8, 8, 0), (-1, 8, 7), (17, 8, 1)])
def test_wrap_index_examples(i, N, expected):
    assert wrap_index(i, N) == expected


@given(st.integers(-1000, 1000), st.integers(1, 64))
def test_wrap_index_range_and_periodicity(i, N):
    j = wrap_index(i, N)
    assert 0 <= j < N
    assert wrap_index(i + N, N) == j


@given(st.integers(1, 10), st.sampled_from([0.25, 0.5, 1.0]))
def test_time_levels(n, cfl):
    d = build_domain(n, 0.0, 1.0, cfl, 1.0)
    assert d.time(d.n_steps) == pytest.approx(1.0)
    assert np.isclose(d.dt, cfl * d.dx)
