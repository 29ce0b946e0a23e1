import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vqivp.analysis import (AlignmentError, convergence_factors, exact_advection,
                            exact_advection_bandlimited, exact_wave, inject, l1_norm,
                            self_convergence_factors, window_factor)
from vqivp.grid import build_domain
from vqivp.problems import Problem, Trajectory

P = Problem.advection()
xs = st.floats(0.0, 1.0, exclude_max=True)


def test_exact_advection_examples():
    x = np.linspace(0, 1, 9)[:-1]
    np.testing.assert_allclose(exact_advection(P, x, 0.0), P.gaussian(x))
    np.testing.assert_allclose(exact_advection(P, x, 1.0), P.gaussian(x), atol=1e-14)
    assert exact_advection(P, 0.0, 0.5) == pytest.approx(1.0)


def test_exact_wave_examples():
    W = Problem.wave()
    x = np.linspace(0, 1, 9)[:-1]
    np.testing.assert_allclose(exact_wave(W, x, 0.0), W.gaussian(x))
    np.testing.assert_allclose(exact_wave(W, x, 1.0), W.gaussian(x), atol=1e-14)
    assert exact_wave(W, 0.0, 0.5) == pytest.approx(1.0)


@given(xs, st.floats(0, 3))
def test_exact_solutions_are_periodic(x, t):
    assert exact_advection(P, x, t) == pytest.approx(exact_advection(P, x + 1.0, t))
    assert exact_wave(P, x, t) == pytest.approx(exact_wave(P, x, t + 1.0), abs=1e-12)


def test_bandlimited_reference_at_zero_is_projection():
    d = build_domain(5, 0.0, 1.0, 0.5, 1.0)
    full = exact_advection_bandlimited(P, d, 15, 0.0)
    g = P.gaussian(d.x)
    nyquist = np.mean(g * (-1.0) ** np.arange(d.N))
    # 31 of 32 discrete modes: only the Nyquist component is lost
    np.testing.assert_allclose(full, g - nyquist * (-1.0) ** np.arange(d.N), atol=1e-12)
    crude = exact_advection_bandlimited(P, d, 3, 1.0)
    np.testing.assert_allclose(crude, exact_advection_bandlimited(P, d, 3, 0.0), atol=1e-12)


@pytest.mark.parametrize("e, dx, val", [([1, 1, 1, 1], 0.25, 1.0), ([0, 0], 0.5, 0.0),
                                        ([1, -1, 0, 0], 0.5, 1.0)])
def test_l1_norm(e, dx, val):
    assert l1_norm(np.array(e, float), dx) == pytest.approx(val)


def test_inject():
    np.testing.assert_array_equal(inject(np.arange(8)), [0, 2, 4, 6])


def _traj(n, fn):
    d = build_domain(n, 0.0, 1.0, 0.5, 1.0)
    tr = Trajectory(d, ("u",))
    for k in range(d.n_steps + 1):
        tr.record(k, {"u": fn(d, d.time(k))})
    return tr


def test_synthetic_second_order_errors_give_four():
    exact = lambda x, t: np.sin(2 * np.pi * (x - t))
    trajs = {n: _traj(n, lambda d, t: exact(d.x, t) + 0.3 * d.dx**2 * (1 + t)) for n in (4, 5, 6)}
    rep = convergence_factors(trajs, exact)
    for key in ((4, 5), (5, 6)):
        assert rep.window_factors[key] == pytest.approx(4.0)
        np.testing.assert_allclose(rep.ratios[key], 4.0)
    assert rep.summary()


def test_per_resolution_references():
    trajs = {n: _traj(n, lambda d, t: d.dx**2 * np.ones(d.N)) for n in (3, 4)}
    refs = {3: lambda x, t: 0 * x, 4: lambda x, t: 0 * x}
    assert convergence_factors(trajs, refs).window_factors[(3, 4)] == pytest.approx(4.0)


def test_synthetic_self_convergence_gives_four():
    base = lambda d, t: np.cos(2 * np.pi * d.x) * (1 + t)
    trajs = {n: _traj(n, lambda d, t: base(d, t) + 2.0 * d.dx**2 * np.sin(2 * np.pi * d.x))
             for n in (4, 5, 6)}
    rep = self_convergence_factors(trajs)
    assert rep.window_factors[(4, 5, 6)] == pytest.approx(4.0)
    np.testing.assert_allclose(rep.ratios[(4, 5, 6)], 4.0)


def test_identical_trajectories_have_undefined_self_convergence():
    trajs = {n: _traj(n, lambda d, t: np.cos(2 * np.pi * d.x)) for n in (4, 5, 6)}
    rep = self_convergence_factors(trajs)
    np.testing.assert_array_equal(rep.num[4], 0.0)
    assert rep.window_factors[(4, 5, 6)] is None
    assert np.all(np.isnan(rep.ratios[(4, 5, 6)]))


def test_alignment_errors():
    f = lambda d, t: np.zeros(d.N)
    with pytest.raises(AlignmentError):
        convergence_factors({4: _traj(4, f)}, lambda x, t: 0 * x)
    with pytest.raises(AlignmentError):
        convergence_factors({4: _traj(4, f), 6: _traj(6, f)}, lambda x, t: 0 * x)
    with pytest.raises(AlignmentError):
        self_convergence_factors({4: _traj(4, f), 5: _traj(5, f)})


def test_window_factor_selection():
    t = np.linspace(0, 1, 11)
    assert window_factor(np.full(11, 2.0), np.ones(11), t) == pytest.approx(2.0)
    assert window_factor(np.ones(11), np.ones(11), t, window=(2, 3)) is None
