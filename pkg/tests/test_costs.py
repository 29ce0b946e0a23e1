import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_params
from vqivp.ansatz import ParamVector, evaluate
from vqivp.classical import cn_advection_step
from vqivp.costs import (CostContext, UnsupportedNonlinearityError, build_cn_advection,
                         build_cn_generic, build_rk2a, build_rk2b, cf_cn_advection, cf_cn_generic,
                         cf_rk2a, cf_rk2b, star, tilde)
from vqivp.engine import EngineMode
from vqivp.evolution import minimize_cost
from vqivp.grid import build_domain
from vqivp.optimizer import SimplexOptions
from vqivp.rhs import apply_rhs, rhs_spec_advection, rhs_spec_burgers, rhs_spec_wave

D = build_domain(3, 0.0, 1.0, 0.5, 1.0)
N, DX, DT, M = D.N, D.dx, D.dt, 3
seeds = st.integers(0, 2**32 - 1)


def pl(v):
    return np.roll(v, -1)


def mi(v):
    return np.roll(v, 1)


def ctx_for(spec, frozen, dt=DT, alpha=None):
    return CostContext(D, EngineMode.svf(), frozen, spec, dt, alpha=alpha)


def rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


@given(seeds)
def test_cn_generic_equals_residual_norm(seed):
    rng = np.random.default_rng(seed)
    spec = rhs_spec_advection(1.0, DX)
    ut, trial = random_params(rng, M), random_params(rng, M)
    cost = build_cn_generic(ctx_for(spec, {"u~": ut}))
    u, uo = evaluate(trial, N), evaluate(ut, N)
    eq = u - uo - 0.5 * DT * (apply_rhs(spec, {"u": u}, "u") + apply_rhs(spec, {"u": uo}, "u"))
    assert rel(cost(trial) + cost.constant, eq @ eq) < 1e-9


@given(seeds, st.sampled_from([0.25, 0.5, 1.0]))
def test_advection_cost_matches_generic(seed, cfl):
    rng = np.random.default_rng(seed)
    d = build_domain(3, 0.0, 1.0, cfl, 1.0)
    spec = rhs_spec_advection(1.0, d.dx)
    alpha = 0.25 * d.dt / d.dx
    ut, trial = random_params(rng, M), random_params(rng, M)
    ctx = CostContext(d, EngineMode.svf(), {"u~": ut}, spec, d.dt, alpha=alpha)
    a = cf_cn_advection(trial, ctx)
    g = cf_cn_generic(trial, ctx)
    assert abs(a - g) <= 1e-10 * max(1.0, abs(g))
    assert build_cn_advection(ctx).constant == pytest.approx(build_cn_generic(ctx).constant, rel=1e-12)


def test_alpha_for_reference_setup():
    assert 0.25 * 1.0 * D.dt / D.dx == 0.125


def test_degenerate_identity_update(rng):
    ut = random_params(rng, M)
    norm2 = ut.norm(N) ** 2
    spec = rhs_spec_advection(1.0, DX)
    ctx = ctx_for(spec, {"u~": ut}, dt=0.0, alpha=0.0)
    for build in (build_cn_generic, build_cn_advection):
        cost = build(ctx)
        assert cost(ut) == pytest.approx(-norm2)
        assert cost.residual_norm2(ut) == pytest.approx(0.0, abs=1e-10)


def test_cn_minimizer_reproduces_classical_step(rng):
    spec = rhs_spec_advection(1.0, DX)
    ut = random_params(rng, M)
    cost = build_cn_advection(ctx_for(spec, {"u~": ut}, alpha=0.125))
    best, _ = minimize_cost(cost, ut, SimplexOptions(f_tol=1e-14, x_tol=1e-10, max_evals=20000))
    ref = cn_advection_step(evaluate(ut, N), 0.125)
    assert np.max(np.abs(evaluate(best, N) - ref)) <= 1e-6


def _wave_states(rng):
    return {k + lvl: random_params(rng, M) for k in ("P", "Q", "phi") for lvl in ("~", "*")}


@given(seeds)
def test_wave_rk2a_term_by_term(seed):
    rng = np.random.default_rng(seed)
    states = _wave_states(rng)
    v = {k: evaluate(q, N) for k, q in states.items()}
    ctx = ctx_for(rhs_spec_wave(DX), states)
    x = random_params(rng, M)
    s = evaluate(x, N)
    r = DT / DX
    expected = {
        "P": s @ s - 2 * s @ v["P~"] - r * s @ (pl(v["Q~"]) - mi(v["Q~"])),
        "Q": s @ s - 2 * s @ v["Q~"] - r * s @ (pl(v["P~"]) - mi(v["P~"])),
        "phi": s @ s - 2 * s @ v["phi~"] - 2 * DT * s @ v["P~"],
    }
    for name, val in expected.items():
        assert rel(cf_rk2a(x, ctx, name), val) < 1e-9


@given(seeds)
def test_wave_rk2b_term_by_term(seed):
    rng = np.random.default_rng(seed)
    states = _wave_states(rng)
    v = {k: evaluate(q, N) for k, q in states.items()}
    ctx = ctx_for(rhs_spec_wave(DX), states)
    x = random_params(rng, M)
    s = evaluate(x, N)
    r = DT / (2 * DX)
    expected = {
        "P": s @ s - s @ v["P~"] - s @ v["P*"] - r * s @ (pl(v["Q*"]) - mi(v["Q*"])),
        "Q": s @ s - s @ v["Q~"] - s @ v["Q*"] - r * s @ (pl(v["P*"]) - mi(v["P*"])),
        "phi": s @ s - s @ v["phi~"] - s @ v["phi*"] - DT * s @ v["P*"],
    }
    for name, val in expected.items():
        assert rel(cf_rk2b(x, ctx, name), val) < 1e-9


@given(seeds)
def test_burgers_rk2_term_by_term(seed):
    rng = np.random.default_rng(seed)
    nu = 0.0125
    ut, us = random_params(rng, M), random_params(rng, M)
    a, b = evaluate(ut, N), evaluate(us, N)
    ctx = ctx_for(rhs_spec_burgers(nu, DX), {"u~": ut, "u*": us})
    x = random_params(rng, M)
    s = evaluate(x, N)
    cfa = (s @ s - 2 * s @ a + DT / DX * s @ (a * (pl(a) - mi(a)))
           - nu * 2 * DT / DX**2 * s @ (pl(a) - 2 * a + mi(a)))
    cfb = (s @ s - s @ a - s @ b + DT / (2 * DX) * s @ (b * (pl(b) - mi(b)))
           - nu * DT / DX**2 * s @ (pl(b) - 2 * b + mi(b)))
    assert rel(cf_rk2a(x, ctx, "u"), cfa) < 1e-9
    assert rel(cf_rk2b(x, ctx, "u"), cfb) < 1e-9


@given(seeds, st.sampled_from(["wave", "burgers"]))
def test_rk2_costs_equal_residual_norms(seed, eq):
    rng = np.random.default_rng(seed)
    spec = rhs_spec_wave(DX) if eq == "wave" else rhs_spec_burgers(0.0125, DX)
    names = spec.fields
    states = {k + lvl: random_params(rng, M) for k in names for lvl in ("~", "*")}
    v = {k: evaluate(q, N) for k, q in states.items()}
    ctx = ctx_for(spec, states)
    tl = {k: v[tilde(k)] for k in names}
    st_ = {k: v[star(k)] for k in names}
    x = random_params(rng, M)
    s = evaluate(x, N)
    for k in names:
        ca, cb = build_rk2a(ctx, k), build_rk2b(ctx, k)
        ra = s - tl[k] - DT * apply_rhs(spec, tl, k)
        rb = s - 0.5 * (tl[k] + st_[k] + DT * apply_rhs(spec, st_, k))
        assert rel(ca(x) + ca.constant, ra @ ra) < 1e-9
        assert rel(cb(x) + cb.constant, rb @ rb) < 1e-9


def test_rk2a_zero_rhs_minimum_at_current_state(rng):
    ut = random_params(rng, M)
    spec = rhs_spec_advection(0.0, DX)
    ctx = ctx_for(spec, {"u~": ut})
    assert cf_rk2a(ut, ctx, "u") == pytest.approx(-ut.norm(N) ** 2)
    other = ParamVector(M, ut.coeffs * 1.01)
    assert cf_rk2a(other, ctx, "u") > cf_rk2a(ut, ctx, "u")


def test_rk2b_zero_rhs_minimum_is_average(rng):
    ut, us = random_params(rng, M), random_params(rng, M)
    ctx = ctx_for(rhs_spec_advection(0.0, DX), {"u~": ut, "u*": us})
    avg = ParamVector(M, 0.5 * (ut.coeffs + us.coeffs))
    best = cf_rk2b(avg, ctx, "u")
    for _ in range(10):
        pert = ParamVector.from_positive(avg.coeffs[M:] + 1e-3 * rng.standard_normal(M + 1))
        assert cf_rk2b(pert, ctx, "u") >= best
    assert build_rk2b(ctx, "u").residual_norm2(avg) == pytest.approx(0.0, abs=1e-10)


def test_zero_trial_gives_zero(rng):
    states = _wave_states(rng)
    ctx = ctx_for(rhs_spec_wave(DX), states)
    for k in ("P", "Q", "phi"):
        assert cf_rk2b(ParamVector.zeros(M), ctx, k) == 0.0


def test_cn_rejects_nonlinear(rng):
    ctx = ctx_for(rhs_spec_burgers(0.01, DX), {"u~": random_params(rng, M)})
    with pytest.raises(UnsupportedNonlinearityError):
        build_cn_generic(ctx)


def test_product_counts():
    ctx = ctx_for(rhs_spec_advection(1.0, DX), {"u~": ParamVector.zeros(M)}, alpha=0.125)
    assert build_cn_advection(ctx).n_products == 7


def test_sampled_costs_scatter_around_exact(rng):
    ut, trial = random_params(rng, M), random_params(rng, M)
    spec = rhs_spec_advection(1.0, DX)
    ctx = CostContext(D, EngineMode.sef(10**4, 5), {"u~": ut}, spec, DT, alpha=0.125)
    cost = build_cn_advection(ctx)
    vals = np.array([cost(trial) for _ in range(300)])
    exact = cost.exact(trial)
    assert vals.std() > 0
    assert abs(vals.mean() - exact) < 5 * vals.std() / np.sqrt(len(vals))
