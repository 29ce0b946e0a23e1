"""Variational time stepping: one Nelder-Mead minimization per cost function."""

from __future__ import annotations

import time
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from .ansatz import ParamVector, evaluate, pack_real, params_from_samples, unpack_real
from .classical import InstabilityError, evolve_classical
from .costs import (CostContext, CostFunction, build_cn_advection, build_cn_generic, build_rk2a,
                    build_rk2b, star, tilde)
from .engine import EngineMode
from .grid import Domain
from .optimizer import OptimizerAbort, SimplexOptions, nelder_mead
from .problems import Problem, StepStats, Trajectory, initial_fields
from .rhs import RhsSpec

States = Dict[str, ParamVector]


class StepError(RuntimeError):
    def __init__(self, step: Optional[int], cause: Exception):
        super().__init__(f"step {step}: {cause}")
        self.step = step
        self.cause = cause


def minimize_cost(cost: CostFunction, warm: ParamVector, opts: SimplexOptions) -> Tuple[ParamVector, "object"]:
    M = warm.M
    res = nelder_mead(lambda x: cost(unpack_real(x, M)), pack_real(warm), opts,
                      sampled=cost.ctx.mode.sampled)
    return unpack_real(res.best, M), res


def _record(stats: StepStats, cost: CostFunction, best: ParamVector, res) -> None:
    stats.minimizations += 1
    stats.cost_evals += res.evals
    stats.best_cost += cost.residual_norm2(best)


def vqa_step_cn(state: ParamVector, domain: Domain, spec: RhsSpec, mode: EngineMode,
                opts: SimplexOptions = SimplexOptions(), rng=None, alpha: Optional[float] = None,
                generic: bool = False, field: str = "u", step: int = 0) -> Tuple[ParamVector, StepStats]:
    """Advance one single-field state by a Crank-Nicolson minimization.

    With ``alpha`` given (and ``generic`` false) the grouped advection cost is
    used; otherwise the cost is expanded from ``spec``.
    """
    stats = StepStats(step, domain.time(step), best_cost=0.0)
    t0 = time.perf_counter()
    ctx = CostContext(domain, mode, {tilde(field): state}, spec, domain.dt, rng=rng, alpha=alpha)
    cost = build_cn_generic(ctx, field) if generic or alpha is None else build_cn_advection(ctx, field)
    new, res = minimize_cost(cost, state, opts)
    _record(stats, cost, new, res)
    stats.wall_ms = 1e3 * (time.perf_counter() - t0)
    return new, stats


def vqa_step_rk2(states: Mapping[str, ParamVector], domain: Domain, spec: RhsSpec, mode: EngineMode,
                 opts: SimplexOptions = SimplexOptions(), rng=None, step: int = 0) -> Tuple[States, StepStats]:
    """Heun step: all stage-a minimizations, then all stage-b minimizations.

    Each minimization is independent; stage a is warm-started from the
    current state and stage b from the stage-a result.
    """
    stats = StepStats(step, domain.time(step), best_cost=0.0)
    t0 = time.perf_counter()
    frozen = {tilde(k): v for k, v in states.items()}

    stars: States = {}
    ctx_a = CostContext(domain, mode, frozen, spec, domain.dt, rng=rng)
    for name in spec.fields:
        cost = build_rk2a(ctx_a, name)
        stars[name], res = minimize_cost(cost, states[name], opts)
        _record(stats, cost, stars[name], res)

    frozen_b = dict(frozen)
    frozen_b.update({star(k): v for k, v in stars.items()})
    ctx_b = CostContext(domain, mode, frozen_b, spec, domain.dt, rng=rng)
    new: States = {}
    for name in spec.fields:
        cost = build_rk2b(ctx_b, name)
        new[name], res = minimize_cost(cost, stars[name], opts)
        _record(stats, cost, new[name], res)

    stats.wall_ms = 1e3 * (time.perf_counter() - t0)
    return new, stats


def initial_params(problem: Problem, domain: Domain, M: int) -> States:
    return {k: params_from_samples(v, M) for k, v in initial_fields(problem, domain).items()}


def evolve_vqa(problem: Problem, domain: Domain, M: int, mode: EngineMode = EngineMode.svf(),
               opts: SimplexOptions = SimplexOptions(), stride: int = 1,
               generic_cn: bool = False) -> Trajectory:
    states = initial_params(problem, domain, M)
    spec = problem.spec(domain.dx)
    rng = mode.make_rng() if mode.sampled else None
    alpha = 0.25 * problem.v * domain.dt / domain.dx

    traj = Trajectory(domain, problem.fields)
    traj.record(0, {k: evaluate(v, domain.N) for k, v in states.items()})
    for n in range(1, domain.n_steps + 1):
        try:
            if problem.scheme == "cn":
                u, stats = vqa_step_cn(states["u"], domain, spec, mode, opts, rng=rng,
                                       alpha=alpha, generic=generic_cn, step=n)
                states = {"u": u}
            else:
                states, stats = vqa_step_rk2(states, domain, spec, mode, opts, rng=rng, step=n)
        except OptimizerAbort as err:
            raise StepError(n, err) from err
        traj.stats.append(stats)
        if n % stride == 0 or n == domain.n_steps:
            traj.record(n, {k: evaluate(v, domain.N) for k, v in states.items()})
    return traj


def evolve(problem: Problem, domain: Domain, method: str, M: Optional[int] = None,
           mode: Optional[EngineMode] = None, opts: SimplexOptions = SimplexOptions(),
           stride: int = 1) -> Trajectory:
    """Dispatch on ``method`` in {"classical", "svf", "sef"}."""
    if method == "classical":
        return evolve_classical(problem, domain, stride=stride)
    if M is None:
        raise ValueError("variational runs need a mode cutoff M")
    if method == "svf":
        mode = EngineMode.svf()
    elif method == "sef":
        if mode is None or not mode.sampled:
            raise ValueError("sef runs need a sampled EngineMode")
    else:
        raise ValueError(f"unknown method {method!r}")
    return evolve_vqa(problem, domain, M, mode, opts, stride=stride)
