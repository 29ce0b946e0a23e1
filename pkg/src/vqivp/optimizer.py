"""Nelder-Mead simplex minimization with evaluation counting."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np


class OptimizerAbort(ArithmeticError):
    """The objective returned a non-finite value."""


class _BudgetExhausted(Exception):
    pass


@dataclass(frozen=True)
class SimplexOptions:
    reflect: float = 1.0
    expand: float = 2.0
    contract: float = 0.5
    shrink: float = 0.5
    f_tol: float = 1e-9
    x_tol: float = 1e-8
    max_evals: Optional[int] = None
    init_step: float = 0.05

    def __post_init__(self):
        for name in ("reflect", "expand", "contract", "shrink", "f_tol", "x_tol", "init_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_evals is not None and self.max_evals < 1:
            raise ValueError("max_evals must be >= 1")

    def budget(self, n_params: int, sampled: bool = False) -> int:
        if self.max_evals is not None:
            return self.max_evals
        return (100 if sampled else 400) * n_params

    def with_budget(self, max_evals: int) -> "SimplexOptions":
        return replace(self, max_evals=max_evals)


@dataclass
class OptResult:
    best: np.ndarray
    best_value: float
    evals: int
    converged: bool
    iterations: int = 0


def nelder_mead(f: Callable[[np.ndarray], float], x0, opts: SimplexOptions = SimplexOptions(),
                sampled: bool = False) -> OptResult:
    """Minimize ``f`` from ``x0``.

    Stops when both the spread of simplex values is below ``f_tol`` and the
    vertices lie within ``x_tol`` of the best one, or when the evaluation
    budget runs out. ``sampled`` only selects the default budget.
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    if not np.all(np.isfinite(x0)):
        raise ValueError("x0 must be finite")
    n = x0.size
    max_evals = opts.budget(n, sampled)
    evals = 0

    def call(x: np.ndarray) -> float:
        nonlocal evals
        if evals >= max_evals:
            raise _BudgetExhausted
        evals += 1
        val = float(f(x))
        if not np.isfinite(val):
            raise OptimizerAbort(f"objective returned {val} at evaluation {evals}")
        return val

    rho, chi, gamma, sigma = opts.reflect, opts.expand, opts.contract, opts.shrink
    sim = np.tile(x0, (n + 1, 1))
    for j in range(n):
        sim[j + 1, j] += opts.init_step * max(abs(x0[j]), 1.0)
    fsim = np.full(n + 1, np.inf)
    converged = False
    iterations = 0
    try:
        for j in range(n + 1):
            fsim[j] = call(sim[j])
        while True:
            order = np.argsort(fsim, kind="stable")
            sim, fsim = sim[order], fsim[order]
            f_spread = fsim[-1] - fsim[0]
            if f_spread <= opts.f_tol and (
                f_spread == 0.0 or np.max(np.abs(sim[1:] - sim[0])) <= opts.x_tol
            ):
                converged = True
                break
            iterations += 1

            xbar = sim[:-1].mean(axis=0)
            xr = xbar + rho * (xbar - sim[-1])
            fr = call(xr)
            if fr < fsim[0]:
                xe = xbar + rho * chi * (xbar - sim[-1])
                fe = call(xe)
                if fe < fr:
                    sim[-1], fsim[-1] = xe, fe
                else:
                    sim[-1], fsim[-1] = xr, fr
                continue
            if fr < fsim[-2]:
                sim[-1], fsim[-1] = xr, fr
                continue
            if fr < fsim[-1]:
                xc = xbar + gamma * (xr - xbar)
                fc = call(xc)
                if fc <= fr:
                    sim[-1], fsim[-1] = xc, fc
                    continue
            else:
                xc = xbar - gamma * (xbar - sim[-1])
                fc = call(xc)
                if fc < fsim[-1]:
                    sim[-1], fsim[-1] = xc, fc
                    continue
            for j in range(1, n + 1):
                xs = sim[0] + sigma * (sim[j] - sim[0])
                fsim[j] = call(xs)
                sim[j] = xs
    except _BudgetExhausted:
        pass

    best = int(np.argmin(fsim))
    return OptResult(sim[best].copy(), float(fsim[best]), evals, converged, iterations)
