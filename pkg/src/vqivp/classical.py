"""Reference finite-difference solvers: cyclic Crank-Nicolson and Heun RK2."""

from __future__ import annotations

import time
from typing import Mapping

import numpy as np
from scipy.linalg import solve_banded

from .grid import Domain
from .problems import FieldSet, Problem, StepStats, Trajectory, initial_fields
from .rhs import RhsSpec, apply_rhs


class SolverError(ArithmeticError):
    pass


class InstabilityError(ArithmeticError):
    def __init__(self, message: str, step: int | None = None):
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


def solve_cyclic_tridiagonal(sub: float, diag: float, sup: float, rhs: np.ndarray) -> np.ndarray:
    """Solve ``sub*x[i-1] + diag*x[i] + sup*x[i+1] = rhs[i]`` with periodic wrap.

    Sherman-Morrison correction of a banded solve, O(N).
    """
    rhs = np.asarray(rhs, dtype=float)
    N = rhs.size
    if N < 3:
        A = diag * np.eye(N)
        for i in range(N):
            A[i, (i - 1) % N] += sub
            A[i, (i + 1) % N] += sup
        try:
            return np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError as err:
            raise SolverError(str(err)) from err

    # corners: A[0, N-1] = sub, A[N-1, 0] = sup
    gamma = -diag if diag != 0 else -1.0
    ab = np.empty((3, N))
    ab[0, :] = sup
    ab[1, :] = diag
    ab[2, :] = sub
    ab[1, 0] = diag - gamma
    ab[1, -1] = diag - sup * sub / gamma
    corr = np.zeros(N)
    corr[0] = gamma
    corr[-1] = sup
    try:
        sol = solve_banded((1, 1), ab, np.column_stack([rhs, corr]), check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as err:
        raise SolverError(str(err)) from err
    x, z = sol[:, 0], sol[:, 1]
    denom = 1.0 + z[0] + sub * z[-1] / gamma
    if denom == 0 or not np.isfinite(denom):
        raise SolverError("cyclic system is singular")
    out = x - z * (x[0] + sub * x[-1] / gamma) / denom
    if not np.all(np.isfinite(out)):
        raise SolverError("non-finite solution of cyclic system")
    return out


def cn_advection_step(u: np.ndarray, alpha: float) -> np.ndarray:
    """One Crank-Nicolson advection step,
    ``a u'_{i+1} + u'_i - a u'_{i-1} = -a u_{i+1} + u_i + a u_{i-1}``."""
    u = np.asarray(u, dtype=float)
    rhs = u - alpha * (np.roll(u, -1) - np.roll(u, 1))
    return solve_cyclic_tridiagonal(-alpha, 1.0, alpha, rhs)


def rk2_step(fields: Mapping[str, np.ndarray], spec: RhsSpec, dt: float, step: int | None = None) -> FieldSet:
    """Heun step applied to every evolved field simultaneously."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    base = dict(fields)
    star = dict(base)
    for name in spec.fields:
        star[name] = base[name] + dt * apply_rhs(spec, base, name)
    new = dict(base)
    for name in spec.fields:
        new[name] = 0.5 * (base[name] + star[name] + dt * apply_rhs(spec, star, name))
        if not np.all(np.isfinite(new[name])):
            raise InstabilityError(f"non-finite values in field {name!r}", step)
    return new


def evolve_classical(problem: Problem, domain: Domain, stride: int = 1) -> Trajectory:
    fields = initial_fields(problem, domain)
    traj = Trajectory(domain, problem.fields)
    traj.record(0, fields)
    spec = problem.spec(domain.dx)
    alpha = 0.25 * problem.v * domain.dt / domain.dx
    for n in range(1, domain.n_steps + 1):
        t0 = time.perf_counter()
        if problem.scheme == "cn":
            u = cn_advection_step(fields["u"], alpha)
            if not np.all(np.isfinite(u)):
                raise InstabilityError("non-finite values in field 'u'", n)
            fields = {"u": u}
        else:
            fields = rk2_step(fields, spec, domain.dt, step=n)
        traj.stats.append(StepStats(n, domain.time(n), wall_ms=1e3 * (time.perf_counter() - t0)))
        if n % stride == 0 or n == domain.n_steps:
            traj.record(n, fields)
    return traj
