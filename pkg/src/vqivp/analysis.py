"""Exact solutions, L1 norms, and (self-)convergence factors.

Resolutions are compared on the coarse grid: coarse point ``i`` coincides with
fine point ``2i``, and with a fixed CFL coarse step ``k`` with fine step
``2k``. Second-order methods give factors close to 4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Union

import numpy as np

from .ansatz import evaluate, params_from_samples
from .grid import Domain
from .problems import Problem, Trajectory

ExactFn = Callable[[np.ndarray, float], np.ndarray]

RATIO_FLOOR = 1e-14
DEFAULT_WINDOW = (0.1, 1.0)


class AlignmentError(ValueError):
    pass


def _wrap(x, length: float = 1.0, x_min: float = 0.0):
    return x_min + np.mod(np.asarray(x, dtype=float) - x_min, length)


def exact_advection(problem: Problem, x, t: float, length: float = 1.0, x_min: float = 0.0):
    return problem.gaussian(_wrap(np.asarray(x) - problem.v * t, length, x_min))


def exact_wave(problem: Problem, x, t: float, length: float = 1.0, x_min: float = 0.0):
    """d'Alembert solution for the time-symmetric pulse."""
    x = np.asarray(x)
    return 0.5 * (problem.gaussian(_wrap(x - t, length, x_min))
                  + problem.gaussian(_wrap(x + t, length, x_min)))


def exact_advection_bandlimited(problem: Problem, domain: Domain, M: int, t: float) -> np.ndarray:
    """Exact transport of the ``M``-mode projection of the sampled initial data.

    This is the continuum solution of the initial data actually loaded into
    the ansatz; each mode is advected by a phase.
    """
    c0 = params_from_samples(problem.gaussian(domain.x), M)
    p = np.arange(-M, M + 1)
    # u(x - v t): each mode picks up exp(+2j pi p v t / L) in the e^{-2j pi p x} basis
    phase = np.exp(2j * np.pi * p * problem.v * t / domain.length)
    return evaluate(type(c0)(M, c0.coeffs * phase), domain.N)


def exact_fn(problem: Problem, domain: Domain) -> ExactFn:
    """Exact solution of the observable field as ``f(x, t)``."""
    if problem.equation == "advection":
        return lambda x, t: exact_advection(problem, x, t, domain.length, domain.x_min)
    if problem.equation == "wave":
        return lambda x, t: exact_wave(problem, x, t, domain.length, domain.x_min)
    raise ValueError("no exact solution is known for the Burgers equation")


def l1_norm(err, dx: float) -> float:
    return float(np.sum(np.abs(err)) * dx)


def inject(fine: np.ndarray, factor: int = 2) -> np.ndarray:
    """Restrict fine-grid samples to the coarse grid pointwise."""
    return np.asarray(fine)[..., ::factor]


def _ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.full(np.shape(num), np.nan)
    ok = den > RATIO_FLOOR
    out[ok] = num[ok] / den[ok]
    return out


def window_factor(num: np.ndarray, den: np.ndarray, times: np.ndarray,
                  window=DEFAULT_WINDOW) -> Optional[float]:
    """Ratio of the time-averaged numerator and denominator over ``window``."""
    times = np.asarray(times)
    sel = (times >= window[0] - 1e-12) & (times <= window[1] + 1e-12)
    if not np.any(sel):
        return None
    d = float(np.mean(den[sel]))
    return float(np.mean(num[sel])) / d if d > RATIO_FLOOR else None


def window_mean_ratio(ratio: np.ndarray, times: np.ndarray, window=DEFAULT_WINDOW) -> Optional[float]:
    """Time average of a pointwise ratio series over ``window``."""
    times = np.asarray(times)
    sel = (times >= window[0] - 1e-12) & (times <= window[1] + 1e-12) & np.isfinite(ratio)
    return float(np.mean(ratio[sel])) if np.any(sel) else None


@dataclass
class ConvergenceReport:
    """Errors (or differences) on the coarsest common time levels.

    For convergence, ``errors[n]`` is the L1 error of resolution ``n`` and
    ``ratios[(n, n+1)]`` the factor between consecutive resolutions. For
    self-convergence, ``num``/``den`` hold the L1 differences of
    consecutive pairs and ``ratios[(n, n+1, n+2)]`` their quotient.
    """

    times: np.ndarray
    kind: str
    errors: Dict[int, np.ndarray] = field(default_factory=dict)
    num: Dict[int, np.ndarray] = field(default_factory=dict)
    den: Dict[int, np.ndarray] = field(default_factory=dict)
    ratios: Dict[tuple, np.ndarray] = field(default_factory=dict)
    window_factors: Dict[tuple, Optional[float]] = field(default_factory=dict)
    window_mean_ratios: Dict[tuple, Optional[float]] = field(default_factory=dict)

    def summary(self) -> List[str]:
        lines = []
        for key, fac in self.window_factors.items():
            mr = self.window_mean_ratios.get(key)
            lines.append(f"{self.kind} {key}: window factor {_fmt(fac)}, mean ratio {_fmt(mr)}")
        return lines


def _fmt(v):
    return "n/a" if v is None else f"{v:.3f}"


def _aligned(trajs: Mapping[int, Trajectory], field_name: str):
    """Coarse-level time series of each resolution, injected to the coarsest grid."""
    ns = sorted(trajs)
    if len(ns) < 2:
        raise AlignmentError("need at least two resolutions")
    for a, b in zip(ns, ns[1:]):
        if b != a + 1:
            raise AlignmentError(f"resolutions must be consecutive, got {ns}")
    coarse = trajs[ns[0]]
    times = np.asarray(coarse.times)
    series = {}
    for n in ns:
        tr = trajs[n]
        rows = []
        for k in coarse.steps:
            fine_step = k * 2 ** (n - ns[0])
            try:
                idx = tr.steps.index(fine_step)
            except ValueError:
                raise AlignmentError(f"resolution {n} has no snapshot at step {fine_step}") from None
            if not np.isclose(tr.times[idx], coarse.domain.time(k), rtol=0, atol=1e-12):
                raise AlignmentError(f"time mismatch at coarse step {k}")
            rows.append(tr.snapshots[idx][field_name])
        series[n] = np.array(rows)
    return ns, times, series


def convergence_factors(trajs: Mapping[int, Trajectory],
                        exact: Union[ExactFn, Mapping[int, ExactFn]], field_name: str = "u",
                        window=DEFAULT_WINDOW) -> ConvergenceReport:
    """L1 errors against ``exact(x, t)`` for each resolution at shared times.

    ``exact`` may also map each resolution to its own reference.
    """
    ns, times, _ = _aligned(trajs, field_name)
    coarse = trajs[ns[0]]
    report = ConvergenceReport(times, "convergence")
    for n in ns:
        tr = trajs[n]
        ref = exact[n] if isinstance(exact, Mapping) else exact
        x = tr.domain.x
        step_factor = 2 ** (n - ns[0])
        errs = []
        for k in coarse.steps:
            idx = tr.steps.index(k * step_factor)
            errs.append(l1_norm(tr.snapshots[idx][field_name] - ref(x, tr.times[idx]), tr.domain.dx))
        report.errors[n] = np.array(errs)
    for a, b in zip(ns, ns[1:]):
        r = _ratio(report.errors[a], report.errors[b])
        report.ratios[(a, b)] = r
        report.window_factors[(a, b)] = window_factor(report.errors[a], report.errors[b], times, window)
        report.window_mean_ratios[(a, b)] = window_mean_ratio(r, times, window)
    return report


def self_convergence_factors(trajs: Mapping[int, Trajectory], field_name: str = "u",
                             window=DEFAULT_WINDOW) -> ConvergenceReport:
    """``SC = L1(u_n - u_{n+1}) / L1(u_{n+1} - u_{n+2})`` on the grid of ``u_n``."""
    ns, times, series = _aligned(trajs, field_name)
    if len(ns) < 3:
        raise AlignmentError("self-convergence needs three resolutions")
    report = ConvergenceReport(times, "self-convergence")
    for a, b, c in zip(ns, ns[1:], ns[2:]):
        dx = trajs[a].domain.dx
        fa = series[a]
        fb = inject(series[b], 2)
        fc = inject(series[c], 4)
        num = np.array([l1_norm(r, dx) for r in fa - fb])
        den = np.array([l1_norm(r, dx) for r in fb - fc])
        report.num[a], report.den[a] = num, den
        r = _ratio(num, den)
        report.ratios[(a, b, c)] = r
        report.window_factors[(a, b, c)] = window_factor(num, den, times, window)
        report.window_mean_ratios[(a, b, c)] = window_mean_ratio(r, times, window)
    return report
