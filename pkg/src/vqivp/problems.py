"""Model problems, their initial data, and the trajectory record."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .grid import Domain
from .rhs import RhsSpec, rhs_spec_advection, rhs_spec_burgers, rhs_spec_wave

EQUATIONS = ("advection", "wave", "burgers")

FieldSet = Dict[str, np.ndarray]


@dataclass(frozen=True)
class Problem:
    equation: str
    v: float = 1.0
    nu: float = 0.0125
    x0: float = 0.5
    sigma: float = 0.15

    def __post_init__(self):
        if self.equation not in EQUATIONS:
            raise ValueError(f"unknown equation {self.equation!r}; expected one of {EQUATIONS}")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.nu < 0:
            raise ValueError("nu must be non-negative")

    @classmethod
    def advection(cls, v: float = 1.0, **kw) -> "Problem":
        return cls("advection", v=v, **kw)

    @classmethod
    def wave(cls, **kw) -> "Problem":
        return cls("wave", **kw)

    @classmethod
    def burgers(cls, nu: float = 0.0125, **kw) -> "Problem":
        return cls("burgers", nu=nu, **kw)

    @property
    def fields(self) -> Tuple[str, ...]:
        return ("P", "Q", "phi") if self.equation == "wave" else ("u",)

    @property
    def observable(self) -> str:
        """Field compared against exact or self-convergence references."""
        return "phi" if self.equation == "wave" else "u"

    @property
    def scheme(self) -> str:
        return "cn" if self.equation == "advection" else "rk2"

    def spec(self, dx: float) -> RhsSpec:
        if self.equation == "advection":
            return rhs_spec_advection(self.v, dx)
        if self.equation == "wave":
            return rhs_spec_wave(dx)
        return rhs_spec_burgers(self.nu, dx)

    def gaussian(self, x: np.ndarray) -> np.ndarray:
        return np.exp(-((x - self.x0) ** 2) / self.sigma**2)

    def gaussian_dx(self, x: np.ndarray) -> np.ndarray:
        return -2.0 * (x - self.x0) / self.sigma**2 * self.gaussian(x)


def initial_fields(problem: Problem, domain: Domain) -> FieldSet:
    x = domain.x
    if problem.equation == "wave":
        # time-symmetric pulse: phi_t = 0, so P = 0 and Q = phi_x
        return {
            "P": np.zeros(domain.N),
            "Q": problem.gaussian_dx(x),
            "phi": problem.gaussian(x),
        }
    return {"u": problem.gaussian(x)}


@dataclass
class StepStats:
    step: int
    t: float
    minimizations: int = 0
    cost_evals: int = 0
    best_cost: float = float("nan")
    wall_ms: float = 0.0


@dataclass
class Trajectory:
    """Snapshots ``(step, t, fields)`` and per-step optimizer statistics."""

    domain: Domain
    field_names: Tuple[str, ...]
    steps: List[int] = field(default_factory=list)
    times: List[float] = field(default_factory=list)
    snapshots: List[FieldSet] = field(default_factory=list)
    stats: List[StepStats] = field(default_factory=list)

    def record(self, step: int, fields: FieldSet) -> None:
        self.steps.append(step)
        self.times.append(self.domain.time(step))
        self.snapshots.append({k: np.array(fields[k], dtype=float) for k in self.field_names})

    def series(self, name: str) -> np.ndarray:
        """Array of shape (n_snapshots, N) for one field."""
        return np.array([s[name] for s in self.snapshots])

    def at_step(self, step: int) -> FieldSet:
        return self.snapshots[self.steps.index(step)]

    @property
    def final(self) -> FieldSet:
        return self.snapshots[-1]

    @property
    def total_evals(self) -> int:
        return sum(s.cost_evals for s in self.stats)

    @property
    def avg_evals_per_step(self) -> float:
        return self.total_evals / len(self.stats) if self.stats else 0.0
