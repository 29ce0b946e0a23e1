"""Discrete periodic space-time domain."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 24


class ConfigurationError(ValueError):
    """Raised for inconsistent run parameters."""


class CapacityError(ConfigurationError):
    """Raised when a requested grid is too large to hold in memory."""


@dataclass(frozen=True)
class Domain:
    n_qubits: int
    N: int
    x_min: float
    x_max: float
    dx: float
    cfl: float
    dt: float
    t_final: float
    n_steps: int

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.N)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    def time(self, step: int) -> float:
        return step * self.dt


def build_domain(n_qubits: int, x_min: float, x_max: float, cfl: float, t_final: float) -> Domain:
    if n_qubits < 1:
        raise ConfigurationError(f"n_qubits must be >= 1, got {n_qubits}")
    if n_qubits > MAX_QUBITS:
        raise CapacityError(f"n_qubits={n_qubits} exceeds the cap of {MAX_QUBITS}")
    if not x_max > x_min:
        raise ConfigurationError("x_max must exceed x_min")
    if not cfl > 0:
        raise ConfigurationError(f"cfl must be positive, got {cfl}")
    if not t_final > 0:
        raise ConfigurationError(f"t_final must be positive, got {t_final}")

    N = 2**n_qubits
    dx = (x_max - x_min) / N
    dt = cfl * dx
    n_steps = int(round(t_final / dt))
    # convergence tests rely on coarse step k landing on fine step 2k
    if n_steps < 1 or not math.isclose(n_steps * dt, t_final, rel_tol=1e-12):
        raise ConfigurationError(
            f"t_final={t_final} is not an integer multiple of dt={dt}"
        )
    return Domain(n_qubits, N, float(x_min), float(x_max), dx, float(cfl), dt, float(t_final), n_steps)


def wrap_index(i: int, N: int) -> int:
    return i % N
