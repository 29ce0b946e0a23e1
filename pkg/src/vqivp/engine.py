"""Inner-product primitives evaluated exactly (SVF) or with shot noise (SEF).

Every cost-function term reduces to ``Re <bra| D S^s |ket>`` where ``S`` is
the periodic shift ``(S u)_i = u_{i+1}`` and ``D`` an optional diagonal
field. On hardware such a product is the ancilla expectation of a Hadamard
test, ``<sigma_z> = P0 - P1``, scaled by the norms of the loaded states.
Here the states are built classically from their Fourier coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .ansatz import ParamVector, ShapeError, evaluate

# above this shot count the binomial draw uses its Gaussian limit
GAUSSIAN_SHOTS_THRESHOLD = 10**7


@dataclass(frozen=True)
class EngineMode:
    """``shots=None`` selects exact SVF evaluation; otherwise SEF with T shots."""

    shots: Optional[int] = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.shots is not None and self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")

    @property
    def sampled(self) -> bool:
        return self.shots is not None

    @classmethod
    def svf(cls) -> "EngineMode":
        return cls()

    @classmethod
    def sef(cls, shots: int, rng_seed: int = 0) -> "EngineMode":
        return cls(int(shots), int(rng_seed))

    def make_rng(self) -> np.random.Generator:
        return np.random.default_rng(self.rng_seed)

    def __str__(self) -> str:
        return "svf" if self.shots is None else f"sef(T={self.shots:g}, seed={self.rng_seed})"


@dataclass(frozen=True)
class ProductRequest:
    bra: ParamVector
    ket: ParamVector
    shift: int
    N: int
    diag: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.diag is not None and np.shape(self.diag) != (self.N,):
            raise ShapeError(f"diag field must have length {self.N}")


def product_exact(req: ProductRequest) -> float:
    """``sum_i bra_i d_i ket_{i+s}`` from physical-space vectors."""
    bra = evaluate(req.bra, req.N)
    ket = np.roll(evaluate(req.ket, req.N), -req.shift)
    if req.diag is not None:
        ket = req.diag * ket
    return float(np.dot(bra, ket))


def product_fast(bra: ParamVector, ket: ParamVector, shift: int, N: int) -> float:
    """Diag-free product computed on the coefficients.

    The shift is diagonal in Fourier space, so
    ``<bra|S^s|ket> = N Re sum_p conj(b_p) k_p exp(-2j pi p s / N)``.
    """
    if bra.M != ket.M:
        M = min(bra.M, ket.M)
        b = bra.coeffs[bra.M - M: bra.M + M + 1]
        k = ket.coeffs[ket.M - M: ket.M + M + 1]
    else:
        M, b, k = bra.M, bra.coeffs, ket.coeffs
    prod = np.conj(b) * k
    if shift:
        prod = prod * _shift_phase(M, shift, N)
    return float(N * prod.real.sum())


@lru_cache(maxsize=1024)
def _shift_phase(M: int, shift: int, N: int) -> np.ndarray:
    p = np.arange(-M, M + 1)
    out = np.exp(-2j * np.pi * p * shift / N)
    out.setflags(write=False)
    return out


def sef_sample(sigma_z: float, shots: int, rng: np.random.Generator) -> float:
    """Estimate ``<sigma_z>`` from ``shots`` simulated ancilla measurements."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if abs(sigma_z) > 1.0 + 1e-9:
        raise ValueError(f"<sigma_z> = {sigma_z} outside [-1, 1]")
    p0 = min(1.0, max(0.0, 0.5 * (1.0 + sigma_z)))
    if shots > GAUSSIAN_SHOTS_THRESHOLD:
        var = shots * p0 * (1.0 - p0)
        zeros = np.rint(shots * p0 + np.sqrt(var) * rng.standard_normal())
        zeros = min(max(zeros, 0.0), float(shots))
    else:
        zeros = float(rng.binomial(shots, p0))
    return 2.0 * zeros / shots - 1.0


def product(req: ProductRequest, mode: EngineMode, rng: Optional[np.random.Generator] = None) -> float:
    """Evaluate a product request under the given execution mode."""
    if not mode.sampled:
        if req.diag is None:
            return product_fast(req.bra, req.ket, req.shift, req.N)
        return product_exact(req)

    if rng is None:
        raise ValueError("SEF evaluation needs an RNG stream")
    scale = req.bra.norm(req.N) * req.ket.norm(req.N)
    if req.diag is not None:
        scale *= float(np.linalg.norm(req.diag))
    if scale == 0.0:
        # a zero-norm state is known classically; nothing to measure
        return 0.0
    exact = product_fast(req.bra, req.ket, req.shift, req.N) if req.diag is None else product_exact(req)
    sigma_z = exact / scale
    return scale * sef_sample(sigma_z, mode.shots, rng)
