"""Truncated Fourier series parameterization of a real periodic field.

A field sampled on ``N`` points is represented as

    u_i = sum_{p=-M}^{M} c_p exp(-2j*pi*p*i/N)

with Hermitian symmetry ``c_{-p} = conj(c_p)``, which leaves ``2M+1`` real
degrees of freedom. Coefficients are stored unnormalized, so their overall
scale doubles as the amplitude (norm) of the represented function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ModeOverflowError(ValueError):
    """Raised when 2M+1 modes do not fit on the requested grid."""


class ShapeError(ValueError):
    pass


_HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class ParamVector:
    """Fourier coefficients ``c_p`` for ``p = -M..M`` (``coeffs[p + M]``)."""

    M: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != (2 * self.M + 1,):
            raise ShapeError(f"expected {2 * self.M + 1} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __getitem__(self, p: int) -> complex:
        if abs(p) > self.M:
            raise IndexError(p)
        return self.coeffs[p + self.M]

    @property
    def n_params(self) -> int:
        return 2 * self.M + 1

    def is_hermitian(self, tol: float = _HERMITIAN_TOL) -> bool:
        c = self.coeffs
        scale = max(1.0, float(np.max(np.abs(c))))
        return bool(np.all(np.abs(c - np.conj(c[::-1])) <= tol * scale))

    def norm(self, N: int) -> float:
        """Euclidean norm of the sampled field, via Parseval."""
        return float(np.sqrt(N * np.sum(np.abs(self.coeffs) ** 2)))

    def scaled(self, factor: float) -> "ParamVector":
        return ParamVector(self.M, factor * self.coeffs)

    @classmethod
    def zeros(cls, M: int) -> "ParamVector":
        return cls(M, np.zeros(2 * M + 1, dtype=complex))

    @classmethod
    def from_positive(cls, positive: np.ndarray) -> "ParamVector":
        """Build from ``c_0..c_M``; negative modes follow by symmetry."""
        pos = np.asarray(positive, dtype=complex)
        M = pos.size - 1
        pos = pos.copy()
        pos[0] = pos[0].real
        return cls(M, np.concatenate([np.conj(pos[:0:-1]), pos]))


def _check_fits(M: int, N: int) -> None:
    if 2 * M + 1 > N:
        raise ModeOverflowError(f"2M+1 = {2 * M + 1} modes exceed N = {N} grid points")


def _mode_indices(M: int, N: int) -> np.ndarray:
    """FFT bin holding mode p, for p = -M..M."""
    return np.arange(-M, M + 1) % N


def evaluate(params: ParamVector, N: int) -> np.ndarray:
    """Sample the represented field on ``N`` points."""
    _check_fits(params.M, N)
    spectrum = np.zeros(N, dtype=complex)
    spectrum[_mode_indices(params.M, N)] = params.coeffs
    # sum_p c_p exp(-2j pi p i / N) is a forward DFT of the spectrum
    u = np.fft.fft(spectrum)
    residue = np.max(np.abs(u.imag)) if N else 0.0
    scale = max(1.0, float(np.max(np.abs(u.real))))
    assert residue <= 1e-10 * scale, f"non-Hermitian coefficients (imag residue {residue:.3e})"
    return u.real.copy()


def params_from_samples(u: np.ndarray, M: int) -> ParamVector:
    """Project samples onto the lowest ``2M+1`` Fourier modes.

    Uses ``F_k = (1/N) sum_i u_i exp(+2j pi k i / N)``; the first ``M+1`` and
    last ``M`` bins of the transform are the kept coefficients.
    """
    u = np.asarray(u, dtype=float)
    N = u.size
    _check_fits(M, N)
    F = np.fft.ifft(u)
    coeffs = F[_mode_indices(M, N)]
    # exact Hermitian symmetry for real input
    pos = coeffs[M:]
    return ParamVector.from_positive(pos)


def shift_phase(params: ParamVector, s: int, N: int) -> ParamVector:
    """Coefficients of the cyclically shifted field ``u_{i+s}``."""
    if s == 0:
        return params
    p = np.arange(-params.M, params.M + 1)
    return ParamVector(params.M, params.coeffs * np.exp(-2j * np.pi * p * s / N))


def pack_real(params: ParamVector) -> np.ndarray:
    """``[c_0, Re c_1, Im c_1, ..., Re c_M, Im c_M]``."""
    M = params.M
    pos = params.coeffs[M + 1:]
    out = np.empty(2 * M + 1)
    out[0] = params.coeffs[M].real
    out[1::2] = pos.real
    out[2::2] = pos.imag
    return out


def unpack_real(values: np.ndarray, M: int) -> ParamVector:
    values = np.asarray(values, dtype=float)
    if values.shape != (2 * M + 1,):
        raise ShapeError(f"expected {2 * M + 1} real values, got shape {values.shape}")
    pos = np.empty(M + 1, dtype=complex)
    pos[0] = values[0]
    pos[1:] = values[1::2] + 1j * values[2::2]
    return ParamVector.from_positive(pos)


def default_modes(n_qubits: int, cap: int) -> int:
    """``M = 2^m - 1`` with ``m = n - 1``, limited to ``cap``."""
    return min(2 ** (n_qubits - 1) - 1, cap)
