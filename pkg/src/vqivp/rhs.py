"""Right-hand sides as sums of ``coeff * D[diag] * S^shift [source]`` terms.

The same description drives the classical stencils and the variational cost
functions, so both paths discretize the equation identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

MAX_SHIFT = 2


class FieldReferenceError(KeyError):
    pass


@dataclass(frozen=True)
class RhsTerm:
    coeff: float
    shift: int
    source: str
    diag: Optional[str] = None

    def __post_init__(self):
        if abs(self.shift) > MAX_SHIFT:
            raise ValueError(f"shift {self.shift} outside [-{MAX_SHIFT}, {MAX_SHIFT}]")


@dataclass(frozen=True)
class RhsSpec:
    terms: Dict[str, Tuple[RhsTerm, ...]] = field(default_factory=dict)

    def __post_init__(self):
        for name, ts in self.terms.items():
            if not ts:
                raise ValueError(f"field {name!r} has an empty right-hand side")

    @property
    def fields(self) -> Tuple[str, ...]:
        return tuple(self.terms)

    def __getitem__(self, target: str) -> Tuple[RhsTerm, ...]:
        try:
            return self.terms[target]
        except KeyError:
            raise FieldReferenceError(target) from None

    @property
    def linear(self) -> bool:
        return all(t.diag is None for ts in self.terms.values() for t in ts)


def rhs_spec_advection(v: float, dx: float) -> RhsSpec:
    """``u_t = -v u_x`` with the centered difference."""
    _check_dx(dx)
    c = v / (2.0 * dx)
    return RhsSpec({"u": (RhsTerm(-c, +1, "u"), RhsTerm(c, -1, "u"))})


def rhs_spec_wave(dx: float) -> RhsSpec:
    """First-order wave system ``P_t = Q_x``, ``Q_t = P_x``, ``phi_t = P``."""
    _check_dx(dx)
    c = 1.0 / (2.0 * dx)
    return RhsSpec({
        "P": (RhsTerm(c, +1, "Q"), RhsTerm(-c, -1, "Q")),
        "Q": (RhsTerm(c, +1, "P"), RhsTerm(-c, -1, "P")),
        "phi": (RhsTerm(1.0, 0, "P"),),
    })


def rhs_spec_burgers(nu: float, dx: float) -> RhsSpec:
    """``u_t = -u u_x + nu u_xx``; the advective factor is a diagonal field."""
    _check_dx(dx)
    if nu < 0:
        raise ValueError("viscosity must be non-negative")
    c = 1.0 / (2.0 * dx)
    d = nu / dx**2
    return RhsSpec({"u": (
        RhsTerm(-c, +1, "u", diag="u"),
        RhsTerm(c, -1, "u", diag="u"),
        RhsTerm(d, +1, "u"),
        RhsTerm(-2.0 * d, 0, "u"),
        RhsTerm(d, -1, "u"),
    )})


def apply_rhs(spec: RhsSpec, fields: Mapping[str, np.ndarray], target: str) -> np.ndarray:
    """Evaluate the discrete right-hand side of ``target`` on sampled fields."""
    out = None
    for term in spec[target]:
        try:
            src = fields[term.source]
            d = None if term.diag is None else fields[term.diag]
        except KeyError as err:
            raise FieldReferenceError(err.args[0]) from None
        contrib = term.coeff * np.roll(src, -term.shift)
        if d is not None:
            contrib = d * contrib
        out = contrib if out is None else out + contrib
    return out


def _check_dx(dx: float) -> None:
    if not dx > 0:
        raise ValueError(f"dx must be positive, got {dx}")
