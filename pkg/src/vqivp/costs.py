"""Variational cost functions for Crank-Nicolson and Heun (RK2) time steps.

Each cost is the squared norm of a discrete-equation residual with the part
that does not depend on the trial parameters dropped. The residual is built
from ``RhsSpec`` terms and expanded into shift/diagonal products, each of
which is dispatched to the product engine (one simulated circuit apiece).

State names: the trial state is ``TRIAL``; states frozen during a
minimization are ``"<field>~"`` (time level n) and ``"<field>*"`` (the
intermediate RK2 stage).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import ansatz
from .ansatz import ParamVector, shift_phase
from .engine import EngineMode, ProductRequest, product, product_fast
from .grid import Domain
from .rhs import FieldReferenceError, RhsSpec

TRIAL = "@"


class UnsupportedNonlinearityError(ValueError):
    pass


def tilde(name: str) -> str:
    return name + "~"


def star(name: str) -> str:
    return name + "*"


@dataclass(frozen=True)
class KetTerm:
    """``coeff * D[diag] S^shift |state>``."""

    coeff: float
    state: str
    shift: int = 0
    diag: Optional[str] = None


@dataclass(frozen=True)
class ProductTerm:
    """``weight * Re <S^bra_shift bra| D[diag] S^shift |ket>``."""

    weight: float
    bra: str
    ket: str
    shift: int
    diag: Optional[str] = None
    bra_shift: int = 0

    @property
    def key(self):
        return (self.bra, self.ket, self.shift, self.diag, self.bra_shift)


@dataclass
class CostContext:
    domain: Domain
    mode: EngineMode
    frozen: Dict[str, ParamVector]
    spec: RhsSpec
    dt: float
    rng: Optional[np.random.Generator] = None
    alpha: Optional[float] = None
    _vectors: Dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.mode.sampled and self.rng is None:
            self.rng = self.mode.make_rng()

    @property
    def N(self) -> int:
        return self.domain.N

    def vector(self, name: str) -> np.ndarray:
        """Sampled values of a frozen state (cached)."""
        if name not in self._vectors:
            self._vectors[name] = ansatz.evaluate(self.state(name), self.N)
        return self._vectors[name]

    def state(self, name: str) -> ParamVector:
        try:
            return self.frozen[name]
        except KeyError:
            raise FieldReferenceError(name) from None


def rhs_kets(spec: RhsSpec, target: str, level: str, coeff: float = 1.0) -> List[KetTerm]:
    """Terms of ``coeff * rhs(target)`` with sources bound to a time level.

    ``level`` is ``"~"``, ``"*"`` or ``TRIAL`` (sources become the trial state).
    """
    out = []
    for t in spec[target]:
        if level == TRIAL:
            if t.source != target:
                raise UnsupportedNonlinearityError(
                    f"implicit coupling of {target!r} to {t.source!r} is not supported")
            src = TRIAL
            d = None if t.diag is None else TRIAL
        else:
            src = t.source + level
            d = None if t.diag is None else t.diag + level
        out.append(KetTerm(coeff * t.coeff, src, t.shift, d))
    return out


def expand_inner(left: Sequence[KetTerm], right: Sequence[KetTerm], weight: float = 1.0) -> List[ProductTerm]:
    """Expand ``weight * Re <left|right>`` into elementary products."""
    out = []
    for a in left:
        for b in right:
            w = weight * a.coeff * b.coeff
            if w == 0.0:
                continue
            if a.diag is not None and b.diag is not None:
                raise UnsupportedNonlinearityError("product with two diagonal fields")
            if a.diag is not None:
                # fields are real, so Re<a|b> = Re<b|a>
                a, b = b, a
            if b.diag is None:
                out.append(ProductTerm(w, a.state, b.state, b.shift - a.shift))
            else:
                out.append(ProductTerm(w, a.state, b.state, b.shift, b.diag, a.shift))
    return out


def _canonical(term: ProductTerm) -> ProductTerm:
    if term.diag is not None or term.bra_shift:
        return term
    bra, ket, s = term.bra, term.ket, term.shift
    # Re<a|S^s|b> = Re<b|S^-s|a> for real fields
    if ket == TRIAL and bra != TRIAL:
        bra, ket, s = ket, bra, -s
    elif bra == ket:
        s = abs(s)
    return ProductTerm(term.weight, bra, ket, s)


def merge_terms(terms: Sequence[ProductTerm]) -> List[ProductTerm]:
    acc: Dict[tuple, float] = defaultdict(float)
    order = []
    for t in map(_canonical, terms):
        if t.key not in acc:
            order.append(t.key)
        acc[t.key] += t.weight
    merged = []
    for key in order:
        w = acc[key]
        if abs(w) > 0.0:
            bra, ket, s, d, bs = key
            merged.append(ProductTerm(w, bra, ket, s, d, bs))
    return merged


def _kets_vector(kets: Sequence[KetTerm], ctx: CostContext) -> np.ndarray:
    out = np.zeros(ctx.N)
    for k in kets:
        v = k.coeff * np.roll(ctx.vector(k.state), -k.shift)
        if k.diag is not None:
            v = ctx.vector(k.diag) * v
        out += v
    return out


class CostFunction:
    """Callable cost over trial parameters, plus its dropped constant."""

    def __init__(self, terms: Sequence[ProductTerm], ctx: CostContext, constant: float, label: str = ""):
        self.terms = merge_terms(terms)
        self.ctx = ctx
        self.constant = float(constant)
        self.label = label
        for t in self.terms:
            if TRIAL not in (t.bra, t.ket):
                raise AssertionError("constant product left in cost terms")
            if t.diag == TRIAL:
                raise UnsupportedNonlinearityError("diagonal field bound to the trial state")

    def _resolve(self, name: str, trial: ParamVector) -> ParamVector:
        return trial if name == TRIAL else self.ctx.state(name)

    def evaluate(self, trial: ParamVector, mode: EngineMode, rng=None) -> float:
        N = self.ctx.N
        total = 0.0
        for t in self.terms:
            bra = self._resolve(t.bra, trial)
            if t.bra_shift:
                bra = shift_phase(bra, t.bra_shift, N)
            ket = self._resolve(t.ket, trial)
            if t.diag is None and not mode.sampled:
                total += t.weight * product_fast(bra, ket, t.shift, N)
                continue
            diag = None if t.diag is None else self.ctx.vector(t.diag)
            total += t.weight * product(ProductRequest(bra, ket, t.shift, N, diag), mode, rng)
        return total

    def __call__(self, trial: ParamVector) -> float:
        return self.evaluate(trial, self.ctx.mode, self.ctx.rng)

    def exact(self, trial: ParamVector) -> float:
        """Noise-free cost, regardless of the context's mode."""
        return self.evaluate(trial, EngineMode.svf())

    def residual_norm2(self, trial: ParamVector) -> float:
        """Exact cost with the dropped constant restored."""
        return self.exact(trial) + self.constant

    @property
    def n_products(self) -> int:
        return len(self.terms)


def _residual_cost(trial_kets: Sequence[KetTerm], frozen_kets: Sequence[KetTerm],
                   ctx: CostContext, label: str) -> CostFunction:
    """Cost ``||X(trial) - B||^2`` minus ``||B||^2``."""
    terms = expand_inner(trial_kets, trial_kets) + expand_inner(trial_kets, frozen_kets, -2.0)
    b = _kets_vector(frozen_kets, ctx)
    return CostFunction(terms, ctx, float(np.dot(b, b)), label)


# -- Crank-Nicolson ---------------------------------------------------------

def build_cn_generic(ctx: CostContext, target: str = "u") -> CostFunction:
    """``||u - u~ - dt/2 (rhs + rhs~)||^2`` for a linear, single-field spec."""
    if not ctx.spec.linear:
        raise UnsupportedNonlinearityError("Crank-Nicolson costs need a linear right-hand side")
    h = 0.5 * ctx.dt
    trial = [KetTerm(1.0, TRIAL)] + rhs_kets(ctx.spec, target, TRIAL, -h)
    frozen = [KetTerm(1.0, tilde(target))] + rhs_kets(ctx.spec, target, "~", h)
    return _residual_cost(trial, frozen, ctx, f"cn[{target}]")


def build_cn_advection(ctx: CostContext, target: str = "u") -> CostFunction:
    """Advection cost grouped as five circuit families::

        (1+2a^2)<u|u> + (4a^2-2) Re<u|u~> + 4a Re<u|S-S^-1|u~>
        - 2a^2 Re<u|S^2|u> - 2a^2 Re<u|S^2+S^-2|u~>
    """
    a = ctx.alpha
    if a is None:
        raise ValueError("advection cost needs alpha = v dt / (4 dx)")
    ut = tilde(target)
    terms = [
        ProductTerm(1.0 + 2 * a * a, TRIAL, TRIAL, 0),
        ProductTerm(-2.0 + 4 * a * a, TRIAL, ut, 0),
        ProductTerm(4 * a, TRIAL, ut, 1),
        ProductTerm(-4 * a, TRIAL, ut, -1),
        ProductTerm(-2 * a * a, TRIAL, TRIAL, 2),
        ProductTerm(-2 * a * a, TRIAL, ut, 2),
        ProductTerm(-2 * a * a, TRIAL, ut, -2),
    ]
    u = ctx.vector(ut)
    b = u - a * (np.roll(u, -1) - np.roll(u, 1))
    return CostFunction(terms, ctx, float(np.dot(b, b)), f"cn-advection[{target}]")


# -- Heun RK2 ----------------------------------------------------------------

def build_rk2a(ctx: CostContext, target: str) -> CostFunction:
    """``<u*|u*> - 2 Re<u*|u~> - 2 dt Re<u*|rhs~>``."""
    frozen = [KetTerm(1.0, tilde(target))] + rhs_kets(ctx.spec, target, "~", ctx.dt)
    return _residual_cost([KetTerm(1.0, TRIAL)], frozen, ctx, f"rk2a[{target}]")


def build_rk2b(ctx: CostContext, target: str) -> CostFunction:
    """``<u|u> - Re<u|u~> - Re<u|u*> - dt Re<u|rhs*>``."""
    frozen = ([KetTerm(0.5, tilde(target)), KetTerm(0.5, star(target))]
              + rhs_kets(ctx.spec, target, "*", 0.5 * ctx.dt))
    return _residual_cost([KetTerm(1.0, TRIAL)], frozen, ctx, f"rk2b[{target}]")


def cf_cn_generic(trial: ParamVector, ctx: CostContext, target: str = "u") -> float:
    return build_cn_generic(ctx, target)(trial)


def cf_cn_advection(trial: ParamVector, ctx: CostContext, target: str = "u") -> float:
    return build_cn_advection(ctx, target)(trial)


def cf_rk2a(trial: ParamVector, ctx: CostContext, target: str) -> float:
    return build_rk2a(ctx, target)(trial)


def cf_rk2b(trial: ParamVector, ctx: CostContext, target: str) -> float:
    return build_rk2b(ctx, target)(trial)
