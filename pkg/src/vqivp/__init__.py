"""Variational-quantum time stepping for periodic 1+1-D PDEs.

Fields are encoded by a truncated real Fourier ansatz; each time step is a
Nelder-Mead minimization of a Crank-Nicolson or Heun residual whose inner
products are evaluated exactly (SVF) or with binomial shot noise (SEF).
Classical finite-difference solvers of the same schemes serve as references.
"""

from .analysis import (ConvergenceReport, convergence_factors, exact_advection,
                       exact_advection_bandlimited, exact_fn, exact_wave, l1_norm,
                       self_convergence_factors)
from .ansatz import ModeOverflowError, ParamVector, default_modes, evaluate, params_from_samples
from .classical import cn_advection_step, evolve_classical, rk2_step, solve_cyclic_tridiagonal
from .costs import CostContext, CostFunction
from .engine import EngineMode, ProductRequest, product, product_exact, product_fast, sef_sample
from .evolution import evolve, evolve_vqa, vqa_step_cn, vqa_step_rk2
from .grid import ConfigurationError, Domain, build_domain
from .optimizer import OptResult, SimplexOptions, nelder_mead
from .problems import Problem, StepStats, Trajectory, initial_fields
from .rhs import RhsSpec, RhsTerm, apply_rhs

__version__ = "0.1.0"

__all__ = [
    "ConvergenceReport", "convergence_factors", "exact_advection", "exact_advection_bandlimited",
    "exact_fn", "exact_wave", "l1_norm", "self_convergence_factors",
    "ModeOverflowError", "ParamVector", "default_modes", "evaluate", "params_from_samples",
    "cn_advection_step", "evolve_classical", "rk2_step", "solve_cyclic_tridiagonal",
    "CostContext", "CostFunction",
    "EngineMode", "ProductRequest", "product", "product_exact", "product_fast", "sef_sample",
    "evolve", "evolve_vqa", "vqa_step_cn", "vqa_step_rk2",
    "ConfigurationError", "Domain", "build_domain",
    "OptResult", "SimplexOptions", "nelder_mead",
    "Problem", "StepStats", "Trajectory", "initial_fields",
    "RhsSpec", "RhsTerm", "apply_rhs",
]
