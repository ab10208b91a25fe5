"""Exact traveling-wave toolkit for the bistable equation u_t = u_xx - u^3 + u.

The package derives the closed-form traveling waves of the cubic
reaction-diffusion equation with exact arithmetic over Q(sqrt(2)), exposes
them as an evaluatable catalog, certifies every entry numerically against
the PDE and ODE residuals, and re-verifies the moving kink dynamically with
two independent finite-difference schemes.
"""

__version__ = "0.1.0"

from .qfield import Radical2, Rational
from .reduction import EvolutionEquation, WaveFrame, reduce_to_ode, balance_degree
from .closure import run_derivation
from .solutions import SolutionSpec, enumerate_catalog, catalog_by_id
from .verify import GridSpec, pde_residual, ode_residual, classify_branches
from .simulate import Grid1D, SimConfig, integrate, convergence_study

__all__ = [
    "Radical2",
    "Rational",
    "EvolutionEquation",
    "WaveFrame",
    "reduce_to_ode",
    "balance_degree",
    "run_derivation",
    "SolutionSpec",
    "enumerate_catalog",
    "catalog_by_id",
    "GridSpec",
    "pde_residual",
    "ode_residual",
    "classify_branches",
    "Grid1D",
    "SimConfig",
    "integrate",
    "convergence_study",
]
