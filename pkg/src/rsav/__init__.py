"""Relaxed scalar-auxiliary-variable (RSAV) schemes for periodic gradient flows."""

from .config import RunConfig, load_config, parse_config
from .diagnostics import EnergyRecord, law_residual, modified_energy, original_energy
from .driver import compare, refine, run, simulate
from .integrators import (
    SavState,
    StepResult,
    bootstrap_first_step,
    initial_state,
    sav_bdf2_step,
    sav_cn_step,
    sav_step,
    superposition_solve,
)
from .models import ModelSpec, ModelSymbols, Q_of, make_model, model_symbols
from .relaxation import RelaxationConfig, optimal_xi_bdf2, optimal_xi_cn, relax_state
from .spectral import Grid, make_grid

__version__ = "0.1.0"
