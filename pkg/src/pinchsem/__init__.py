"""Adjustable-radiation pinching-antenna NOMA with a semantic user."""

from .benchmarks import cas_solve, equal_pass_solve, proportional_pass_solve, solve
from .config import ExperimentConfig, load_config
from .coupling import CouplingParams, RadiationProfile, equal_power_spacings, radiation_profile
from .geometry import Position3, SystemParams, effective_gain, wavelengths
from .harness import run_sweep, sample_users
from .optimizer import Solution, SolverOptions, alternating_optimize, optimal_power_split
from .rates import SemanticParams, bit_rate, semantic_rate, semantic_similarity, sic_rate

__all__ = [
    "CouplingParams", "ExperimentConfig", "Position3", "RadiationProfile", "SemanticParams",
    "Solution", "SolverOptions", "SystemParams", "alternating_optimize", "bit_rate",
    "cas_solve", "effective_gain", "equal_pass_solve", "equal_power_spacings", "load_config",
    "optimal_power_split", "proportional_pass_solve", "radiation_profile", "run_sweep",
    "sample_users", "semantic_rate", "semantic_similarity", "sic_rate", "solve", "wavelengths",
]
