"""Experiment configuration: defaults, file loading and builders.

A config file is a flat YAML mapping whose keys are the field names of
:class:`ExperimentConfig`; anything omitted keeps its default. Example::

    sweep_var: P_max_dBm
    grid: [0, 5, 10, 15, 20, 25, 30]
    schemes: [proportional, equal, cas]
    trials: 1000
    seed: 7
    region_side: 20
    antenna_count: 3
"""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .coupling import CouplingParams
from .geometry import InvalidParameterError, SystemParams
from .optimizer import ConfigurationError, SolverOptions
from .rates import SemanticParams, dbm_to_watt

SEED_ENV = "PINCHSEM_SEED"
SWEEP_VARS = ("P_max_dBm", "R_B_min", "distance_ratio_bucket", "phase_precision_pair")
SCHEME_NAMES = ("proportional", "equal", "cas")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"{SEED_ENV}={raw!r} is not an integer") from None


@dataclass
class ExperimentConfig:
    sweep_var: str = "P_max_dBm"
    grid: tuple = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    schemes: tuple = SCHEME_NAMES
    trials: int = 100_000
    seed: int = field(default_factory=_default_seed)
    output: str | None = None
    count_infeasible_as_zero: bool = True
    # system
    p_max_dbm: float = 10.0
    region_side: float = 20.0
    antenna_count: int = 3
    carrier_frequency: float = 28e9
    waveguide_height: float = 3.0
    noise_dbm: float = -90.0
    effective_index: float = 1.4
    min_spacing: float | None = None  # lambda/2
    # solver
    min_bit_rate: float = 0.5
    delta_s: float = 0.02
    delta_b: float = 0.02
    fine_step: float | None = None  # lambda/10
    ao_tolerance: float = 1e-6
    max_ao_iterations: int = 50
    phase_convention: str = "signal"
    profile: str = "matched"
    # semantic fit
    K: int = 5
    sut_ratio: float = 1.0
    A1: float = 0.37
    A2: float = 0.98
    C1: float = 0.25
    C2: float = -0.7895
    snr_scale: str = "db"
    # couplers (per mm where the literature quotes them)
    omega0_per_mm: float = 0.33
    decay_per_mm: float = 0.24615
    antenna_length_mm: float = 5.0
    core_width_mm: float = 10.0

    def __post_init__(self):
        if isinstance(self.schemes, str):
            self.schemes = tuple(s.strip() for s in self.schemes.split(",") if s.strip())
        self.schemes = tuple(self.schemes)
        if self.sweep_var == "phase_precision_pair":
            self.grid = tuple(tuple(float(v) for v in pair) for pair in self.grid)
        else:
            self.grid = tuple(float(v) for v in self.grid)

    def validate(self) -> "ExperimentConfig":
        if self.sweep_var not in SWEEP_VARS:
            raise ConfigurationError(f"sweep_var must be one of {SWEEP_VARS}, got {self.sweep_var!r}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ConfigurationError("trials must be a positive integer")
        if not self.schemes:
            raise ConfigurationError("no schemes selected")
        for s in self.schemes:
            if s not in SCHEME_NAMES:
                raise ConfigurationError(f"unknown scheme {s!r}")
        if len(set(self.schemes)) != len(self.schemes):
            raise ConfigurationError("duplicate scheme")
        if not self.grid:
            raise ConfigurationError("sweep grid is empty")
        if self.sweep_var == "phase_precision_pair":
            if any(len(p) != 2 or min(p) <= 0 for p in self.grid):
                raise ConfigurationError("phase precision grid needs positive (delta_S, delta_B) pairs")
            if len(set(self.grid)) != len(self.grid):
                raise ConfigurationError("duplicate phase precision pair")
        else:
            g = self.grid
            if not (all(b > a for a, b in zip(g, g[1:])) or all(b < a for a, b in zip(g, g[1:]))):
                raise ConfigurationError("sweep grid must be strictly monotone")
            if any(not math.isfinite(v) for v in g):
                raise ConfigurationError("sweep grid must be finite")
            if self.sweep_var == "distance_ratio_bucket" and len(g) < 2:
                raise ConfigurationError("distance ratio grid lists bucket edges; need at least two")
            if self.sweep_var == "R_B_min" and min(g) < 0:
                raise ConfigurationError("R_B_min must be >= 0")
        # build everything once so bad physics fails before any trial runs
        try:
            self.system_params()
            self.solver_options().step_for(self.system_params())
            self.semantic_params()
            self.coupling_params()
        except InvalidParameterError as exc:
            raise ConfigurationError(str(exc)) from None
        if self.profile not in ("matched", "uniform"):
            raise ConfigurationError(f"unknown profile {self.profile!r}")
        return self

    # -- builders ------------------------------------------------------------
    def system_params(self, p_max_dbm: float | None = None) -> SystemParams:
        return SystemParams(
            carrier_frequency=self.carrier_frequency,
            waveguide_height=self.waveguide_height,
            region_side=self.region_side,
            antenna_count=int(self.antenna_count),
            min_spacing=self.min_spacing,
            noise_power=dbm_to_watt(self.noise_dbm),
            effective_index=self.effective_index,
            max_power=dbm_to_watt(self.p_max_dbm if p_max_dbm is None else p_max_dbm),
        )

    def solver_options(self, **overrides) -> SolverOptions:
        kw = dict(
            min_bit_rate=self.min_bit_rate,
            delta_s=self.delta_s,
            delta_b=self.delta_b,
            fine_step=self.fine_step,
            ao_tolerance=self.ao_tolerance,
            max_ao_iterations=int(self.max_ao_iterations),
            phase_convention=self.phase_convention,
        )
        kw.update(overrides)
        return SolverOptions(**kw)

    def semantic_params(self) -> SemanticParams:
        return SemanticParams(int(self.K), self.sut_ratio, self.A1, self.A2, self.C1, self.C2, self.snr_scale)

    def coupling_params(self) -> CouplingParams:
        return CouplingParams(
            omega0=self.omega0_per_mm * 1e3,
            decay=self.decay_per_mm * 1e3,
            antenna_length=self.antenna_length_mm * 1e-3,
            core_width=self.core_width_mm * 1e-3,
        )

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


FIELD_NAMES = {f.name for f in dataclasses.fields(ExperimentConfig)}


def config_from_mapping(data: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    unknown = set(data) - FIELD_NAMES
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    base = base or ExperimentConfig()
    try:
        return dataclasses.replace(base, **data)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(str(exc)) from None


def load_config(path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text()) or {}
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"malformed config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigurationError(f"config {path} must be a key-value mapping")
    return config_from_mapping(data, base)


def parse_assignment(text: str) -> tuple[str, object]:
    """Parse ``key=value`` with a YAML scalar/list value."""
    if "=" not in text:
        raise ConfigurationError(f"expected key=value, got {text!r}")
    key, raw = text.split("=", 1)
    try:
        return key.strip(), yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"bad value in {text!r}: {exc}") from None
