"""
FleetFlow Configuration Management

This module provides configuration management for the FleetFlow pipeline,
including dataset generation knobs, scenario simulation, NSGA-II parameters,
strategic analysis ladders and runtime settings.
"""

import os
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator


# Defaults follow the reference experiments
DEFAULT_HORIZON_DAYS = 365
DEFAULT_SCENARIOS = 100
DEFAULT_POPULATION_SIZE = 500
DEFAULT_GENERATIONS = 100
DEFAULT_MUTATION_RATE = 0.25
LOW_VARIABILITY_LADDER = [0.01, 0.02, 0.03, 0.04, 0.05]
SCALED_LADDER = [0.05, 0.15, 0.25, 0.35, 0.50]
DEFAULT_GROWTH_LADDER = [0.0, 0.01, 0.02, 0.03]
DEFAULT_HISTOGRAM_BINS = 20


class ExperimentMode(str, Enum):
    """How scenarios differ from one another."""
    LOW_VARIABILITY = "low-variability"
    SCALED = "scaled"


class DurationMode(str, Enum):
    """How platform-specific durations are realized inside a scenario."""
    SCALED = "scaled"
    BASELINE = "baseline"


class ObjectiveWeighting(str, Enum):
    """Per-task weights applied to the rows of the cost objectives."""
    EXPECTED = "expected"
    REALIZED = "realized"
    UNIT = "unit"


class FleetMapping(str, Enum):
    """How an assignment solution is turned into a fleet."""
    PEAK = "peak"
    SUM = "sum"


def _check_range(value: Tuple[float, float], name: str) -> Tuple[float, float]:
    low, high = value
    if low > high:
        raise ValueError(f"{name} lower bound {low} exceeds upper bound {high}")
    return value


def _check_ladder(value: List[float]) -> List[float]:
    if any(f < 0 for f in value):
        raise ValueError("budget fractions must be non-negative")
    if any(b <= a for a, b in zip(value, value[1:])):
        raise ValueError("budget ladder must be strictly ascending")
    return value


class PlatformSpec(BaseModel):
    """Explicit platform row for the generator's platform table."""

    capacity_type1: float = Field(gt=0, description="Type-1 cargo capacity")
    capacity_type2: float = Field(gt=0, description="Type-2 cargo capacity")
    cost: float = Field(gt=0, description="Cost per platform-day and per platform acquired")


class DurationTypeBounds(BaseModel):
    """Affine duration bounds for one duration-type.

    With ``x`` the platform's normalized capacity in [0, 1], durations are
    drawn uniformly from ``[low_intercept + low_slope*x, high_intercept + high_slope*x]``.
    """

    low_intercept: float = Field(gt=0)
    low_slope: float = 0.0
    high_intercept: float = Field(gt=0)
    high_slope: float = 0.0

    @model_validator(mode="after")
    def _bounds_positive_and_ordered(self) -> "DurationTypeBounds":
        for x in (0.0, 1.0):
            low = self.low_intercept + self.low_slope * x
            high = self.high_intercept + self.high_slope * x
            if low <= 0:
                raise ValueError(f"lower duration bound must stay positive (x={x})")
            if high < low:
                raise ValueError(f"upper duration bound below lower bound (x={x})")
        return self


def _default_duration_types() -> List[DurationTypeBounds]:
    # Larger platforms fly faster; longer mission classes shift both bounds up.
    return [
        DurationTypeBounds(low_intercept=1.0, low_slope=-0.4, high_intercept=3.0, high_slope=-1.0),
        DurationTypeBounds(low_intercept=3.0, low_slope=-1.0, high_intercept=7.0, high_slope=-2.0),
        DurationTypeBounds(low_intercept=6.0, low_slope=-2.0, high_intercept=12.0, high_slope=-3.0),
        DurationTypeBounds(low_intercept=10.0, low_slope=-3.0, high_intercept=18.0, high_slope=-4.0),
    ]


class GeneratorConfig(BaseModel):
    """Knobs for the synthetic task/platform dataset."""

    n_tasks: int = Field(default=100, gt=0, description="Number of tasks")
    n_platforms: int = Field(default=10, gt=0, description="Number of platform types")
    platform_table: Optional[List[PlatformSpec]] = Field(
        default=None,
        description="Explicit platform rows; defaults to the reference table, random rows beyond it"
    )
    type1_capacity_range: Tuple[float, float] = (8.0, 200.0)
    type2_capacity_range: Tuple[float, float] = (5000.0, 120000.0)
    cost_range: Tuple[float, float] = (0.5, 20.0)
    cargo_types_range: Tuple[int, int] = (1, 2)
    subfunctions_range: Tuple[int, int] = (1, 3)
    type1_quantity_range: Tuple[int, int] = (10, 400)
    type2_quantity_range: Tuple[int, int] = (2000, 150000)
    max_platforms_per_task: int = Field(
        default=3,
        gt=0,
        description="Size of the candidate platform pool drawn per task"
    )
    suitability_probability: float = Field(
        default=0.5,
        ge=0.0,
        le=1.0,
        description="Probability that a pooled platform suits a subfunction"
    )
    frequency_range: Tuple[float, float] = Field(
        default=(0.5, 4.0),
        description="Range of the nominal yearly frequency (triangular mode)"
    )
    triangular_spread: float = Field(
        default=0.5,
        ge=0.0,
        lt=1.0,
        description="min = (1 - spread) * mode, max = (1 + spread) * mode"
    )
    duration_types: List[DurationTypeBounds] = Field(default_factory=_default_duration_types)
    duration_decimals: int = Field(default=2, ge=0, le=6)

    @field_validator(
        "type1_capacity_range", "type2_capacity_range", "cost_range",
        "type1_quantity_range", "type2_quantity_range", "frequency_range",
    )
    @classmethod
    def _ordered_range(cls, value, info):
        _check_range(value, info.field_name)
        if value[0] < 0:
            raise ValueError(f"{info.field_name} must be non-negative")
        return value

    @field_validator("cargo_types_range")
    @classmethod
    def _cargo_types(cls, value):
        _check_range(value, "cargo_types_range")
        if value[0] < 1 or value[1] > 2:
            raise ValueError("tasks carry one or two cargo types")
        return value

    @field_validator("subfunctions_range")
    @classmethod
    def _subfunctions(cls, value):
        _check_range(value, "subfunctions_range")
        if value[0] < 1 or value[1] > 3:
            raise ValueError("each cargo type has one to three subfunctions")
        return value

    @field_validator("duration_types")
    @classmethod
    def _four_duration_types(cls, value):
        if len(value) != 4:
            raise ValueError("exactly four duration-types are required")
        return value

    @model_validator(mode="after")
    def _table_matches_count(self) -> "GeneratorConfig":
        if self.platform_table is not None and len(self.platform_table) != self.n_platforms:
            raise ValueError(
                f"platform_table has {len(self.platform_table)} rows but n_platforms is {self.n_platforms}"
            )
        return self


class SimulationConfig(BaseModel):
    """Configuration for stochastic scenario generation."""

    horizon_days: int = Field(default=DEFAULT_HORIZON_DAYS, gt=0, description="Scenario length T in days")
    scenarios: int = Field(default=DEFAULT_SCENARIOS, gt=0, description="Number of scenarios Y")
    experiment: ExperimentMode = Field(default=ExperimentMode.LOW_VARIABILITY)
    scale_range: Tuple[float, float] = Field(
        default=(1.0, 2.0),
        description="Uniform range of the frequency multiplier r in scaled mode"
    )
    duration_mode: DurationMode = Field(default=DurationMode.SCALED)

    @field_validator("scale_range")
    @classmethod
    def _scale_within_bounds(cls, value):
        _check_range(value, "scale_range")
        if value[0] < 1.0 or value[1] > 2.0:
            raise ValueError("frequency multipliers must lie in [1, 2]")
        return value


class OptimizerConfig(BaseModel):
    """NSGA-II parameters."""

    population_size: int = Field(default=DEFAULT_POPULATION_SIZE, gt=1, description="Population size N")
    generations: int = Field(default=DEFAULT_GENERATIONS, ge=0, description="Generations G")
    mutation_rate: float = Field(default=DEFAULT_MUTATION_RATE, ge=0.0, le=1.0)
    objective_weighting: ObjectiveWeighting = Field(default=ObjectiveWeighting.EXPECTED)
    fleet_mapping: FleetMapping = Field(default=FleetMapping.PEAK)


class AnalysisConfig(BaseModel):
    """Robustness/adaptability analysis settings."""

    budget_ladder: Optional[List[float]] = Field(
        default=None,
        description="Budget fractions; defaults depend on the experiment mode"
    )
    histogram_bins: int = Field(default=DEFAULT_HISTOGRAM_BINS, gt=0)
    growth_ladder: List[float] = Field(default_factory=lambda: list(DEFAULT_GROWTH_LADDER))
    growth_max_nodes: int = Field(default=10000, gt=0)
    growth_fleet_id: Optional[int] = Field(
        default=None,
        description="Fleet to grow; defaults to the median-cost fleet"
    )

    @field_validator("budget_ladder")
    @classmethod
    def _budget_ladder(cls, value):
        if value is None:
            return value
        if not value:
            raise ValueError("budget ladder must not be empty")
        return _check_ladder(value)

    @field_validator("growth_ladder")
    @classmethod
    def _growth_ladder(cls, value):
        if not value:
            raise ValueError("growth ladder must not be empty")
        return _check_ladder(value)


class RuntimeConfig(BaseModel):
    """Runtime settings."""

    output_dir: str = Field(default="fleetflow-output", description="Artifact directory")
    workers: int = Field(default=1, gt=0, description="Worker processes for scenario-level parallelism")
    log_level: str = Field(default="INFO", description="Logging level")
    json_logs: bool = Field(default=False, description="Render logs as JSON")


class RunConfig(BaseModel):
    """Main configuration for a FleetFlow run."""

    seed: Optional[int] = Field(default=None, ge=0, description="Master seed")
    generator: GeneratorConfig = Field(default_factory=GeneratorConfig)
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    optimizer: OptimizerConfig = Field(default_factory=OptimizerConfig)
    analysis: AnalysisConfig = Field(default_factory=AnalysisConfig)
    runtime: RuntimeConfig = Field(default_factory=RuntimeConfig)

    def effective_ladder(self) -> List[float]:
        """Budget ladder in force, falling back to the experiment's default."""
        if self.analysis.budget_ladder is not None:
            return list(self.analysis.budget_ladder)
        if self.simulation.experiment == ExperimentMode.SCALED:
            return list(SCALED_LADDER)
        return list(LOW_VARIABILITY_LADDER)

    @classmethod
    def from_env(cls, base: Optional["RunConfig"] = None) -> "RunConfig":
        """Overlay ``FLEETFLOW_*`` environment variables on a configuration."""
        data: Dict[str, Any] = (base or cls()).model_dump()

        overrides = {
            "FLEETFLOW_SEED": ("seed", None, int),
            "FLEETFLOW_TASKS": ("generator", "n_tasks", int),
            "FLEETFLOW_PLATFORMS": ("generator", "n_platforms", int),
            "FLEETFLOW_HORIZON": ("simulation", "horizon_days", int),
            "FLEETFLOW_SCENARIOS": ("simulation", "scenarios", int),
            "FLEETFLOW_EXPERIMENT": ("simulation", "experiment", str),
            "FLEETFLOW_POPULATION": ("optimizer", "population_size", int),
            "FLEETFLOW_GENERATIONS": ("optimizer", "generations", int),
            "FLEETFLOW_MUTATION_RATE": ("optimizer", "mutation_rate", float),
            "FLEETFLOW_OUTPUT_DIR": ("runtime", "output_dir", str),
            "FLEETFLOW_WORKERS": ("runtime", "workers", int),
            "LOG_LEVEL": ("runtime", "log_level", str),
        }
        for env_name, (section, key, cast) in overrides.items():
            raw = os.getenv(env_name)
            if raw is None:
                continue
            if key is None:
                data[section] = cast(raw)
            else:
                data[section][key] = cast(raw)

        return cls(**data)

    @classmethod
    def from_file(cls, config_path: str) -> "RunConfig":
        """Load configuration from a YAML or JSON file."""
        import json
        import yaml

        config_file = Path(config_path)
        if not config_file.exists():
            raise FileNotFoundError(f"Configuration file not found: {config_path}")

        with open(config_file, "r") as f:
            if config_file.suffix.lower() in [".yml", ".yaml"]:
                data = yaml.safe_load(f) or {}
            else:
                data = json.load(f)

        return cls(**data)

    def save_to_file(self, config_path: str) -> None:
        """Save configuration to a YAML or JSON file."""
        import json
        import yaml

        config_file = Path(config_path)
        config_file.parent.mkdir(parents=True, exist_ok=True)

        with open(config_file, "w") as f:
            if config_file.suffix.lower() in [".yml", ".yaml"]:
                yaml.safe_dump(self.model_dump(mode="json"), f, default_flow_style=False, sort_keys=False)
            else:
                json.dump(self.model_dump(mode="json"), f, indent=2)


# Default configuration instance
default_config = RunConfig()
