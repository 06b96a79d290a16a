"""FleetFlow core module."""

from .config import RunConfig, default_config
from .errors import (
    ArtifactMissingError,
    ConfigError,
    DatasetParseError,
    DimensionMismatchError,
    EmptyFleetSetError,
    FleetFlowError,
    InfeasibleTaskError,
    MissingAssignmentError,
)
from .log import configure_logging
from .seeds import derive_rng, derive_seed

__all__ = [
    "ArtifactMissingError",
    "ConfigError",
    "DatasetParseError",
    "DimensionMismatchError",
    "EmptyFleetSetError",
    "FleetFlowError",
    "InfeasibleTaskError",
    "MissingAssignmentError",
    "RunConfig",
    "configure_logging",
    "default_config",
    "derive_rng",
    "derive_seed",
]
