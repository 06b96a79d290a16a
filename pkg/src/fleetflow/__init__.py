"""
FleetFlow: fleet-mix robustness and adaptability analysis

Generates platform/task datasets, enumerates valid platform-to-mission
assignments, simulates stochastic operating years, optimizes assignments
per year with NSGA-II, and scores every resulting fleet on how readily it
accomplishes the other years.
"""

from .core.config import RunConfig
from .core.errors import ConfigError, FleetFlowError, InfeasibleTaskError
from .domain.models import Dataset, FleetVector, Platform, Task

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "Dataset",
    "FleetFlowError",
    "FleetVector",
    "InfeasibleTaskError",
    "Platform",
    "RunConfig",
    "Task",
]
