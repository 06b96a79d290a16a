"""Task/platform data model, dataset generation and fleet arithmetic."""

from .dataset_io import (
    Violation,
    dataset_hash,
    dumps_dataset,
    load_dataset,
    parse_dataset,
    save_dataset,
    validate_dataset,
)
from .fleet import fleet_contains, fleet_cost
from .generator import REFERENCE_PLATFORMS, generate_dataset, reference_mission, reference_platforms
from .models import (
    Dataset,
    FleetVector,
    Platform,
    SubfunctionRequirement,
    Task,
    TriangularParams,
    fleets_to_matrix,
)

__all__ = [
    "Dataset",
    "FleetVector",
    "Platform",
    "SubfunctionRequirement",
    "Task",
    "TriangularParams",
    "Violation",
    "REFERENCE_PLATFORMS",
    "dataset_hash",
    "dumps_dataset",
    "fleet_contains",
    "fleet_cost",
    "fleets_to_matrix",
    "generate_dataset",
    "load_dataset",
    "parse_dataset",
    "reference_mission",
    "reference_platforms",
    "save_dataset",
    "validate_dataset",
]
