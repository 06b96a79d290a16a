"""Platform to Mission Assignment."""

from .catalog_io import dumps_catalog, load_catalog, parse_catalog, save_catalog
from .enumeration import (
    AssignmentOption,
    OptionCatalog,
    build_catalog,
    enumerate_assignments,
    solution_space_log10,
)
from .feasibility import CoverageConstraints, is_valid_assignment, per_platform_bound

__all__ = [
    "AssignmentOption",
    "CoverageConstraints",
    "OptionCatalog",
    "build_catalog",
    "dumps_catalog",
    "enumerate_assignments",
    "is_valid_assignment",
    "load_catalog",
    "parse_catalog",
    "per_platform_bound",
    "save_catalog",
    "solution_space_log10",
]
