"""Exception hierarchy for FleetFlow.

Library code raises these; only the CLI turns them into exit codes.
"""

from typing import Optional


class FleetFlowError(Exception):
    """Base class for all FleetFlow errors."""

    exit_code: int = 1


class ConfigError(FleetFlowError, ValueError):
    """Invalid run or generator configuration."""

    exit_code = 2

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class InfeasibleTaskError(FleetFlowError, ValueError):
    """A task has a requirement that no platform combination can cover."""

    exit_code = 3

    def __init__(self, task_id: int, message: str = "no valid platform assignment"):
        self.task_id = task_id
        super().__init__(f"infeasible task {task_id}: {message}")


class DimensionMismatchError(FleetFlowError, ValueError):
    """Fleet vectors or matrices disagree on the number of platforms."""

    def __init__(self, expected: int, actual: int, what: str = "fleet"):
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what} dimension mismatch: expected {expected}, got {actual}")


class DatasetParseError(FleetFlowError, ValueError):
    """A dataset document does not conform to the schema."""

    def __init__(self, record: str, message: str):
        self.record = record
        super().__init__(f"{record}: {message}")


class ArtifactMissingError(FleetFlowError, FileNotFoundError):
    """A pipeline stage needs an artifact that has not been produced yet."""

    def __init__(self, path: str):
        self.path = path
        super().__init__(f"required artifact not found: {path}")


class EmptyFleetSetError(FleetFlowError, ValueError):
    """Accomplishment is undefined against an empty set of scenario fleets."""


class MissingAssignmentError(FleetFlowError, ValueError):
    """An assignment matrix has no row for a task that occurs in a scenario."""

    def __init__(self, task_id: int):
        self.task_id = task_id
        super().__init__(f"no assignment row for task {task_id}")
