"""Task/platform data model.

The pydantic models here describe the on-disk schema only (types and
enumerated values). Value invariants such as positive capacities or ordered
triangular parameters are checked by :func:`fleetflow.domain.dataset_io.validate_dataset`
so that a malformed dataset can be reported rather than rejected outright.
"""

from dataclasses import dataclass
from typing import Iterable, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..core.errors import DimensionMismatchError


class Platform(BaseModel):
    """A vehicle type.

    ``cost`` is used both as the per-day cost of use in the monetary
    objective and as the acquisition cost of one platform in fleet costing.
    """

    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=0)
    capacity_type1: float
    capacity_type2: float
    cost: float

    def capacity(self, cargo_type: int) -> float:
        """Capacity for cargo type 1 or 2."""
        return self.capacity_type1 if cargo_type == 1 else self.capacity_type2


class SubfunctionRequirement(BaseModel):
    """Quantity of one subfunction of one cargo type that a task must move."""

    model_config = ConfigDict(frozen=True)

    cargo_type: Literal[1, 2]
    subfunction_id: int = Field(ge=1, le=3)
    quantity: float


class TriangularParams(BaseModel):
    """Parameters of a triangular distribution."""

    model_config = ConfigDict(frozen=True)

    min: float
    mode: float
    max: float

    @classmethod
    def around(cls, nominal: float, spread: float = 0.5) -> "TriangularParams":
        """Distribution with the nominal value as mode and symmetric relative spread."""
        return cls(min=(1.0 - spread) * nominal, mode=nominal, max=(1.0 + spread) * nominal)

    @classmethod
    def degenerate(cls, value: float) -> "TriangularParams":
        return cls(min=value, mode=value, max=value)

    def scaled(self, factor: float) -> "TriangularParams":
        return TriangularParams(min=self.min * factor, mode=self.mode * factor, max=self.max * factor)

    @property
    def mean(self) -> float:
        return (self.min + self.mode + self.max) / 3.0


class Task(BaseModel):
    """A mission template.

    ``suitability`` has one row per requirement and one column per platform;
    ``durations`` holds the platform-specific duration in days, zero for
    platforms that serve none of the task's subfunctions.
    """

    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=0)
    requirements: Tuple[SubfunctionRequirement, ...]
    durations: Tuple[float, ...]
    suitability: Tuple[Tuple[bool, ...], ...]
    duration_type: int = Field(ge=1, le=4)
    freq_dist: TriangularParams
    dur_dist: TriangularParams

    def suitable_platforms(self) -> List[int]:
        """Indices of platforms suitable for at least one subfunction."""
        n_platforms = len(self.durations)
        return [
            nu for nu in range(n_platforms)
            if any(row[nu] for row in self.suitability)
        ]

    def cargo_types(self) -> List[int]:
        return sorted({req.cargo_type for req in self.requirements})


class Dataset(BaseModel):
    """Platforms and tasks, plus the seed they were generated from."""

    model_config = ConfigDict(frozen=True)

    platforms: Tuple[Platform, ...]
    tasks: Tuple[Task, ...]
    seed: Optional[int] = None

    @property
    def n_platforms(self) -> int:
        return len(self.platforms)

    @property
    def n_tasks(self) -> int:
        return len(self.tasks)

    def costs(self) -> np.ndarray:
        """Platform costs as a dense vector."""
        return np.array([p.cost for p in self.platforms], dtype=float)

    def duration_matrix(self) -> np.ndarray:
        """Durations d_i(nu) as an (n_tasks, n_platforms) array."""
        if not self.tasks:
            return np.zeros((0, self.n_platforms), dtype=float)
        return np.array([task.durations for task in self.tasks], dtype=float)

    def frequency_modes(self) -> np.ndarray:
        return np.array([task.freq_dist.mode for task in self.tasks], dtype=float)

    def task(self, task_id: int) -> Task:
        return self.tasks[task_id]


@dataclass(frozen=True)
class FleetVector:
    """Non-negative platform counts, one entry per platform type."""

    counts: Tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise ValueError(f"fleet counts must be non-negative: {self.counts}")

    @classmethod
    def zeros(cls, n_platforms: int) -> "FleetVector":
        return cls(tuple([0] * n_platforms))

    @classmethod
    def from_array(cls, values: Iterable) -> "FleetVector":
        return cls(tuple(int(v) for v in values))

    @classmethod
    def from_mapping(cls, mapping: dict, n_platforms: int) -> "FleetVector":
        """Build from ``{platform_index: count}``."""
        counts = [0] * n_platforms
        for nu, count in mapping.items():
            counts[nu] = int(count)
        return cls(tuple(counts))

    @property
    def dimension(self) -> int:
        return len(self.counts)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=np.int64)

    def is_zero(self) -> bool:
        return not any(self.counts)

    def __add__(self, other: "FleetVector") -> "FleetVector":
        check_dimensions(self, other)
        return FleetVector(tuple(a + b for a, b in zip(self.counts, other.counts)))

    def __str__(self) -> str:
        return " ".join(str(c) for c in self.counts)


def check_dimensions(a: FleetVector, b: FleetVector) -> None:
    if a.dimension != b.dimension:
        raise DimensionMismatchError(a.dimension, b.dimension)


def fleets_to_matrix(fleets: Sequence[FleetVector], n_platforms: int) -> np.ndarray:
    """Stack fleet vectors into a contiguous (n_fleets, n_platforms) integer matrix."""
    if not fleets:
        return np.zeros((0, n_platforms), dtype=np.int64)
    for fleet in fleets:
        if fleet.dimension != n_platforms:
            raise DimensionMismatchError(n_platforms, fleet.dimension)
    return np.ascontiguousarray([f.counts for f in fleets], dtype=np.int64)
