"""Stochastic scenario sampling.

A scenario is one simulated year: for every task a yearly frequency is drawn
from its triangular distribution and stochastically rounded to an occurrence
count; every occurrence gets a triangular duration draw and a uniform start
day in ``[0, T]``.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import structlog

from ..core.errors import ConfigError
from ..domain.models import Dataset, TriangularParams


logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class TaskInstance:
    """One realized occurrence of a task."""
    task_id: int
    start: int
    duration: float


@dataclass(frozen=True)
class Scenario:
    """One simulated year of task instances."""
    id: int
    instances: Tuple[TaskInstance, ...]
    horizon: int
    seed: Optional[int] = None
    scale: float = 1.0
    dataset_hash: Optional[str] = None

    def instance_counts(self, n_tasks: int) -> np.ndarray:
        counts = np.zeros(n_tasks, dtype=np.int64)
        for instance in self.instances:
            counts[instance.task_id] += 1
        return counts

    def task_ids(self) -> Tuple[int, ...]:
        return tuple(sorted({i.task_id for i in self.instances}))


def stochastic_round(f: float, r: float) -> int:
    """Round up when ``r`` does not exceed the fractional part, else round down."""
    if f < 0:
        raise ValueError(f"stochastic_round expects f >= 0, got {f}")
    floor = math.floor(f)
    fraction = f - floor
    if fraction == 0.0:
        return int(floor)
    return int(floor) + 1 if r <= fraction else int(floor)


def sample_triangular(params: TriangularParams, rng: np.random.Generator) -> float:
    """One triangular draw; degenerate distributions return their mode."""
    if params.max <= params.min:
        return float(params.mode)
    return float(rng.triangular(params.min, params.mode, params.max))


def sample_scenario(
    dataset: Dataset,
    horizon: int,
    rng: np.random.Generator,
    scenario_id: int = 0,
    seed: Optional[int] = None,
    scale: float = 1.0,
    dataset_hash: Optional[str] = None,
) -> Scenario:
    """Sample one scenario; the instance list is ordered by task, then occurrence."""
    if horizon <= 0:
        raise ConfigError("horizon must be positive", field="horizon")

    instances = []
    for task in dataset.tasks:
        frequency = sample_triangular(task.freq_dist, rng)
        occurrences = stochastic_round(max(frequency, 0.0), float(rng.random()))
        for _ in range(occurrences):
            duration = sample_triangular(task.dur_dist, rng)
            start = int(rng.integers(0, horizon + 1))
            instances.append(TaskInstance(task_id=task.id, start=start, duration=duration))

    logger.debug("Scenario sampled", scenario_id=scenario_id, instances=len(instances), scale=scale)
    return Scenario(
        id=scenario_id,
        instances=tuple(instances),
        horizon=horizon,
        seed=seed,
        scale=scale,
        dataset_hash=dataset_hash,
    )


def scale_frequencies(dataset: Dataset, r: float) -> Dataset:
    """Multiply every task's frequency distribution by ``r`` (1 <= r <= 2)."""
    if not 1.0 <= r <= 2.0:
        raise ConfigError(f"frequency multiplier {r} outside [1, 2]", field="r")
    if r == 1.0:
        return dataset
    tasks = tuple(
        task.model_copy(update={"freq_dist": task.freq_dist.scaled(r)})
        for task in dataset.tasks
    )
    return dataset.model_copy(update={"tasks": tasks})
