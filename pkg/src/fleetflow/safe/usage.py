"""Platform usage profiles and their Monte-Carlo average.

Time is discretized in whole days. An instance starting on day ``s`` with
duration ``d`` occupies slots ``s .. s + ceil(d) - 1``; every slot carries
weight one except a fractional final slot, which carries ``d - floor(d)``.
The integral of a profile therefore equals the committed platform-days.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import structlog

from ..core.config import DurationMode
from ..core.errors import MissingAssignmentError
from ..core.seeds import derive_rng, derive_seed
from ..domain.models import Dataset, Task
from .sampling import Scenario, TaskInstance, sample_scenario


logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class UsageProfile:
    """Per-platform, per-day usage for one iteration."""
    usage: np.ndarray
    horizon: int

    @property
    def n_platforms(self) -> int:
        return self.usage.shape[0]

    def total(self) -> np.ndarray:
        """Committed platform-days per platform."""
        return self.usage.sum(axis=1)

    def time_average(self) -> np.ndarray:
        """Average daily use over the horizon, in platform-days per day."""
        return self.total() / float(self.horizon)

    def peak(self) -> np.ndarray:
        return self.usage.max(axis=1) if self.usage.size else np.zeros(self.n_platforms)


@dataclass(frozen=True)
class UsageStats:
    """Cell-wise mean and population standard deviation over iterations."""
    mean: np.ndarray
    std: np.ndarray
    time_average_mean: np.ndarray
    time_average_std: np.ndarray
    iterations: int


def realized_durations(instance: TaskInstance, task: Task, mode: DurationMode = DurationMode.SCALED) -> np.ndarray:
    """Platform-specific durations of one instance.

    In scaled mode the task-level draw acts as multiplicative noise on the
    platform baseline d_i(nu); in baseline mode the baseline is used as is.
    """
    base = np.asarray(task.durations, dtype=float)
    if mode == DurationMode.BASELINE or task.dur_dist.mode <= 0:
        return base
    return base * (instance.duration / task.dur_dist.mode)


def max_realized_duration(dataset: Dataset, mode: DurationMode = DurationMode.SCALED) -> float:
    """Longest duration any instance of the dataset can take."""
    longest = 0.0
    for task in dataset.tasks:
        base = max(task.durations, default=0.0)
        if mode == DurationMode.SCALED and task.dur_dist.mode > 0:
            base *= max(task.dur_dist.max, task.dur_dist.mode) / task.dur_dist.mode
        longest = max(longest, base)
    return longest


def timeline_length(dataset: Dataset, horizon: int, mode: DurationMode = DurationMode.SCALED) -> int:
    """Number of day slots so that no instance starting in [0, T] is truncated."""
    return horizon + 1 + int(math.ceil(max_realized_duration(dataset, mode))) + 1


def scenario_timeline_length(scenario: Scenario, dataset: Dataset, mode: DurationMode = DurationMode.SCALED) -> int:
    """Day slots needed by the scenario: the dataset bound, stretched to fit every instance.

    Loaded or hand-built scenarios may hold instances longer than the
    duration distribution allows or starting after the horizon.
    """
    n_days = timeline_length(dataset, scenario.horizon, mode)
    for instance in scenario.instances:
        if instance.start < 0:
            raise ValueError(f"instance of task {instance.task_id} starts before day 0: {instance.start}")
        durations = realized_durations(instance, dataset.tasks[instance.task_id], mode)
        longest = float(durations.max(initial=0.0))
        n_days = max(n_days, instance.start + int(math.ceil(longest)) + 1)
    return n_days


def _add_interval(row: np.ndarray, start: int, duration: float, fractional: bool) -> None:
    whole = int(math.floor(duration))
    row[start:start + whole] += 1.0
    remainder = duration - whole
    if remainder > 1e-12:
        row[start + whole] += remainder if fractional else 1.0


def instance_tensor(
    scenario: Scenario,
    dataset: Dataset,
    mode: DurationMode = DurationMode.SCALED,
    fractional: bool = True,
) -> np.ndarray:
    """Per-task, per-platform, per-day activity of a scenario.

    With ``fractional`` the final partial day is weighted by its fraction
    (work); without it any touched day counts fully (occupancy).
    """
    n_days = scenario_timeline_length(scenario, dataset, mode)
    tensor = np.zeros((dataset.n_tasks, dataset.n_platforms, n_days), dtype=float)
    for instance in scenario.instances:
        durations = realized_durations(instance, dataset.tasks[instance.task_id], mode)
        for nu in np.flatnonzero(durations > 0):
            _add_interval(tensor[instance.task_id, nu], instance.start, float(durations[nu]), fractional)
    return tensor


def _assignment_counts(assignment, scenario: Scenario) -> np.ndarray:
    counts = np.asarray(assignment, dtype=float)
    if counts.ndim != 2:
        raise ValueError("assignment must be a (tasks, platforms) matrix")
    for task_id in scenario.task_ids():
        if task_id >= counts.shape[0]:
            raise MissingAssignmentError(task_id)
    return counts


def usage_profile(
    scenario: Scenario,
    assignment,
    dataset: Dataset,
    mode: DurationMode = DurationMode.SCALED,
) -> UsageProfile:
    """Usage of each platform on each day under an assignment matrix."""
    counts = _assignment_counts(assignment, scenario)
    tensor = instance_tensor(scenario, dataset, mode, fractional=True)
    rows = min(counts.shape[0], dataset.n_tasks)
    padded = np.zeros((dataset.n_tasks, dataset.n_platforms), dtype=float)
    padded[:rows] = counts[:rows]
    usage = np.einsum("ivt,iv->vt", tensor, padded)
    return UsageProfile(usage=usage, horizon=scenario.horizon)


def average_usage(profiles: Sequence[UsageProfile]) -> UsageStats:
    """Mean and population standard deviation over Y iteration profiles."""
    if not profiles:
        raise ValueError("average_usage needs at least one profile")
    n_platforms = profiles[0].n_platforms
    if any(p.n_platforms != n_platforms for p in profiles):
        raise ValueError("usage profiles must cover the same platforms")

    # Shorter timelines are idle after their last slot.
    n_days = max(p.usage.shape[1] for p in profiles)
    stack = np.stack([np.pad(p.usage, ((0, 0), (0, n_days - p.usage.shape[1]))) for p in profiles])
    averages = np.stack([p.time_average() for p in profiles])
    return UsageStats(
        mean=stack.mean(axis=0),
        std=stack.std(axis=0),
        time_average_mean=averages.mean(axis=0),
        time_average_std=averages.std(axis=0),
        iterations=len(profiles),
    )


def simulate_usage(
    dataset: Dataset,
    assignment,
    horizon: int,
    iterations: int,
    master_seed: int,
    mode: DurationMode = DurationMode.SCALED,
) -> UsageStats:
    """Run Y seeded years under a fixed assignment and average their usage."""
    profiles = []
    for j in range(iterations):
        seed = derive_seed(master_seed, "usage", j)
        scenario = sample_scenario(dataset, horizon, derive_rng(master_seed, "usage", j), scenario_id=j, seed=seed)
        profiles.append(usage_profile(scenario, assignment, dataset, mode))
    stats = average_usage(profiles)
    logger.info(
        "Usage simulated",
        iterations=iterations,
        mean_daily_use=[round(float(v), 4) for v in stats.time_average_mean],
    )
    return stats
