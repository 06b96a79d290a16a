"""Platform to Mission Assignment: exhaustive enumeration of minimal valid assignments."""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..core.errors import InfeasibleTaskError
from ..domain.models import Dataset, Platform, Task
from .feasibility import CoverageConstraints, per_platform_bound


logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class AssignmentOption:
    """One row of an assignment matrix: platform counts for a task."""
    task_id: int
    counts: Tuple[int, ...]

    def as_mapping(self) -> dict:
        return {nu: c for nu, c in enumerate(self.counts) if c}


def _is_minimal(counts: List[int], coverage: CoverageConstraints) -> bool:
    for nu, value in enumerate(counts):
        if value == 0:
            continue
        counts[nu] = value - 1
        still_valid = coverage.satisfied(counts)
        counts[nu] = value
        if still_valid:
            return False
    return True


def enumerate_assignments(
    task: Task,
    platforms: Sequence[Platform],
    cap: Optional[int] = None,
) -> List[AssignmentOption]:
    """Every minimal valid assignment with at most ``cap`` of each platform.

    Without ``cap`` each platform is bounded by :func:`per_platform_bound`,
    which loses no minimal assignment. Options come back in lexicographic
    order of their count vectors.
    """
    coverage = CoverageConstraints.from_task(task, platforms)
    if coverage.unservable():
        raise InfeasibleTaskError(task.id, "a requirement has no suitable platform")

    bounds = per_platform_bound(task, platforms)
    if cap is not None:
        bounds = [min(b, cap) for b in bounds]

    variables = [nu for nu, b in enumerate(bounds) if b > 0]
    counts = [0] * len(platforms)
    found: List[Tuple[int, ...]] = []

    def optimistic(depth: int) -> bool:
        # Remaining platforms at their bounds; validity is monotone in the counts.
        trial = list(counts)
        for nu in variables[depth:]:
            trial[nu] = bounds[nu]
        return coverage.satisfied(trial)

    def search(depth: int) -> None:
        if coverage.satisfied(counts):
            if _is_minimal(counts, coverage):
                found.append(tuple(counts))
            return
        if depth == len(variables):
            return
        nu = variables[depth]
        for value in range(bounds[nu] + 1):
            counts[nu] = value
            if optimistic(depth + 1):
                search(depth + 1)
                if coverage.satisfied(counts):
                    break
        counts[nu] = 0

    search(0)

    if not found:
        raise InfeasibleTaskError(task.id, f"no valid assignment within cap {cap}")

    return [AssignmentOption(task_id=task.id, counts=c) for c in sorted(found)]


@dataclass(frozen=True)
class OptionCatalog:
    """Per-task lists of assignment options."""
    n_platforms: int
    options: Tuple[Tuple[AssignmentOption, ...], ...]

    @property
    def n_tasks(self) -> int:
        return len(self.options)

    @property
    def option_counts(self) -> Tuple[int, ...]:
        return tuple(len(opts) for opts in self.options)

    @cached_property
    def padded(self) -> np.ndarray:
        """Options as an (n_tasks, max_options, n_platforms) array, zero-padded."""
        width = max(self.option_counts, default=1)
        table = np.zeros((self.n_tasks, width, self.n_platforms), dtype=np.int64)
        for i, opts in enumerate(self.options):
            for k, option in enumerate(opts):
                table[i, k] = option.counts
        return table

    def matrix(self, genome: Sequence[int]) -> np.ndarray:
        """Resolve a genome of option indices into the counts matrix P."""
        genome = np.asarray(genome, dtype=np.int64)
        return self.padded[np.arange(self.n_tasks), genome]

    def option(self, task_id: int, index: int) -> AssignmentOption:
        return self.options[task_id][index]


def _enumerate_task(args) -> List[AssignmentOption]:
    task, platforms, cap = args
    return enumerate_assignments(task, platforms, cap)


def build_catalog(dataset: Dataset, cap: Optional[int] = None, workers: int = 1) -> OptionCatalog:
    """Enumerate every task of a dataset."""
    jobs = [(task, dataset.platforms, cap) for task in dataset.tasks]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_task = list(pool.map(_enumerate_task, jobs))
    else:
        per_task = [_enumerate_task(job) for job in jobs]

    catalog = OptionCatalog(
        n_platforms=dataset.n_platforms,
        options=tuple(tuple(opts) for opts in per_task),
    )
    logger.info(
        "Catalog built",
        tasks=catalog.n_tasks,
        options=sum(catalog.option_counts),
        log10_space=round(solution_space_log10(catalog), 3),
    )
    return catalog


def solution_space_log10(catalog: OptionCatalog) -> float:
    """log10 of the number of distinct assignment matrices."""
    return float(sum(math.log10(n) for n in catalog.option_counts))
