"""Cost objectives over assignment matrices."""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..core.config import ObjectiveWeighting
from ..core.errors import DimensionMismatchError
from ..domain.models import Dataset
from ..ptma.enumeration import OptionCatalog
from ..safe.sampling import Scenario


@dataclass(frozen=True, eq=False)
class AssignmentMatrix:
    """A genome of option indices together with its resolved counts matrix P."""
    genome: Tuple[int, ...]
    counts: np.ndarray

    @classmethod
    def from_genome(cls, genome: Sequence[int], catalog: OptionCatalog) -> "AssignmentMatrix":
        genome = tuple(int(g) for g in genome)
        if len(genome) != catalog.n_tasks:
            raise DimensionMismatchError(catalog.n_tasks, len(genome), what="genome")
        for task_id, index in enumerate(genome):
            if not 0 <= index < catalog.option_counts[task_id]:
                raise ValueError(f"task {task_id} has no option {index}")
        return cls(genome=genome, counts=catalog.matrix(genome))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.counts, dtype=dtype)


@dataclass(frozen=True)
class Objectives:
    """Monetary cost and total mission duration, both minimized."""
    monetary: float
    time: float

    def as_tuple(self) -> Tuple[float, float]:
        return (self.monetary, self.time)


def _counts(P) -> np.ndarray:
    return np.asarray(P, dtype=float)


def _weighted(P, dataset: Dataset, weights: Optional[np.ndarray]) -> np.ndarray:
    counts = _counts(P)
    durations = dataset.duration_matrix()
    if counts.shape != durations.shape:
        raise DimensionMismatchError(durations.shape[1], counts.shape[-1], what="assignment matrix")
    work = durations * counts
    if weights is not None:
        work = work * np.asarray(weights, dtype=float)[:, None]
    return work


def monetary_cost(P, dataset: Dataset, weights: Optional[np.ndarray] = None) -> float:
    """Sum over platforms of committed platform-days times the platform cost."""
    return float(_weighted(P, dataset, weights).sum(axis=0) @ dataset.costs())


def time_cost(P, dataset: Dataset, weights: Optional[np.ndarray] = None) -> float:
    """Total committed platform-days."""
    return float(_weighted(P, dataset, weights).sum())


def evaluate(P, dataset: Dataset, weights: Optional[np.ndarray] = None) -> Objectives:
    return Objectives(monetary=monetary_cost(P, dataset, weights), time=time_cost(P, dataset, weights))


def dominates(a: Union[Objectives, Sequence[float]], b: Union[Objectives, Sequence[float]]) -> bool:
    """Pareto dominance for minimization."""
    a = a.as_tuple() if isinstance(a, Objectives) else tuple(a)
    b = b.as_tuple() if isinstance(b, Objectives) else tuple(b)
    return all(x <= y for x, y in zip(a, b)) and a != b


def task_weights(
    dataset: Dataset,
    scenario: Optional[Scenario],
    weighting: ObjectiveWeighting = ObjectiveWeighting.EXPECTED,
) -> np.ndarray:
    """Per-task row weights for the objectives."""
    if weighting == ObjectiveWeighting.EXPECTED:
        return dataset.frequency_modes()
    if weighting == ObjectiveWeighting.REALIZED:
        if scenario is None:
            raise ValueError("realized weighting needs a scenario")
        return scenario.instance_counts(dataset.n_tasks).astype(float)
    return np.ones(dataset.n_tasks, dtype=float)


@dataclass(frozen=True, eq=False)
class ObjectiveTable:
    """Per-option objective contributions, so a genome evaluates as a gather and a sum.

    Both objectives are linear in P, so the contribution of each task's
    option can be tabulated once per scenario.
    """
    monetary: np.ndarray
    time: np.ndarray

    @classmethod
    def build(cls, catalog: OptionCatalog, dataset: Dataset, weights: Optional[np.ndarray] = None) -> "ObjectiveTable":
        durations = dataset.duration_matrix()
        options = catalog.padded.astype(float)
        work = options * durations[:, None, :]
        if weights is not None:
            work = work * np.asarray(weights, dtype=float)[:, None, None]
        return cls(monetary=work @ dataset.costs(), time=work.sum(axis=2))

    def evaluate(self, genomes: np.ndarray) -> np.ndarray:
        """Objectives of a batch of genomes as an (n, 2) array."""
        genomes = np.atleast_2d(genomes)
        rows = np.arange(genomes.shape[1])
        monetary = self.monetary[rows, genomes].sum(axis=1)
        time = self.time[rows, genomes].sum(axis=1)
        return np.column_stack([monetary, time])
