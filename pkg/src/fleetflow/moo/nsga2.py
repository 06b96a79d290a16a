"""Elitist non-dominated sorting genetic algorithm over assignment genomes."""

from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
import structlog

from ..core.config import ObjectiveWeighting, OptimizerConfig
from ..domain.models import Dataset
from ..ptma.enumeration import OptionCatalog
from ..safe.sampling import Scenario
from .objectives import AssignmentMatrix, Objectives, ObjectiveTable, task_weights
from .operators import crossover, mutate


logger = structlog.get_logger(__name__)


@dataclass(eq=False)
class Population:
    """Genomes with their objectives, front ranks and crowding distances."""
    genomes: np.ndarray
    objectives: np.ndarray
    ranks: np.ndarray
    crowding: np.ndarray
    fronts: List[np.ndarray]

    @property
    def size(self) -> int:
        return self.genomes.shape[0]

    def objectives_of(self, index: int) -> Objectives:
        monetary, time = self.objectives[index]
        return Objectives(monetary=float(monetary), time=float(time))

    def assignment(self, index: int, catalog: OptionCatalog) -> AssignmentMatrix:
        return AssignmentMatrix.from_genome(self.genomes[index], catalog)

    def pareto_front(self) -> np.ndarray:
        """Indices of the rank-0 individuals."""
        return self.fronts[0] if self.fronts else np.zeros(0, dtype=np.int64)


def domination_matrix(objectives: np.ndarray) -> np.ndarray:
    """``D[p, q]`` is True when individual p dominates individual q."""
    objectives = np.asarray(objectives, dtype=float)
    le = (objectives[:, None, :] <= objectives[None, :, :]).all(axis=2)
    lt = (objectives[:, None, :] < objectives[None, :, :]).any(axis=2)
    return le & lt


def nondominated_sort(objectives: np.ndarray) -> List[np.ndarray]:
    """Partition individuals into fronts of increasing rank."""
    objectives = np.asarray(objectives, dtype=float)
    if objectives.shape[0] == 0:
        return []
    dominates = domination_matrix(objectives)
    remaining = dominates.sum(axis=0).astype(np.int64)

    fronts = []
    current = np.flatnonzero(remaining == 0)
    while current.size:
        fronts.append(current)
        remaining[current] = -1
        remaining -= dominates[current].sum(axis=0)
        current = np.flatnonzero(remaining == 0)
    return fronts


def crowding_distance(objectives: np.ndarray) -> np.ndarray:
    """Crowding distance of the members of one front; boundary members get infinity."""
    objectives = np.asarray(objectives, dtype=float)
    n = objectives.shape[0]
    distance = np.zeros(n, dtype=float)
    if n <= 2:
        distance[:] = np.inf
        return distance

    for m in range(objectives.shape[1]):
        order = np.argsort(objectives[:, m], kind="stable")
        values = objectives[order, m]
        distance[order[0]] = np.inf
        distance[order[-1]] = np.inf
        span = values[-1] - values[0]
        if span <= 0:
            continue
        distance[order[1:-1]] += (values[2:] - values[:-2]) / span
    return distance


def binary_tournament(ranks: np.ndarray, crowding: np.ndarray, rng: np.random.Generator) -> int:
    """Pick two individuals; lower rank wins, then larger crowding, then a coin flip."""
    n = len(ranks)
    if n == 1:
        return 0
    a, b = rng.choice(n, size=2, replace=False)
    if ranks[a] != ranks[b]:
        return int(a if ranks[a] < ranks[b] else b)
    if crowding[a] != crowding[b]:
        return int(a if crowding[a] > crowding[b] else b)
    return int(a if rng.random() < 0.5 else b)


def rank_population(genomes: np.ndarray, objectives: np.ndarray) -> Population:
    """Sort a set of evaluated genomes into a ranked population."""
    fronts = nondominated_sort(objectives)
    ranks = np.zeros(genomes.shape[0], dtype=np.int64)
    crowding = np.zeros(genomes.shape[0], dtype=float)
    for rank, front in enumerate(fronts):
        ranks[front] = rank
        crowding[front] = crowding_distance(objectives[front])
    return Population(genomes=genomes, objectives=objectives, ranks=ranks, crowding=crowding, fronts=fronts)


def select_survivors(objectives: np.ndarray, size: int) -> np.ndarray:
    """Indices of the ``size`` best individuals by rank, then crowding distance."""
    chosen: List[int] = []
    for front in nondominated_sort(objectives):
        if len(chosen) + len(front) <= size:
            chosen.extend(front.tolist())
            if len(chosen) == size:
                break
            continue
        distance = crowding_distance(objectives[front])
        order = np.lexsort((front, -distance))
        chosen.extend(front[order[: size - len(chosen)]].tolist())
        break
    return np.asarray(chosen, dtype=np.int64)


GenerationCallback = Callable[[int, Population], None]


def evolve(
    scenario: Optional[Scenario],
    catalog: OptionCatalog,
    dataset: Dataset,
    params: OptimizerConfig,
    rng: np.random.Generator,
    on_generation: Optional[GenerationCallback] = None,
) -> Population:
    """Run the generational loop and return the final ranked population.

    Every generation merges parents and offspring, sorts the union into
    fronts and truncates it back to N by rank and crowding distance.
    """
    weights = task_weights(dataset, scenario, params.objective_weighting)
    table = ObjectiveTable.build(catalog, dataset, weights)
    n_options = np.asarray(catalog.option_counts, dtype=np.int64)
    size = params.population_size

    genomes = rng.integers(0, n_options, size=(size, catalog.n_tasks))
    population = rank_population(genomes, table.evaluate(genomes))
    if on_generation is not None:
        on_generation(0, population)

    for generation in range(1, params.generations + 1):
        offspring = np.empty_like(population.genomes)
        for k in range(size):
            first = binary_tournament(population.ranks, population.crowding, rng)
            second = binary_tournament(population.ranks, population.crowding, rng)
            child = crossover(population.genomes[first], population.genomes[second], rng)
            offspring[k] = mutate(child, catalog, params.mutation_rate, rng)

        merged_genomes = np.vstack([population.genomes, offspring])
        merged_objectives = np.vstack([population.objectives, table.evaluate(offspring)])
        survivors = select_survivors(merged_objectives, size)
        population = rank_population(merged_genomes[survivors], merged_objectives[survivors])

        if on_generation is not None:
            on_generation(generation, population)

    front = population.pareto_front()
    logger.debug(
        "Evolution finished",
        scenario_id=getattr(scenario, "id", None),
        generations=params.generations,
        front_size=len(front),
        min_monetary=round(float(population.objectives[:, 0].min()), 4),
        min_time=round(float(population.objectives[:, 1].min()), 4),
    )
    return population
