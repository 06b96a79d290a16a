"""Multi-objective optimization of assignment matrices."""

from .fleets import FleetMapper, dedup_fleets, solution_to_fleet
from .nsga2 import (
    Population,
    binary_tournament,
    crowding_distance,
    domination_matrix,
    evolve,
    nondominated_sort,
    rank_population,
    select_survivors,
)
from .objectives import (
    AssignmentMatrix,
    ObjectiveTable,
    Objectives,
    dominates,
    evaluate,
    monetary_cost,
    task_weights,
    time_cost,
)
from .operators import crossover, mutate

__all__ = [
    "AssignmentMatrix",
    "FleetMapper",
    "ObjectiveTable",
    "Objectives",
    "Population",
    "binary_tournament",
    "crossover",
    "crowding_distance",
    "dedup_fleets",
    "dominates",
    "domination_matrix",
    "evaluate",
    "evolve",
    "monetary_cost",
    "mutate",
    "nondominated_sort",
    "rank_population",
    "select_survivors",
    "solution_to_fleet",
    "task_weights",
    "time_cost",
]
