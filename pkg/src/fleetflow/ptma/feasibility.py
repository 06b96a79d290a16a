"""Coverage feasibility of a platform assignment for one task.

A platform unit can split its cargo-type capacity across every subfunction
of that type it is suitable for, and serves both cargo types at once. For
each cargo type this is a transportation problem with divisible supply, so
an allocation exists iff for every subset ``A`` of subfunctions the demand
of ``A`` does not exceed the capacity of the platforms suitable for some
member of ``A``. Tasks have at most three subfunctions per cargo type, so
the check runs over at most seven subsets per type.
"""

import math
from dataclasses import dataclass
from itertools import combinations
from typing import List, Sequence, Tuple

from ..domain.models import FleetVector, Platform, Task


TOLERANCE = 1e-9


@dataclass(frozen=True)
class CoverageConstraint:
    """Demand of one subfunction subset and the capacity terms that can serve it."""
    demand: float
    terms: Tuple[Tuple[int, float], ...]

    def satisfied(self, counts: Sequence[int]) -> bool:
        supply = 0.0
        for nu, capacity in self.terms:
            supply += counts[nu] * capacity
        return self.demand <= supply + TOLERANCE


@dataclass(frozen=True)
class CoverageConstraints:
    """All subset constraints of a task."""
    task_id: int
    constraints: Tuple[CoverageConstraint, ...]

    @classmethod
    def from_task(cls, task: Task, platforms: Sequence[Platform]) -> "CoverageConstraints":
        constraints: List[CoverageConstraint] = []
        for cargo_type in task.cargo_types():
            rows = [
                r for r, req in enumerate(task.requirements)
                if req.cargo_type == cargo_type and req.quantity > 0
            ]
            for size in range(1, len(rows) + 1):
                for subset in combinations(rows, size):
                    demand = sum(task.requirements[r].quantity for r in subset)
                    serving = sorted({
                        nu for r in subset
                        for nu, suited in enumerate(task.suitability[r]) if suited
                    })
                    terms = tuple((nu, float(platforms[nu].capacity(cargo_type))) for nu in serving)
                    constraints.append(CoverageConstraint(demand=float(demand), terms=terms))
        return cls(task_id=task.id, constraints=tuple(constraints))

    def unservable(self) -> bool:
        """True when some positive demand has no suitable platform at all."""
        return any(c.demand > TOLERANCE and not c.terms for c in self.constraints)

    def satisfied(self, counts: Sequence[int]) -> bool:
        return all(c.satisfied(counts) for c in self.constraints)


def _as_counts(counts) -> Sequence[int]:
    if isinstance(counts, FleetVector):
        return counts.counts
    return counts


def is_valid_assignment(task: Task, counts, platforms: Sequence[Platform]) -> bool:
    """True iff the platform counts can cover every requirement of the task."""
    counts = _as_counts(counts)
    if len(counts) != len(platforms):
        counts = list(counts) + [0] * (len(platforms) - len(counts))
    return CoverageConstraints.from_task(task, platforms).satisfied(counts)


def per_platform_bound(task: Task, platforms: Sequence[Platform]) -> List[int]:
    """Largest count of each platform that can appear in a minimal assignment.

    A platform never needs more units than it takes to carry, on its own,
    all demand of the cargo type it is most needed for.
    """
    bounds = [0] * len(platforms)
    for nu, platform in enumerate(platforms):
        best = 0
        for cargo_type in (1, 2):
            demand = sum(
                req.quantity
                for req, row in zip(task.requirements, task.suitability)
                if req.cargo_type == cargo_type and row[nu] and req.quantity > 0
            )
            if demand > 0:
                best = max(best, math.ceil(demand / platform.capacity(cargo_type) - TOLERANCE))
        bounds[nu] = best
    return bounds
