"""Growth options for a fleet and the lattice of capability-adding growth paths."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import structlog

from ..domain.fleet import fleet_cost
from ..domain.models import FleetVector, Platform
from .portfolio import FleetPortfolio, within_budget


logger = structlog.get_logger(__name__)


def additions_within(budget: float, costs: np.ndarray) -> List[Tuple[int, ...]]:
    """Every non-zero addition vector whose acquisition cost fits ``budget``.

    Ordered by cost, then lexicographically by counts.
    """
    costs = np.asarray(costs, dtype=float)
    n = len(costs)
    found: List[Tuple[float, Tuple[int, ...]]] = []
    counts = [0] * n

    def search(nu: int, spent: float) -> None:
        if nu == n:
            if any(counts):
                found.append((spent, tuple(counts)))
            return
        value = 0
        while within_budget(spent + value * costs[nu], budget):
            counts[nu] = value
            search(nu + 1, spent + value * costs[nu])
            value += 1
        counts[nu] = 0

    if budget >= 0:
        search(0, 0.0)
    found.sort(key=lambda item: (round(item[0], 9), item[1]))
    return [counts for _, counts in found]


def enumerate_growth_options(
    X: FleetVector,
    budget_fraction: float,
    platforms: Sequence[Platform],
) -> List[FleetVector]:
    """Platform additions costing at most ``budget_fraction`` of X's acquisition cost."""
    if budget_fraction < 0:
        raise ValueError("budget fraction must be non-negative")
    budget = budget_fraction * fleet_cost(X, platforms)
    costs = np.array([p.cost for p in platforms], dtype=float)
    return [FleetVector(a) for a in additions_within(budget, costs)]


@dataclass
class GrowthNode:
    """One fleet in the growth lattice.

    ``additions`` is the delta from the parent; ``cumulative`` the delta from
    the root. ``option_count`` counts the capability-adding options (the
    children); ``plateau_count`` the affordable options that add nothing.
    """
    level: int
    fraction: float
    additions: FleetVector
    incremental_cost: float
    cumulative: FleetVector
    cumulative_cost: float
    score: float
    option_count: int = 0
    plateau_count: int = 0
    children: List["GrowthNode"] = field(default_factory=list)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "fraction": self.fraction,
            "additions": list(self.additions.counts),
            "incremental_cost": round(self.incremental_cost, 6),
            "cumulative_cost": round(self.cumulative_cost, 6),
            "score": round(self.score, 6),
            "option_count": self.option_count,
            "plateau_count": self.plateau_count,
            "children": [child.to_dict() for child in self.children],
        }


def nodes_per_level(root: GrowthNode) -> List[int]:
    """Number of lattice nodes at each level, root level first."""
    counts: Dict[int, int] = {}
    for node in root.walk():
        counts[node.level] = counts.get(node.level, 0) + 1
    return [counts.get(level, 0) for level in range(max(counts) + 1)]


def growth_lattice(
    X: FleetVector,
    ladder: Sequence[float],
    portfolio: FleetPortfolio,
    platforms: Sequence[Platform],
    max_nodes: int = 10000,
) -> GrowthNode:
    """Expand X level by level within the cumulative ladder budgets.

    Level ``l`` may spend up to ``ladder[l]`` times the root's cost in total.
    A child is kept only when it strictly raises the share of scenarios
    accomplished without augmentation over its parent.
    """
    ladder = [float(f) for f in ladder]
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("growth ladder must be strictly ascending")
    if not ladder or ladder[0] != 0.0:
        ladder = [0.0] + ladder

    costs = np.array([p.cost for p in platforms], dtype=float)
    root_cost = fleet_cost(X, platforms)
    n_platforms = len(platforms)

    def score_of(fleets: np.ndarray) -> np.ndarray:
        return (portfolio.augmentation_costs(fleets) <= 0.0).mean(axis=1)

    root = GrowthNode(
        level=0,
        fraction=ladder[0],
        additions=FleetVector.zeros(n_platforms),
        incremental_cost=0.0,
        cumulative=FleetVector.zeros(n_platforms),
        cumulative_cost=0.0,
        score=float(score_of(X.as_array())[0]),
    )

    total = 1
    frontier = [root]
    truncated = False
    for level in range(1, len(ladder)):
        budget = ladder[level] * root_cost
        next_frontier: List[GrowthNode] = []
        for node in frontier:
            options = additions_within(budget - node.cumulative_cost, costs)
            if not options:
                continue
            deltas = np.asarray(options, dtype=np.int64)
            grown = X.as_array()[None, :] + node.cumulative.as_array()[None, :] + deltas
            scores = score_of(grown)
            adding = np.flatnonzero(scores > node.score)
            node.option_count = int(adding.size)
            node.plateau_count = int(len(options) - adding.size)
            for k in adding:
                if total >= max_nodes:
                    truncated = True
                    break
                delta = FleetVector(options[k])
                increment = float(deltas[k] @ costs)
                child = GrowthNode(
                    level=level,
                    fraction=ladder[level],
                    additions=delta,
                    incremental_cost=increment,
                    cumulative=node.cumulative + delta,
                    cumulative_cost=node.cumulative_cost + increment,
                    score=float(scores[k]),
                )
                node.children.append(child)
                next_frontier.append(child)
                total += 1
            if truncated:
                break
        if truncated:
            logger.warning("Growth lattice truncated", max_nodes=max_nodes, level=level)
            break
        frontier = next_frontier

    logger.info("Growth lattice built", nodes=total, levels=len(ladder), root_score=root.score)
    return root
