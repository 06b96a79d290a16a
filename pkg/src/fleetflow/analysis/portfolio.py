"""Per-scenario fleet sets and the containment / augmentation tests over them."""

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

import numpy as np

from ..core.errors import DimensionMismatchError, EmptyFleetSetError
from ..domain.fleet import fleet_contains
from ..domain.models import FleetVector, Platform, fleets_to_matrix

# Relative slack for comparing money amounts against a budget.
BUDGET_TOLERANCE = 1e-9

# Upper bound on entries of the fleets x targets x platforms deficit tensor.
MAX_DEFICIT_CELLS = 1 << 21


def within_budget(cost, budget: float):
    """``cost <= budget`` up to floating-point noise; works on scalars and arrays."""
    return cost <= budget + BUDGET_TOLERANCE * max(1.0, abs(budget))


def _costs(platforms: Sequence[Platform]) -> np.ndarray:
    return np.array([p.cost for p in platforms], dtype=float)


def can_accomplish(X: FleetVector, scenario_fleets: Iterable[FleetVector]) -> bool:
    """True iff X contains at least one of the scenario's fleets."""
    scenario_fleets = list(scenario_fleets)
    if not scenario_fleets:
        raise EmptyFleetSetError("cannot test accomplishment against an empty fleet set")
    return any(fleet_contains(X, F) for F in scenario_fleets)


def augmentation_cost(
    X: FleetVector,
    scenario_fleets: Iterable[FleetVector],
    platforms: Sequence[Platform],
) -> Tuple[float, FleetVector]:
    """Cheapest acquisition that makes X contain one of the scenario's fleets.

    Returns the cost and the platforms to add. Equal-cost candidates are
    broken by the lexicographically smallest addition vector.
    """
    scenario_fleets = list(scenario_fleets)
    if not scenario_fleets:
        raise EmptyFleetSetError("cannot augment towards an empty fleet set")
    if X.dimension != len(platforms):
        raise DimensionMismatchError(len(platforms), X.dimension)

    targets = fleets_to_matrix(scenario_fleets, len(platforms))
    deficits = np.clip(targets - X.as_array()[None, :], 0, None)
    costs = deficits @ _costs(platforms)
    best = float(costs.min())

    candidates = sorted(
        tuple(int(v) for v in row) for row in deficits[within_budget(costs, best)]
    )
    additions = FleetVector(candidates[0])
    if additions.is_zero():
        return 0.0, additions
    return float(additions.as_array() @ _costs(platforms)), additions


@dataclass(frozen=True, eq=False)
class FleetPortfolio:
    """Deduplicated fleets of every scenario, stored as one dense matrix.

    Rows ``offsets[k]`` up to ``offsets[k + 1]`` belong to scenario
    ``scenario_ids[k]``.
    """
    scenario_ids: Tuple[int, ...]
    matrix: np.ndarray
    offsets: np.ndarray
    costs: np.ndarray

    @classmethod
    def from_fleets(
        cls,
        fleets: Mapping[int, Iterable[FleetVector]],
        platforms: Sequence[Platform],
    ) -> "FleetPortfolio":
        n_platforms = len(platforms)
        scenario_ids: List[int] = []
        blocks: List[np.ndarray] = []
        offsets: List[int] = []
        start = 0
        for scenario_id in sorted(fleets):
            unique = list(dict.fromkeys(fleets[scenario_id]))
            if not unique:
                raise EmptyFleetSetError(f"scenario {scenario_id} has no fleets")
            block = fleets_to_matrix(unique, n_platforms)
            scenario_ids.append(int(scenario_id))
            offsets.append(start)
            blocks.append(block)
            start += block.shape[0]

        if not blocks:
            raise EmptyFleetSetError("portfolio needs at least one scenario")
        return cls(
            scenario_ids=tuple(scenario_ids),
            matrix=np.vstack(blocks).astype(np.int64),
            offsets=np.asarray(offsets, dtype=np.int64),
            costs=_costs(platforms),
        )

    @property
    def n_scenarios(self) -> int:
        return len(self.scenario_ids)

    @property
    def n_fleets(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_platforms(self) -> int:
        return self.matrix.shape[1]

    def _bounds(self, position: int) -> Tuple[int, int]:
        start = int(self.offsets[position])
        end = int(self.offsets[position + 1]) if position + 1 < self.n_scenarios else self.n_fleets
        return start, end

    def scenario_fleets(self, scenario_id: int) -> List[FleetVector]:
        start, end = self._bounds(self.scenario_ids.index(scenario_id))
        return [FleetVector.from_array(row) for row in self.matrix[start:end]]

    def scenario_of(self) -> np.ndarray:
        """Scenario id of every portfolio row."""
        sizes = np.diff(np.append(self.offsets, self.n_fleets))
        return np.repeat(np.asarray(self.scenario_ids, dtype=np.int64), sizes)

    def fleet_costs(self) -> np.ndarray:
        return self.matrix @ self.costs

    def iter_fleets(self) -> Iterator[Tuple[int, FleetVector]]:
        for scenario_id, row in zip(self.scenario_of(), self.matrix):
            yield int(scenario_id), FleetVector.from_array(row)

    def as_mapping(self) -> Dict[int, List[FleetVector]]:
        return {k: self.scenario_fleets(k) for k in self.scenario_ids}

    def _row_chunk(self, chunk_size: int, max_cells: int) -> int:
        """Fleet rows per block so that the deficit tensor stays below ``max_cells`` entries."""
        per_row = max(1, self.n_fleets * self.n_platforms)
        return max(1, min(chunk_size, max_cells // per_row))

    def _as_rows(self, fleets) -> np.ndarray:
        if isinstance(fleets, FleetVector):
            fleets = fleets.as_array()
        X = np.atleast_2d(np.asarray(fleets, dtype=np.int64))
        if X.shape[1] != self.n_platforms:
            raise DimensionMismatchError(self.n_platforms, X.shape[1])
        return X

    def augmentation_costs(self, fleets, chunk_size: int = 64, max_cells: int = MAX_DEFICIT_CELLS) -> np.ndarray:
        """Minimum augmentation cost of every given fleet against every scenario.

        ``fleets`` is a FleetVector or an (n, n_platforms) array; the result
        has shape (n, n_scenarios). Work is done in row blocks of at most
        ``chunk_size`` fleets, fewer when the deficit tensor would exceed
        ``max_cells`` entries.
        """
        X = self._as_rows(fleets)
        rows = self._row_chunk(chunk_size, max_cells)
        result = np.empty((X.shape[0], self.n_scenarios), dtype=float)
        for start in range(0, X.shape[0], rows):
            block = X[start:start + rows]
            deficits = np.clip(self.matrix[None, :, :] - block[:, None, :], 0, None)
            per_target = deficits @ self.costs
            result[start:start + rows] = np.minimum.reduceat(per_target, self.offsets, axis=1)
        return result

    def argmin_additions(self, fleets) -> np.ndarray:
        """Cheapest additions of every given fleet towards every scenario.

        Returns an (n, n_scenarios, n_platforms) integer array. Ties are broken
        by the lexicographically smallest addition vector, as in
        :func:`augmentation_cost`. Scenarios are handled one at a time.
        """
        X = self._as_rows(fleets)
        additions = np.zeros((X.shape[0], self.n_scenarios, self.n_platforms), dtype=np.int64)
        for position in range(self.n_scenarios):
            start, end = self._bounds(position)
            deficits = np.clip(self.matrix[None, start:end, :] - X[:, None, :], 0, None)
            per_target = deficits @ self.costs
            best = per_target.min(axis=1, keepdims=True)
            candidates = per_target <= best + BUDGET_TOLERANCE * np.maximum(1.0, np.abs(best))
            for nu in range(self.n_platforms):
                column = np.where(candidates, deficits[:, :, nu], np.iinfo(np.int64).max)
                candidates &= column == column.min(axis=1, keepdims=True)
            additions[:, position, :] = deficits[np.arange(X.shape[0]), candidates.argmax(axis=1)]
        return additions

    def accomplished(self, fleets) -> np.ndarray:
        """Boolean (n, n_scenarios) matrix of zero-cost accomplishment."""
        return self.augmentation_costs(fleets) <= 0.0
