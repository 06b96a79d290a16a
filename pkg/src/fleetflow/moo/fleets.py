"""Mapping assignment solutions to fleets."""

from typing import Iterable, List, Sequence

import numpy as np

from ..core.config import DurationMode, FleetMapping
from ..domain.fleet import fleet_cost
from ..domain.models import Dataset, FleetVector, Platform
from ..safe.sampling import Scenario
from ..safe.usage import instance_tensor


class FleetMapper:
    """Maps assignment matrices of one scenario to fleets.

    The per-task occupancy of the scenario is computed once; each mapping is
    then a contraction with the assignment matrix.
    """

    def __init__(
        self,
        scenario: Scenario,
        dataset: Dataset,
        duration_mode: DurationMode = DurationMode.SCALED,
        mapping: FleetMapping = FleetMapping.PEAK,
    ):
        self.mapping = mapping
        self.n_platforms = dataset.n_platforms
        self.active = np.flatnonzero(scenario.instance_counts(dataset.n_tasks) > 0)
        if mapping == FleetMapping.PEAK:
            occupancy = instance_tensor(scenario, dataset, duration_mode, fractional=False)
            self.occupancy = occupancy[self.active]
        else:
            self.occupancy = None

    def fleet(self, P) -> FleetVector:
        counts = np.asarray(P, dtype=float)[self.active]
        if self.active.size == 0:
            return FleetVector.zeros(self.n_platforms)
        if self.mapping == FleetMapping.SUM:
            return FleetVector.from_array(np.ceil(counts.sum(axis=0) - 1e-9))
        demand = np.einsum("ivt,iv->vt", self.occupancy, counts)
        return FleetVector.from_array(np.ceil(demand.max(axis=1) - 1e-9))


def solution_to_fleet(
    P,
    scenario: Scenario,
    dataset: Dataset,
    duration_mode: DurationMode = DurationMode.SCALED,
    mapping: FleetMapping = FleetMapping.PEAK,
) -> FleetVector:
    """Fleet able to serve the scenario under P: peak simultaneous demand per platform."""
    return FleetMapper(scenario, dataset, duration_mode, mapping).fleet(P)


def dedup_fleets(fleets: Iterable[FleetVector], platforms: Sequence[Platform]) -> List[FleetVector]:
    """Unique fleets ordered by acquisition cost, then lexicographically by counts."""
    unique = set(fleets)
    return sorted(unique, key=lambda f: (round(fleet_cost(f, platforms), 9), f.counts))
