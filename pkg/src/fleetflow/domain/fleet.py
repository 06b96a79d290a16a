"""Fleet arithmetic: acquisition cost and containment."""

from typing import Sequence

import numpy as np

from ..core.errors import DimensionMismatchError
from .models import FleetVector, Platform, check_dimensions


def fleet_cost(fleet: FleetVector, platforms: Sequence[Platform]) -> float:
    """Acquisition cost: sum over platforms of count times unit cost."""
    if fleet.dimension != len(platforms):
        raise DimensionMismatchError(len(platforms), fleet.dimension)
    costs = np.array([p.cost for p in platforms], dtype=float)
    return float(fleet.as_array() @ costs)


def fleet_contains(a: FleetVector, b: FleetVector) -> bool:
    """True iff ``a`` has at least as many of every platform as ``b``."""
    check_dimensions(a, b)
    return all(x >= y for x, y in zip(a.counts, b.counts))
