"""Small hand-built datasets shared by the test modules."""

from typing import Optional, Sequence, Tuple

from fleetflow.domain.models import (
    Dataset,
    FleetVector,
    Platform,
    SubfunctionRequirement,
    Task,
    TriangularParams,
)


def make_platforms(costs: Sequence[float], cap1: float = 10.0, cap2: float = 1000.0):
    return [Platform(id=nu, capacity_type1=cap1, capacity_type2=cap2, cost=c) for nu, c in enumerate(costs)]


def make_task(
    task_id: int,
    requirements: Sequence[Tuple[int, int, float]],
    suitability: Sequence[Sequence[int]],
    durations: Optional[Sequence[float]] = None,
    freq: float = 1.0,
    dur: Optional[float] = None,
) -> Task:
    """Task from ``(cargo_type, subfunction_id, quantity)`` rows and 0/1 suitability rows.

    Durations default to 1.0 on every suitable platform.
    """
    n_platforms = len(suitability[0]) if suitability else 0
    suitable = [any(row[nu] for row in suitability) for nu in range(n_platforms)]
    if durations is None:
        durations = [1.0 if s else 0.0 for s in suitable]
    positive = [d for d in durations if d > 0]
    if dur is None:
        dur = sum(positive) / len(positive) if positive else 1.0
    return Task(
        id=task_id,
        requirements=tuple(SubfunctionRequirement(cargo_type=t, subfunction_id=s, quantity=q) for t, s, q in requirements),
        durations=tuple(float(d) for d in durations),
        suitability=tuple(tuple(bool(v) for v in row) for row in suitability),
        duration_type=1,
        freq_dist=TriangularParams.degenerate(freq),
        dur_dist=TriangularParams.degenerate(dur),
    )


def make_dataset(platforms, tasks, seed: Optional[int] = None) -> Dataset:
    return Dataset(platforms=tuple(platforms), tasks=tuple(tasks), seed=seed)


def fleet(*counts: int) -> FleetVector:
    return FleetVector(tuple(counts))
