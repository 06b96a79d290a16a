"""Synthetic task/platform dataset generator."""

from typing import List, Optional

import numpy as np
import structlog

from ..core.config import GeneratorConfig
from ..core.errors import ConfigError
from .models import Dataset, Platform, SubfunctionRequirement, Task, TriangularParams


logger = structlog.get_logger(__name__)


# Reference platform table: (type-1 capacity, type-2 capacity, cost)
REFERENCE_PLATFORMS = (
    (22, 5072, 0.9199),
    (8, 29505, 1.9282),
    (9, 95467, 5.6292),
    (23, 111716, 20.2813),
    (58, 25812, 2.8454),
    (47, 106710, 5.4026),
    (100, 23827, 4.7058),
    (132, 83918, 7.7959),
    (200, 21165, 3.4486),
    (180, 73303, 4.7107),
)

MAX_SUITABILITY_REDRAWS = 1000


def reference_platforms(count: int = len(REFERENCE_PLATFORMS)) -> List[Platform]:
    """The first ``count`` rows of the reference platform table."""
    return [
        Platform(id=nu, capacity_type1=cap1, capacity_type2=cap2, cost=cost)
        for nu, (cap1, cap2, cost) in enumerate(REFERENCE_PLATFORMS[:count])
    ]


def reference_mission(task_id: int = 0) -> Task:
    """The fully specified six-subfunction example mission over the reference platforms."""
    requirements = (
        SubfunctionRequirement(cargo_type=1, subfunction_id=1, quantity=401),
        SubfunctionRequirement(cargo_type=1, subfunction_id=2, quantity=470),
        SubfunctionRequirement(cargo_type=1, subfunction_id=3, quantity=170),
        SubfunctionRequirement(cargo_type=2, subfunction_id=1, quantity=20038),
        SubfunctionRequirement(cargo_type=2, subfunction_id=2, quantity=20152),
        SubfunctionRequirement(cargo_type=2, subfunction_id=3, quantity=518347),
    )
    durations = (13.96, 9.88, 0.0, 0.0, 12.53, 0.0, 0.0, 0.0, 9.45, 0.0)
    suited = {
        0: {3, 4},        # P1: type-2 subfunctions 1, 2
        1: {2, 3, 4},     # P2: type-1 subfunction 3, type-2 subfunctions 1, 2
        4: {2},           # P5: type-1 subfunction 3
        8: {0, 1, 2, 3, 4, 5},
    }
    suitability = tuple(
        tuple(row in suited.get(nu, set()) for nu in range(len(durations)))
        for row in range(len(requirements))
    )
    positive = [d for d in durations if d > 0]
    return Task(
        id=task_id,
        requirements=requirements,
        durations=durations,
        suitability=suitability,
        duration_type=4,
        freq_dist=TriangularParams.around(1.0),
        dur_dist=TriangularParams.around(round(sum(positive) / len(positive), 4)),
    )


def _build_platforms(config: GeneratorConfig, rng: np.random.Generator) -> List[Platform]:
    if config.platform_table is not None:
        return [
            Platform(id=nu, capacity_type1=row.capacity_type1, capacity_type2=row.capacity_type2, cost=row.cost)
            for nu, row in enumerate(config.platform_table)
        ]

    platforms = reference_platforms(min(config.n_platforms, len(REFERENCE_PLATFORMS)))
    for nu in range(len(platforms), config.n_platforms):
        platforms.append(Platform(
            id=nu,
            capacity_type1=float(round(rng.uniform(*config.type1_capacity_range))),
            capacity_type2=float(round(rng.uniform(*config.type2_capacity_range))),
            cost=round(float(rng.uniform(*config.cost_range)), 4),
        ))
    return platforms


def _normalized_capacity(platforms: List[Platform]) -> np.ndarray:
    cap1 = np.array([p.capacity_type1 for p in platforms], dtype=float)
    cap2 = np.array([p.capacity_type2 for p in platforms], dtype=float)
    return 0.5 * (cap1 / cap1.max() + cap2 / cap2.max())


def _draw_suitability_row(pool_size: int, probability: float, rng: np.random.Generator) -> np.ndarray:
    for _ in range(MAX_SUITABILITY_REDRAWS):
        row = rng.random(pool_size) < probability
        if row.any():
            return row
    row = np.zeros(pool_size, dtype=bool)
    row[rng.integers(0, pool_size)] = True
    return row


def _build_task(
    task_id: int,
    config: GeneratorConfig,
    platforms: List[Platform],
    norm_capacity: np.ndarray,
    rng: np.random.Generator,
) -> Task:
    n_platforms = len(platforms)

    n_types = int(rng.integers(config.cargo_types_range[0], config.cargo_types_range[1] + 1))
    cargo_types = sorted(int(t) for t in rng.choice([1, 2], size=n_types, replace=False))

    requirements = []
    for cargo_type in cargo_types:
        low, high = config.type1_quantity_range if cargo_type == 1 else config.type2_quantity_range
        n_sub = int(rng.integers(config.subfunctions_range[0], config.subfunctions_range[1] + 1))
        for sub in range(1, n_sub + 1):
            requirements.append(SubfunctionRequirement(
                cargo_type=cargo_type,
                subfunction_id=sub,
                quantity=float(rng.integers(low, high + 1)),
            ))

    max_pool = min(config.max_platforms_per_task, n_platforms)
    pool_size = int(rng.integers(1, max_pool + 1))
    pool = np.sort(rng.choice(n_platforms, size=pool_size, replace=False))

    suitability = np.zeros((len(requirements), n_platforms), dtype=bool)
    for row in range(len(requirements)):
        suitability[row, pool] = _draw_suitability_row(pool_size, config.suitability_probability, rng)

    duration_type = int(rng.integers(1, 5))
    bounds = config.duration_types[duration_type - 1]
    floor = 10.0 ** -config.duration_decimals
    durations = np.zeros(n_platforms, dtype=float)
    for nu in np.flatnonzero(suitability.any(axis=0)):
        x = norm_capacity[nu]
        low = bounds.low_intercept + bounds.low_slope * x
        high = bounds.high_intercept + bounds.high_slope * x
        durations[nu] = max(round(float(rng.uniform(low, high)), config.duration_decimals), floor)

    frequency = round(float(rng.uniform(*config.frequency_range)), 4)
    nominal_duration = round(float(durations[durations > 0].mean()), 4)

    return Task(
        id=task_id,
        requirements=tuple(requirements),
        durations=tuple(float(d) for d in durations),
        suitability=tuple(tuple(bool(v) for v in row) for row in suitability),
        duration_type=duration_type,
        freq_dist=TriangularParams.around(frequency, config.triangular_spread),
        dur_dist=TriangularParams.around(nominal_duration, config.triangular_spread),
    )


def generate_dataset(config: Optional[GeneratorConfig] = None, seed: int = 0) -> Dataset:
    """Generate a random dataset; identical ``(config, seed)`` gives an identical dataset."""
    config = config or GeneratorConfig()
    if config.suitability_probability <= 0.0:
        raise ConfigError(
            "no platform could ever suit a subfunction",
            field="generator.suitability_probability",
        )

    rng = np.random.default_rng(seed)
    platforms = _build_platforms(config, rng)
    norm_capacity = _normalized_capacity(platforms)
    tasks = [
        _build_task(task_id, config, platforms, norm_capacity, rng)
        for task_id in range(config.n_tasks)
    ]

    logger.info(
        "Dataset generated",
        seed=seed,
        tasks=len(tasks),
        platforms=len(platforms),
    )
    return Dataset(platforms=tuple(platforms), tasks=tuple(tasks), seed=seed)
