"""Pipeline stages and their orchestration.

Each stage reads its inputs from the artifact directory and writes its
outputs back through the :class:`ArtifactWriter`, so stages can run one at a
time from the CLI or chained by :func:`run_pipeline`.
"""

import asyncio
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Awaitable, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog

from ..analysis.capability import (
    Classification,
    ScenarioClass,
    capability_histogram,
    scores_from_costs,
)
from ..analysis.growth import growth_lattice, nodes_per_level
from ..analysis.portfolio import FleetPortfolio
from ..core.config import DurationMode, ExperimentMode, OptimizerConfig, RunConfig, SimulationConfig
from ..core.errors import ArtifactMissingError, ConfigError
from ..core.seeds import derive_rng, derive_seed
from ..domain.dataset_io import dataset_hash, dumps_dataset, parse_dataset, validate_dataset
from ..domain.fleet import fleet_cost
from ..domain.generator import generate_dataset
from ..domain.models import Dataset, FleetVector
from ..moo.fleets import FleetMapper, dedup_fleets
from ..moo.nsga2 import evolve
from ..ptma.catalog_io import dumps_catalog, parse_catalog
from ..ptma.enumeration import OptionCatalog, build_catalog
from ..safe.sampling import Scenario, sample_scenario, scale_frequencies
from ..safe.scenario_io import dumps_scenario, parse_scenario, usage_stats_frame
from ..safe.usage import UsageProfile, average_usage, usage_profile
from .artifacts import (
    CAPABILITY_FILE,
    CATALOG_FILE,
    DATASET_FILE,
    FLEETS_FILE,
    FRONTS_FILE,
    GROWTH_FILE,
    HISTOGRAM_FILE,
    SCENARIO_DIR,
    SCORES_FILE,
    USAGE_FILE,
    ArtifactWriter,
    scenario_file,
)


logger = structlog.get_logger(__name__)


@dataclass
class StageResult:
    """Execution record of one stage."""
    name: str
    artifacts: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    elapsed: Optional[float] = None


def platform_labels(dataset: Dataset) -> List[str]:
    return [f"P{p.id + 1}" for p in dataset.platforms]


def analysis_fractions(ladder: Sequence[float]) -> List[float]:
    """The budget ladder with the zero-budget rung in front."""
    ladder = [float(f) for f in ladder]
    return ladder if ladder and ladder[0] == 0.0 else [0.0] + ladder


def _require_seed(config: RunConfig) -> int:
    if config.seed is None:
        raise ConfigError("a master seed is required", field="seed")
    return config.seed


async def _map(fn: Callable, jobs: List[Any], workers: int) -> List[Any]:
    """Apply ``fn`` to every job, in a process pool when more than one worker is configured.

    Results come back in job order regardless of the worker count.
    """
    if workers <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(await asyncio.gather(*(loop.run_in_executor(pool, fn, job) for job in jobs)))


# Artifact loading


def load_dataset_artifact(writer: ArtifactWriter) -> Dataset:
    return parse_dataset(writer.read_text(DATASET_FILE))


def load_catalog_artifact(writer: ArtifactWriter, dataset: Dataset) -> OptionCatalog:
    cached_hash, catalog = parse_catalog(writer.read_text(CATALOG_FILE))
    if cached_hash != dataset_hash(dataset):
        raise ConfigError(f"{CATALOG_FILE} was built for another dataset; rerun enumerate", field="catalog")
    return catalog


def load_scenarios(writer: ArtifactWriter) -> List[Scenario]:
    names = writer.scenario_files()
    if not names:
        raise ArtifactMissingError(str(writer.path(SCENARIO_DIR)))
    scenarios = [parse_scenario(writer.read_text(name)) for name in names]
    return sorted(scenarios, key=lambda s: s.id)


def load_portfolio(writer: ArtifactWriter, dataset: Dataset) -> Tuple[FleetPortfolio, pd.DataFrame]:
    """Portfolio whose row order matches the ``fleet_id`` column of the fleets table."""
    frame = writer.read_frame(FLEETS_FILE).sort_values("fleet_id", kind="stable").reset_index(drop=True)
    labels = platform_labels(dataset)
    fleets: Dict[int, List[FleetVector]] = {}
    for row in frame.itertuples(index=False):
        values = row._asdict()
        fleets.setdefault(int(values["scenario_id"]), []).append(
            FleetVector.from_array(values[label] for label in labels)
        )
    return FleetPortfolio.from_fleets(fleets, dataset.platforms), frame


# Worker functions; module level so the process pool can pickle them.


def _simulate_job(job: Tuple[Dataset, str, SimulationConfig, int, int]) -> Scenario:
    dataset, data_hash, params, master, k = job
    scale = 1.0
    if params.experiment == ExperimentMode.SCALED:
        low, high = params.scale_range
        scale = float(derive_rng(master, "scale", k).uniform(low, high))
    seed = derive_seed(master, "scenario", k)
    return sample_scenario(
        scale_frequencies(dataset, scale),
        params.horizon_days,
        np.random.default_rng(seed),
        scenario_id=k,
        seed=seed,
        scale=scale,
        dataset_hash=data_hash,
    )


@dataclass
class ScenarioOptimum:
    """Outcome of optimizing one scenario."""
    scenario_id: int
    front: List[Dict[str, Any]]
    fleets: List[FleetVector]
    usage: UsageProfile


def _optimize_job(job: Tuple[Dataset, OptionCatalog, Scenario, OptimizerConfig, DurationMode, int]) -> ScenarioOptimum:
    dataset, catalog, scenario, params, duration_mode, master = job
    scenario_data = scale_frequencies(dataset, scenario.scale)
    rng = derive_rng(master, "evolve", scenario.id)
    population = evolve(scenario, catalog, scenario_data, params, rng)
    mapper = FleetMapper(scenario, dataset, duration_mode, params.fleet_mapping)

    members = {}
    for index in population.pareto_front():
        genome = tuple(int(g) for g in population.genomes[index])
        monetary, time_cost = population.objectives[index]
        members[genome] = (float(monetary), float(time_cost))
    ordered = sorted(members.items(), key=lambda item: (item[1][0], item[1][1], item[0]))
    fleet_of = {genome: mapper.fleet(catalog.matrix(genome)) for genome, _ in ordered}

    front = []
    order = np.lexsort((np.arange(population.size), population.objectives[:, 1], population.objectives[:, 0], population.ranks))
    for index in order:
        genome = tuple(int(g) for g in population.genomes[index])
        front.append({
            "scenario_id": scenario.id,
            "individual_id": int(index),
            "rank": int(population.ranks[index]),
            "monetary": float(population.objectives[index, 0]),
            "time": float(population.objectives[index, 1]),
            "genome": " ".join(str(g) for g in genome),
            "fleet": str(fleet_of[genome]) if genome in fleet_of else "",
        })
    fleets = [fleet_of[genome] for genome, _ in ordered]

    cheapest = catalog.matrix(ordered[0][0])
    usage = usage_profile(scenario, cheapest, dataset, duration_mode)
    return ScenarioOptimum(
        scenario_id=scenario.id,
        front=front,
        fleets=dedup_fleets(fleets, dataset.platforms),
        usage=usage,
    )


def _augmentation_job(job: Tuple[FleetPortfolio, np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    portfolio, block = job
    return portfolio.augmentation_costs(block), portfolio.argmin_additions(block)


# Stages


async def stage_gen_dataset(config: RunConfig, writer: ArtifactWriter) -> StageResult:
    master = _require_seed(config)
    seed = derive_seed(master, "dataset", 0)
    dataset = generate_dataset(config.generator, seed=seed)
    for violation in validate_dataset(dataset):
        logger.warning("Dataset violation", record=violation.record, field=violation.field, message=violation.message)
    writer.write_text(DATASET_FILE, dumps_dataset(dataset))
    return StageResult(
        name="gen-dataset",
        artifacts=[DATASET_FILE],
        details={"tasks": dataset.n_tasks, "platforms": dataset.n_platforms, "hash": dataset_hash(dataset)[:12]},
    )


async def stage_enumerate(config: RunConfig, writer: ArtifactWriter) -> StageResult:
    dataset = load_dataset_artifact(writer)
    catalog = build_catalog(dataset, workers=config.runtime.workers)
    writer.write_text(CATALOG_FILE, dumps_catalog(catalog, dataset_hash(dataset)))
    return StageResult(
        name="enumerate",
        artifacts=[CATALOG_FILE],
        details={"options": sum(catalog.option_counts), "max_options": max(catalog.option_counts, default=0)},
    )


async def stage_simulate(config: RunConfig, writer: ArtifactWriter) -> StageResult:
    master = _require_seed(config)
    dataset = load_dataset_artifact(writer)
    data_hash = dataset_hash(dataset)
    jobs = [
        (dataset, data_hash, config.simulation, master, k)
        for k in range(config.simulation.scenarios)
    ]
    scenarios = await _map(_simulate_job, jobs, config.runtime.workers)

    writer.clear_scenarios()
    artifacts = []
    for scenario in scenarios:
        name = scenario_file(scenario.id)
        writer.write_text(name, dumps_scenario(scenario))
        artifacts.append(name)
    instances = [len(s.instances) for s in scenarios]
    return StageResult(
        name="simulate",
        artifacts=artifacts,
        details={"scenarios": len(scenarios), "mean_instances": round(float(np.mean(instances)), 2)},
    )


async def stage_optimize(config: RunConfig, writer: ArtifactWriter) -> StageResult:
    master = _require_seed(config)
    dataset = load_dataset_artifact(writer)
    catalog = load_catalog_artifact(writer, dataset)
    scenarios = load_scenarios(writer)
    duration_mode = config.simulation.duration_mode

    jobs = [(dataset, catalog, s, config.optimizer, duration_mode, master) for s in scenarios]
    optima: List[ScenarioOptimum] = await _map(_optimize_job, jobs, config.runtime.workers)

    fronts = pd.DataFrame(
        [row for optimum in optima for row in optimum.front],
        columns=["scenario_id", "individual_id", "rank", "monetary", "time", "genome", "fleet"],
    )
    writer.write_frame(FRONTS_FILE, fronts)

    labels = platform_labels(dataset)
    rows = []
    for optimum in optima:
        for fleet in optimum.fleets:
            row = {"scenario_id": optimum.scenario_id, "fleet_id": len(rows), "cost": fleet_cost(fleet, dataset.platforms)}
            row.update(zip(labels, fleet.counts))
            rows.append(row)
    writer.write_frame(FLEETS_FILE, pd.DataFrame(rows, columns=["scenario_id", "fleet_id", "cost"] + labels))

    writer.write_frame(USAGE_FILE, usage_stats_frame(average_usage([o.usage for o in optima])))
    return StageResult(
        name="optimize",
        artifacts=[FRONTS_FILE, FLEETS_FILE, USAGE_FILE],
        details={"front_members": int((fronts["rank"] == 0).sum()), "fleets": len(rows)},
    )


async def stage_analyze(config: RunConfig, writer: ArtifactWriter) -> StageResult:
    dataset = load_dataset_artifact(writer)
    portfolio, frame = load_portfolio(writer, dataset)
    ladder = config.effective_ladder()
    fractions = analysis_fractions(ladder)

    chunk = 64
    jobs = [(portfolio, portfolio.matrix[i:i + chunk]) for i in range(0, portfolio.n_fleets, chunk)]
    blocks = await _map(_augmentation_job, jobs, config.runtime.workers)
    costs = np.vstack([c for c, _ in blocks])
    additions = np.concatenate([a for _, a in blocks])
    own_costs = portfolio.fleet_costs()
    scores = scores_from_costs(costs, own_costs, fractions)

    score_frame = pd.DataFrame({
        "fleet_id": frame["fleet_id"],
        "scenario_id": frame["scenario_id"],
        "fleet_cost": own_costs,
    })
    for j, fraction in enumerate(fractions):
        score_frame[f"score@{fraction:g}"] = scores[:, j]
    writer.write_frame(SCORES_FILE, score_frame)

    labels = np.full(costs.shape, ScenarioClass.RISK.value, dtype=object)
    for fraction in reversed(ladder):
        budget = fraction * own_costs
        reachable = costs <= (budget + 1e-9 * np.maximum(1.0, budget))[:, None]
        labels[reachable] = Classification(ScenarioClass.ADAPTABLE, fraction).label()
    labels[costs <= 0.0] = ScenarioClass.ROBUST.value

    n_fleets, n_scenarios = costs.shape
    report = pd.DataFrame({
        "fleet_id": np.repeat(frame["fleet_id"].to_numpy(), n_scenarios),
        "scenario_id": np.tile(np.asarray(portfolio.scenario_ids), n_fleets),
        "augmentation_cost": costs.reshape(-1),
        "additions": [" ".join(str(int(v)) for v in row) for row in additions.reshape(-1, portfolio.n_platforms)],
        "classification": labels.reshape(-1),
    })
    writer.write_frame(CAPABILITY_FILE, report)

    histogram = capability_histogram(portfolio, fractions, bins=config.analysis.histogram_bins, scores=scores)
    writer.write_frame(HISTOGRAM_FILE, histogram)

    return StageResult(
        name="analyze",
        artifacts=[SCORES_FILE, CAPABILITY_FILE, HISTOGRAM_FILE],
        details={f"mean@{f:g}": round(float(scores[:, j].mean()), 4) for j, f in enumerate(fractions)},
    )


def median_cost_fleet(frame: pd.DataFrame) -> int:
    """Fleet id of the median-cost fleet, ties broken by fleet id."""
    ordered = frame.sort_values(["cost", "fleet_id"], kind="stable")
    return int(ordered["fleet_id"].iloc[(len(ordered) - 1) // 2])


async def stage_growth(config: RunConfig, writer: ArtifactWriter) -> StageResult:
    dataset = load_dataset_artifact(writer)
    portfolio, frame = load_portfolio(writer, dataset)

    fleet_id = config.analysis.growth_fleet_id
    if fleet_id is None:
        fleet_id = median_cost_fleet(frame)
    if not 0 <= fleet_id < portfolio.n_fleets:
        raise ConfigError(f"no fleet with id {fleet_id}", field="analysis.growth_fleet_id")

    fleet = FleetVector.from_array(portfolio.matrix[fleet_id])
    ladder = config.analysis.growth_ladder
    root = growth_lattice(fleet, ladder, portfolio, dataset.platforms, max_nodes=config.analysis.growth_max_nodes)
    per_level = nodes_per_level(root)

    writer.write_yaml(GROWTH_FILE, {
        "fleet_id": fleet_id,
        "scenario_id": int(frame["scenario_id"].iloc[fleet_id]),
        "fleet": list(fleet.counts),
        "fleet_cost": round(fleet_cost(fleet, dataset.platforms), 6),
        "ladder": analysis_fractions(ladder),
        "nodes_per_level": per_level,
        "lattice": root.to_dict(),
    })
    return StageResult(
        name="growth",
        artifacts=[GROWTH_FILE],
        details={"fleet_id": fleet_id, "nodes_per_level": per_level},
    )


StageFn = Callable[[RunConfig, ArtifactWriter], Awaitable[StageResult]]

STAGES: Dict[str, StageFn] = {
    "gen-dataset": stage_gen_dataset,
    "enumerate": stage_enumerate,
    "simulate": stage_simulate,
    "optimize": stage_optimize,
    "analyze": stage_analyze,
    "growth": stage_growth,
}


def _scales(writer: ArtifactWriter) -> Dict[int, float]:
    scales = {}
    for name in writer.scenario_files():
        scenario = parse_scenario(writer.read_text(name))
        scales[scenario.id] = scenario.scale
    return scales


async def execute_stages(names: Sequence[str], config: RunConfig) -> List[StageResult]:
    """Run the named stages in order, refreshing the manifest after each one."""
    unknown = [n for n in names if n not in STAGES]
    if unknown:
        raise ValueError(f"unknown stage(s): {', '.join(unknown)}")

    writer = ArtifactWriter(config.runtime.output_dir)
    results = []
    for name in names:
        started = time.perf_counter()
        logger.info("Stage started", stage=name, output_dir=str(writer.root))
        try:
            result = await STAGES[name](config, writer)
        except Exception as e:
            logger.error("Stage failed", stage=name, error=str(e))
            raise
        result.elapsed = time.perf_counter() - started
        results.append(result)
        if config.seed is not None:
            writer.write_manifest(config, _scales(writer))
        logger.info("Stage completed", stage=name, elapsed=round(result.elapsed, 3), **result.details)
    return results


def run_stage(name: str, config: RunConfig) -> StageResult:
    return asyncio.run(execute_stages([name], config))[0]


def run_pipeline(config: RunConfig) -> List[StageResult]:
    """Generate, enumerate, simulate, optimize, analyze and grow in one go."""
    _require_seed(config)
    return asyncio.run(execute_stages(list(STAGES), config))
