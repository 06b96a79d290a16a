#!/usr/bin/env python3
"""
FleetFlow CLI

Command-line interface for the FleetFlow pipeline.
Each subcommand runs one stage against an output directory; `run` chains them.
"""

import asyncio
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import typer
from pydantic import ValidationError
from rich import print as rprint
from rich.console import Console
from rich.table import Table

from .core.config import ExperimentMode, RunConfig
from .core.errors import ConfigError, FleetFlowError, InfeasibleTaskError
from .core.log import configure_logging
from .pipeline.report import summarize
from .pipeline.stages import STAGES, StageResult, execute_stages

app = typer.Typer(
    name="fleetflow",
    help="FleetFlow fleet-mix robustness and adaptability analysis",
    rich_markup_mode="rich"
)

console = Console()

DEFAULT_CONFIG = "fleetflow.yaml"

Overrides = Dict[Tuple[str, Optional[str]], Any]


def _parse_ladder(raw: Optional[str], field: str) -> Optional[List[float]]:
    if raw is None:
        return None
    try:
        return [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated fractions, got {raw!r}", field=field)


def load_config(config_path: str, overrides: Overrides) -> RunConfig:
    """Config file (or defaults), then FLEETFLOW_* variables, then command-line flags."""
    config_file = Path(config_path)
    if config_file.exists():
        config = RunConfig.from_file(config_path)
        rprint(f"[green]📁 Loaded config from: {config_path}[/green]")
    elif config_path != DEFAULT_CONFIG:
        raise ConfigError(f"configuration file not found: {config_path}", field="config")
    else:
        config = RunConfig()

    config = RunConfig.from_env(config)
    data = config.model_dump()
    for (section, key), value in overrides.items():
        if value is None:
            continue
        if key is None:
            data[section] = value
        else:
            data[section][key] = value
    config = RunConfig(**data)

    configure_logging(config.runtime.log_level, config.runtime.json_logs)
    return config


def _field_name(error: ValidationError) -> str:
    first = error.errors()[0]
    return ".".join(str(part) for part in first["loc"]) or "config"


def _guarded(action: Callable[[], None]) -> None:
    """Run a command body, turning library errors into exit codes."""
    try:
        action()
    except ValidationError as e:
        first = e.errors()[0]
        rprint(f"[red]❌ Invalid configuration: {_field_name(e)}: {first['msg']}[/red]")
        raise typer.Exit(2)
    except InfeasibleTaskError as e:
        rprint(f"[red]❌ {e}[/red]")
        raise typer.Exit(InfeasibleTaskError.exit_code)
    except FleetFlowError as e:
        rprint(f"[red]❌ {e}[/red]")
        raise typer.Exit(e.exit_code)
    except FileNotFoundError as e:
        rprint(f"[red]❌ {e}[/red]")
        raise typer.Exit(1)


def _print_result(result: StageResult) -> None:
    rprint(f"[green]✅ {result.name} completed in {result.elapsed:.2f}s[/green]")
    for key, value in result.details.items():
        rprint(f"[dim]{key}: {value}[/dim]")
    if len(result.artifacts) <= 3:
        for artifact in result.artifacts:
            rprint(f"[blue]📝 {artifact}[/blue]")
    else:
        rprint(f"[blue]📝 {len(result.artifacts)} files under {Path(result.artifacts[0]).parent}/[/blue]")


def _run_stages(names: List[str], config: RunConfig) -> None:
    rprint(f"[blue]🚀 Output directory: {config.runtime.output_dir}[/blue]")
    for result in asyncio.run(execute_stages(names, config)):
        _print_result(result)


def _common(output_dir: Optional[str], seed: Optional[int], workers: Optional[int]) -> Overrides:
    return {
        ("seed", None): seed,
        ("runtime", "output_dir"): output_dir,
        ("runtime", "workers"): workers,
    }


ConfigOption = typer.Option(
    DEFAULT_CONFIG,
    "--config",
    "-c",
    help="Path to configuration file"
)
OutputOption = typer.Option(
    None,
    "--output-dir",
    "-o",
    help="Artifact directory (overrides config)"
)
SeedOption = typer.Option(
    None,
    "--seed",
    "-s",
    help="Master seed"
)
WorkersOption = typer.Option(
    None,
    "--workers",
    "-w",
    help="Worker processes"
)


@app.command()
def init(
    config_path: str = ConfigOption,
    force: bool = typer.Option(
        False,
        "--force",
        "-f",
        help="Overwrite existing configuration"
    )
):
    """Write a default FleetFlow configuration file."""

    config_file = Path(config_path)

    if config_file.exists() and not force:
        rprint(f"[red]Configuration file already exists: {config_path}[/red]")
        rprint("Use --force to overwrite")
        raise typer.Exit(1)

    config = RunConfig()
    config.save_to_file(config_path)
    rprint(f"[green]✅ Configuration created: {config_path}[/green]")
    rprint(f"[blue]📦 Tasks: {config.generator.n_tasks}, platforms: {config.generator.n_platforms}[/blue]")
    rprint(f"[blue]🎲 Scenarios: {config.simulation.scenarios} x {config.simulation.horizon_days} days[/blue]")
    rprint(f"[blue]🧬 NSGA-II: N={config.optimizer.population_size}, G={config.optimizer.generations}[/blue]")


@app.command("gen-dataset")
def gen_dataset(
    config_path: str = ConfigOption,
    output_dir: Optional[str] = OutputOption,
    seed: Optional[int] = SeedOption,
    tasks: Optional[int] = typer.Option(
        None,
        "--tasks",
        help="Number of tasks"
    ),
    platforms: Optional[int] = typer.Option(
        None,
        "--platforms",
        help="Number of platform types"
    )
):
    """Generate a random platform/task dataset."""

    def action():
        overrides = _common(output_dir, seed, None)
        overrides[("generator", "n_tasks")] = tasks
        overrides[("generator", "n_platforms")] = platforms
        _run_stages(["gen-dataset"], load_config(config_path, overrides))

    _guarded(action)


@app.command("enumerate")
def enumerate_options(
    config_path: str = ConfigOption,
    output_dir: Optional[str] = OutputOption,
    workers: Optional[int] = WorkersOption
):
    """Enumerate the minimal valid assignments of every task."""

    _guarded(lambda: _run_stages(["enumerate"], load_config(config_path, _common(output_dir, None, workers))))


@app.command()
def simulate(
    config_path: str = ConfigOption,
    output_dir: Optional[str] = OutputOption,
    seed: Optional[int] = SeedOption,
    workers: Optional[int] = WorkersOption,
    scenarios: Optional[int] = typer.Option(
        None,
        "--scenarios",
        "-y",
        help="Number of scenarios Y"
    ),
    horizon: Optional[int] = typer.Option(
        None,
        "--horizon",
        help="Scenario length T in days"
    ),
    mode: Optional[ExperimentMode] = typer.Option(
        None,
        "--mode",
        "-m",
        help="Experiment mode"
    )
):
    """Sample Y stochastic scenarios."""

    def action():
        overrides = _common(output_dir, seed, workers)
        overrides[("simulation", "scenarios")] = scenarios
        overrides[("simulation", "horizon_days")] = horizon
        overrides[("simulation", "experiment")] = mode
        _run_stages(["simulate"], load_config(config_path, overrides))

    _guarded(action)


@app.command()
def optimize(
    config_path: str = ConfigOption,
    output_dir: Optional[str] = OutputOption,
    seed: Optional[int] = SeedOption,
    workers: Optional[int] = WorkersOption,
    population: Optional[int] = typer.Option(
        None,
        "--population",
        "-n",
        help="Population size N"
    ),
    generations: Optional[int] = typer.Option(
        None,
        "--generations",
        "-g",
        help="Generations G"
    ),
    mutation_rate: Optional[float] = typer.Option(
        None,
        "--mutation-rate",
        help="Per-row mutation probability"
    )
):
    """Run NSGA-II on every scenario and map the fronts to fleets."""

    def action():
        overrides = _common(output_dir, seed, workers)
        overrides[("optimizer", "population_size")] = population
        overrides[("optimizer", "generations")] = generations
        overrides[("optimizer", "mutation_rate")] = mutation_rate
        _run_stages(["optimize"], load_config(config_path, overrides))

    _guarded(action)


@app.command()
def analyze(
    config_path: str = ConfigOption,
    output_dir: Optional[str] = OutputOption,
    workers: Optional[int] = WorkersOption,
    ladder: Optional[str] = typer.Option(
        None,
        "--ladder",
        "-l",
        help="Budget fractions, e.g. 0.01,0.02,0.03"
    ),
    bins: Optional[int] = typer.Option(
        None,
        "--bins",
        help="Histogram bins over [0, 1]"
    )
):
    """Score every fleet against every scenario."""

    def action():
        overrides = _common(output_dir, None, workers)
        overrides[("analysis", "budget_ladder")] = _parse_ladder(ladder, "analysis.budget_ladder")
        overrides[("analysis", "histogram_bins")] = bins
        _run_stages(["analyze"], load_config(config_path, overrides))

    _guarded(action)


@app.command()
def growth(
    config_path: str = ConfigOption,
    output_dir: Optional[str] = OutputOption,
    fleet_id: Optional[int] = typer.Option(
        None,
        "--fleet-id",
        help="Fleet to grow (default: median-cost fleet)"
    ),
    ladder: Optional[str] = typer.Option(
        None,
        "--ladder",
        "-l",
        help="Cumulative budget fractions, e.g. 0,0.01,0.02,0.03"
    ),
    max_nodes: Optional[int] = typer.Option(
        None,
        "--max-nodes",
        help="Stop expanding the lattice after this many nodes"
    )
):
    """Build the growth-option lattice of one fleet."""

    def action():
        overrides = _common(output_dir, None, None)
        overrides[("analysis", "growth_fleet_id")] = fleet_id
        overrides[("analysis", "growth_ladder")] = _parse_ladder(ladder, "analysis.growth_ladder")
        overrides[("analysis", "growth_max_nodes")] = max_nodes
        _run_stages(["growth"], load_config(config_path, overrides))

    _guarded(action)


@app.command()
def run(
    seed: int = typer.Option(
        ...,
        "--seed",
        "-s",
        help="Master seed (required)"
    ),
    config_path: str = ConfigOption,
    output_dir: Optional[str] = OutputOption,
    workers: Optional[int] = WorkersOption,
    tasks: Optional[int] = typer.Option(None, "--tasks", help="Number of tasks"),
    scenarios: Optional[int] = typer.Option(None, "--scenarios", "-y", help="Number of scenarios Y"),
    horizon: Optional[int] = typer.Option(None, "--horizon", help="Scenario length T in days"),
    population: Optional[int] = typer.Option(None, "--population", "-n", help="Population size N"),
    generations: Optional[int] = typer.Option(None, "--generations", "-g", help="Generations G"),
    mutation_rate: Optional[float] = typer.Option(None, "--mutation-rate", help="Per-row mutation probability"),
    mode: Optional[ExperimentMode] = typer.Option(None, "--mode", "-m", help="Experiment mode"),
    ladder: Optional[str] = typer.Option(None, "--ladder", "-l", help="Budget fractions, e.g. 0.01,0.02")
):
    """Run the whole pipeline: dataset to growth lattice."""

    def action():
        overrides = _common(output_dir, seed, workers)
        overrides.update({
            ("generator", "n_tasks"): tasks,
            ("simulation", "scenarios"): scenarios,
            ("simulation", "horizon_days"): horizon,
            ("simulation", "experiment"): mode,
            ("optimizer", "population_size"): population,
            ("optimizer", "generations"): generations,
            ("optimizer", "mutation_rate"): mutation_rate,
            ("analysis", "budget_ladder"): _parse_ladder(ladder, "analysis.budget_ladder"),
        })
        config = load_config(config_path, overrides)
        _run_stages(list(STAGES), config)
        rprint(f"[green]✅ Pipeline finished: {config.runtime.output_dir}/manifest.yaml[/green]")

    _guarded(action)


@app.command()
def report(
    output_dir: str = typer.Option(
        "fleetflow-output",
        "--output-dir",
        "-o",
        help="Artifact directory of a finished run"
    )
):
    """Summarize scores, classifications and growth options of a run."""

    def action():
        summary = summarize(output_dir)

        table = Table(title=f"Capability scores ({summary.n_fleets} fleets, {summary.n_scenarios} scenarios)")
        table.add_column("Budget", style="cyan")
        table.add_column("Mean", style="magenta")
        table.add_column("Min")
        table.add_column("Max")
        table.add_column("Share >= 0.9")
        for row in summary.scores.itertuples(index=False):
            table.add_row(
                f"{row.fraction:.0%}",
                f"{row.mean:.4f}",
                f"{row.min:.4f}",
                f"{row.max:.4f}",
                f"{row[4]:.4f}",
            )
        console.print(table)

        table = Table(title="Scenario classifications (all fleets)")
        table.add_column("Class", style="cyan")
        table.add_column("Count", style="magenta")
        for label, count in summary.classifications.items():
            table.add_row(label, str(count))
        console.print(table)

        if summary.growth is None:
            rprint("[yellow]⚠️ No growth lattice found[/yellow]")
            return
        growth_summary = summary.growth
        table = Table(title=f"Growth options of fleet {growth_summary.fleet_id} (cost {growth_summary.fleet_cost:.4f})")
        table.add_column("Level", style="cyan")
        table.add_column("Budget", style="cyan")
        table.add_column("Capability-adding", style="magenta")
        table.add_column("Plateau")
        for level, fraction in enumerate(growth_summary.ladder):
            table.add_row(
                str(level),
                f"{fraction:.0%}",
                str(growth_summary.nodes_per_level[level] if level < len(growth_summary.nodes_per_level) else 0),
                str(growth_summary.plateau_per_level[level]),
            )
        console.print(table)

    _guarded(action)


@app.command()
def version():
    """Show FleetFlow version information."""
    from . import __version__

    table = Table(title="FleetFlow Version Information")
    table.add_column("Component", style="cyan")
    table.add_column("Version", style="magenta")

    table.add_row("FleetFlow", __version__)
    for module_name in ("numpy", "pandas", "pydantic", "structlog"):
        try:
            module = __import__(module_name)
            table.add_row(module_name, module.__version__)
        except ImportError:
            table.add_row(module_name, "Not installed")

    console.print(table)


if __name__ == "__main__":
    app()
