"""Scenario files and usage-statistics export."""

from pathlib import Path
from typing import Union

import pandas as pd
import yaml

from .sampling import Scenario, TaskInstance
from .usage import UsageStats


SCENARIO_SCHEMA_VERSION = 1


def dumps_scenario(scenario: Scenario) -> str:
    doc = {
        "schema_version": SCENARIO_SCHEMA_VERSION,
        "scenario_id": scenario.id,
        "dataset_hash": scenario.dataset_hash,
        "horizon": scenario.horizon,
        "seed": scenario.seed,
        "scale": float(scenario.scale),
        "instances": [[i.task_id, i.start, float(i.duration)] for i in scenario.instances],
    }
    return yaml.safe_dump(doc, default_flow_style=None, sort_keys=False, width=4096)


def parse_scenario(text: str) -> Scenario:
    doc = yaml.safe_load(text)
    return Scenario(
        id=int(doc["scenario_id"]),
        instances=tuple(
            TaskInstance(task_id=int(task_id), start=int(start), duration=float(duration))
            for task_id, start, duration in doc["instances"] or []
        ),
        horizon=int(doc["horizon"]),
        seed=doc.get("seed"),
        scale=float(doc.get("scale", 1.0)),
        dataset_hash=doc.get("dataset_hash"),
    )


def save_scenario(scenario: Scenario, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_scenario(scenario), encoding="utf-8")


def load_scenario(path: Union[str, Path]) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def usage_stats_frame(stats: UsageStats) -> pd.DataFrame:
    """Long-form table with one row per (platform, day)."""
    n_platforms, n_days = stats.mean.shape
    return pd.DataFrame({
        "platform": [nu for nu in range(n_platforms) for _ in range(n_days)],
        "day": [t for _ in range(n_platforms) for t in range(n_days)],
        "mean": stats.mean.reshape(-1),
        "std": stats.std.reshape(-1),
    })
