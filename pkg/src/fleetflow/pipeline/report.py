"""Human-readable summary of a finished pipeline run."""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd
import yaml

from .artifacts import CAPABILITY_FILE, GROWTH_FILE, SCORES_FILE, ArtifactWriter


@dataclass
class GrowthSummary:
    fleet_id: int
    fleet_cost: float
    ladder: List[float]
    nodes_per_level: List[int]
    plateau_per_level: List[int]


@dataclass
class RunSummary:
    n_fleets: int
    n_scenarios: int
    scores: pd.DataFrame
    classifications: Dict[str, int]
    growth: Optional[GrowthSummary]


def _plateaus(lattice: Dict[str, Any], levels: int) -> List[int]:
    """Affordable options without added capability, per level they would have entered."""
    totals = [0] * levels
    stack = [lattice]
    while stack:
        node = stack.pop()
        if node["level"] + 1 < levels:
            totals[node["level"] + 1] += int(node.get("plateau_count", 0))
        stack.extend(node.get("children", []))
    return totals


def _growth_summary(doc: Dict[str, Any]) -> GrowthSummary:
    ladder = [float(f) for f in doc["ladder"]]
    return GrowthSummary(
        fleet_id=int(doc["fleet_id"]),
        fleet_cost=float(doc["fleet_cost"]),
        ladder=ladder,
        nodes_per_level=[int(n) for n in doc["nodes_per_level"]],
        plateau_per_level=_plateaus(doc["lattice"], len(ladder)),
    )


def summarize(output_dir: Union[str, Path]) -> RunSummary:
    """Collect score, classification and growth summaries from an artifact directory."""
    writer = ArtifactWriter(output_dir, create=False)
    scores = writer.read_frame(SCORES_FILE)
    report = writer.read_frame(CAPABILITY_FILE)

    rows = []
    for column in [c for c in scores.columns if c.startswith("score@")]:
        values = scores[column]
        rows.append({
            "fraction": float(column.split("@", 1)[1]),
            "mean": float(values.mean()),
            "min": float(values.min()),
            "max": float(values.max()),
            "share_at_least_0.9": float((values >= 0.9).mean()),
        })

    counts = report["classification"].value_counts()
    # Robust first, adaptable rungs ascending, risk last.
    order = sorted(
        counts.index,
        key=lambda label: (label != "robust", label == "risk", float(label.split("@")[1]) if "@" in label else 0.0),
    )

    growth = None
    if writer.exists(GROWTH_FILE):
        growth = _growth_summary(yaml.safe_load(writer.read_text(GROWTH_FILE)))

    return RunSummary(
        n_fleets=len(scores),
        n_scenarios=int(report["scenario_id"].nunique()),
        scores=pd.DataFrame(rows, columns=["fraction", "mean", "min", "max", "share_at_least_0.9"]),
        classifications={label: int(counts[label]) for label in order},
        growth=growth,
    )
