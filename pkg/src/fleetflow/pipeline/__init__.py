"""Seeded end-to-end pipeline: stages, artifacts and run summaries."""

from .artifacts import ArtifactWriter, seed_tree
from .report import GrowthSummary, RunSummary, summarize
from .stages import STAGES, StageResult, execute_stages, run_pipeline, run_stage

__all__ = [
    "ArtifactWriter",
    "GrowthSummary",
    "RunSummary",
    "STAGES",
    "StageResult",
    "execute_stages",
    "run_pipeline",
    "run_stage",
    "seed_tree",
    "summarize",
]
