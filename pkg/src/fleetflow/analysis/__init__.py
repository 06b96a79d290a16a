"""Cross-scenario robustness and adaptability analysis."""

from .capability import (
    CapabilityReport,
    Classification,
    ScenarioClass,
    capability_histogram,
    capability_score,
    classify_cost,
    classify_scenarios,
    portfolio_scores,
    scores_from_costs,
)
from .growth import GrowthNode, additions_within, enumerate_growth_options, growth_lattice, nodes_per_level
from .portfolio import FleetPortfolio, augmentation_cost, can_accomplish, within_budget

__all__ = [
    "CapabilityReport",
    "Classification",
    "FleetPortfolio",
    "GrowthNode",
    "ScenarioClass",
    "additions_within",
    "augmentation_cost",
    "can_accomplish",
    "capability_histogram",
    "capability_score",
    "classify_cost",
    "classify_scenarios",
    "enumerate_growth_options",
    "growth_lattice",
    "nodes_per_level",
    "portfolio_scores",
    "scores_from_costs",
    "within_budget",
]
