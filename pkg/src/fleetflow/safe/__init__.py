"""Stochastic Fleet Estimation: scenario sampling and platform usage."""

from .sampling import (
    Scenario,
    TaskInstance,
    sample_scenario,
    sample_triangular,
    scale_frequencies,
    stochastic_round,
)
from .scenario_io import dumps_scenario, load_scenario, parse_scenario, save_scenario, usage_stats_frame
from .usage import (
    UsageProfile,
    UsageStats,
    average_usage,
    instance_tensor,
    realized_durations,
    scenario_timeline_length,
    simulate_usage,
    timeline_length,
    usage_profile,
)

__all__ = [
    "Scenario",
    "TaskInstance",
    "UsageProfile",
    "UsageStats",
    "average_usage",
    "dumps_scenario",
    "instance_tensor",
    "load_scenario",
    "parse_scenario",
    "realized_durations",
    "sample_scenario",
    "sample_triangular",
    "save_scenario",
    "scenario_timeline_length",
    "scale_frequencies",
    "simulate_usage",
    "stochastic_round",
    "timeline_length",
    "usage_profile",
    "usage_stats_frame",
]
