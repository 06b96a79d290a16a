"""Fleet-capability scores, scenario classification and score histograms."""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog

from ..domain.fleet import fleet_cost
from ..domain.models import FleetVector, Platform
from .portfolio import FleetPortfolio, augmentation_cost, within_budget


logger = structlog.get_logger(__name__)


class ScenarioClass(str, Enum):
    ROBUST = "robust"
    ADAPTABLE = "adaptable"
    RISK = "risk"


@dataclass(frozen=True)
class Classification:
    """How a fleet relates to one scenario."""
    kind: ScenarioClass
    fraction: Optional[float] = None

    def label(self) -> str:
        if self.kind == ScenarioClass.ADAPTABLE:
            return f"adaptable@{self.fraction:g}"
        return self.kind.value


def _check_fractions(fractions: Sequence[float]) -> List[float]:
    fractions = [float(f) for f in fractions]
    if any(f < 0 for f in fractions):
        raise ValueError("budget fractions must be non-negative")
    if any(b <= a for a, b in zip(fractions, fractions[1:])):
        raise ValueError("budget fractions must be strictly ascending")
    return fractions


def classify_cost(cost: float, own_cost: float, fractions: Sequence[float]) -> Classification:
    """Classification of one scenario from its augmentation cost; ``fractions`` ascending."""
    if cost <= 0.0:
        return Classification(ScenarioClass.ROBUST)
    for fraction in fractions:
        if within_budget(cost, fraction * own_cost):
            return Classification(ScenarioClass.ADAPTABLE, fraction)
    return Classification(ScenarioClass.RISK)


def scores_from_costs(costs: np.ndarray, fleet_costs: np.ndarray, fractions: Sequence[float]) -> np.ndarray:
    """Capability scores from an (n, Y) augmentation-cost matrix.

    Returns an (n, len(fractions)) matrix of the share of scenarios each
    fleet reaches within each budget fraction of its own cost.
    """
    costs = np.atleast_2d(np.asarray(costs, dtype=float))
    fleet_costs = np.asarray(fleet_costs, dtype=float).reshape(-1)
    scores = np.empty((costs.shape[0], len(fractions)), dtype=float)
    for j, fraction in enumerate(fractions):
        budget = fraction * fleet_costs
        slack = 1e-9 * np.maximum(1.0, np.abs(budget))
        scores[:, j] = (costs <= (budget + slack)[:, None]).mean(axis=1)
    return scores


def capability_score(X: FleetVector, portfolio: FleetPortfolio, budget_fraction: float) -> float:
    """Share of scenarios X accomplishes after additions costing at most ``budget_fraction`` of its cost."""
    if budget_fraction < 0:
        raise ValueError("budget fraction must be non-negative")
    costs = portfolio.augmentation_costs(X)
    own_cost = float(X.as_array() @ portfolio.costs)
    return float(scores_from_costs(costs, np.array([own_cost]), [budget_fraction])[0, 0])


@dataclass(frozen=True, eq=False)
class CapabilityReport:
    """Augmentation costs, scores and classifications of one fleet against a portfolio."""
    fleet: FleetVector
    fleet_cost: float
    scenario_ids: Tuple[int, ...]
    augmentation_costs: np.ndarray
    additions: Tuple[FleetVector, ...]
    fractions: Tuple[float, ...]
    scores: Tuple[float, ...]
    classifications: Tuple[Classification, ...]

    def score_at(self, fraction: float) -> float:
        return self.scores[self.fractions.index(fraction)]

    def tally(self) -> Dict[str, int]:
        """Scenario counts per classification label, robust and risk always present."""
        counts: Dict[str, int] = {ScenarioClass.ROBUST.value: 0}
        for fraction in self.fractions:
            counts[Classification(ScenarioClass.ADAPTABLE, fraction).label()] = 0
        counts[ScenarioClass.RISK.value] = 0
        for classification in self.classifications:
            counts[classification.label()] = counts.get(classification.label(), 0) + 1
        return counts

    def to_frame(self, fleet_id: int = 0) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "fleet_id": fleet_id,
                "scenario_id": list(self.scenario_ids),
                "augmentation_cost": self.augmentation_costs,
                "additions": [str(a) for a in self.additions],
                "classification": [c.label() for c in self.classifications],
            }
        )


def classify_scenarios(
    X: FleetVector,
    portfolio: FleetPortfolio,
    fractions: Sequence[float],
    platforms: Sequence[Platform],
) -> CapabilityReport:
    """Classify every scenario as robust, adaptable at the smallest covering rung, or risk."""
    fractions = _check_fractions(fractions)
    costs = portfolio.augmentation_costs(X)[0]
    own_cost = fleet_cost(X, platforms)

    classifications = []
    additions = []
    for position, scenario_id in enumerate(portfolio.scenario_ids):
        _, added = augmentation_cost(X, portfolio.scenario_fleets(scenario_id), platforms)
        additions.append(added)
        classifications.append(classify_cost(costs[position], own_cost, fractions))

    scores = scores_from_costs(costs[None, :], np.array([own_cost]), fractions)[0]
    return CapabilityReport(
        fleet=X,
        fleet_cost=own_cost,
        scenario_ids=portfolio.scenario_ids,
        augmentation_costs=costs,
        additions=tuple(additions),
        fractions=tuple(fractions),
        scores=tuple(float(s) for s in scores),
        classifications=tuple(classifications),
    )


def portfolio_scores(portfolio: FleetPortfolio, fractions: Sequence[float], chunk_size: int = 64) -> np.ndarray:
    """Scores of every portfolio fleet at every fraction, shape (n_fleets, len(fractions))."""
    fractions = _check_fractions(fractions)
    costs = portfolio.augmentation_costs(portfolio.matrix, chunk_size=chunk_size)
    return scores_from_costs(costs, portfolio.fleet_costs(), fractions)


def capability_histogram(
    portfolio: FleetPortfolio,
    fractions: Sequence[float],
    bins: int = 20,
    scores: Optional[np.ndarray] = None,
) -> pd.DataFrame:
    """Histogram of portfolio fleet scores per fraction over [0, 1].

    Columns: fraction, bin_low, bin_high, count. ``scores`` may be passed
    in when already computed by :func:`portfolio_scores`.
    """
    fractions = _check_fractions(fractions)
    if scores is None:
        scores = portfolio_scores(portfolio, fractions)

    rows = []
    for j, fraction in enumerate(fractions):
        counts, edges = np.histogram(scores[:, j], bins=bins, range=(0.0, 1.0))
        for count, low, high in zip(counts, edges[:-1], edges[1:]):
            rows.append({"fraction": fraction, "bin_low": low, "bin_high": high, "count": int(count)})

    logger.debug("Histogram computed", fleets=portfolio.n_fleets, fractions=len(fractions), bins=bins)
    return pd.DataFrame(rows, columns=["fraction", "bin_low", "bin_high", "count"])
