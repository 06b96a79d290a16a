"""Genetic operators over genomes of per-task option indices."""

import numpy as np

from ..ptma.enumeration import OptionCatalog


def crossover(parent1: np.ndarray, parent2: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Uniform row-wise crossover: each task's option comes from either parent with probability 1/2."""
    parent1 = np.asarray(parent1)
    parent2 = np.asarray(parent2)
    take_first = rng.random(parent1.shape[0]) < 0.5
    return np.where(take_first, parent1, parent2)


def mutate(child: np.ndarray, catalog: OptionCatalog, rate: float, rng: np.random.Generator) -> np.ndarray:
    """Replace each row, with probability ``rate``, by a different option of the same task.

    Tasks with a single option are never changed.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"mutation rate must lie in [0, 1], got {rate}")
    child = np.array(child, copy=True)
    if rate == 0.0:
        return child

    n_options = np.asarray(catalog.option_counts, dtype=np.int64)
    flips = (rng.random(child.shape[0]) < rate) & (n_options > 1)
    if not flips.any():
        return child

    # Draw among the n - 1 other options, skipping the current one.
    alternatives = n_options[flips] - 1
    draws = rng.integers(0, alternatives)
    current = child[flips]
    child[flips] = np.where(draws >= current, draws + 1, draws)
    return child
