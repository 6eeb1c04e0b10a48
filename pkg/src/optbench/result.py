"""Run results, per-generation traces and the population diversity measure."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionError

__all__ = ["GenerationTrace", "OptimizationResult", "diversity"]


@dataclass(frozen=True)
class GenerationTrace:
    """
    Snapshot after one generation.

    ``diversity`` is None for trajectory methods (simulated annealing, random
    search) that carry no population.
    """

    generation: int
    best_fitness: float
    diversity: float | None
    evaluations_so_far: int


@dataclass(eq=False)
class OptimizationResult:
    algorithm: str
    problem: str
    best_point: np.ndarray
    best_fitness: float
    evaluations: int
    history: list[GenerationTrace] = field(default_factory=list)
    seed: int | None = None

    @property
    def generations(self) -> int:
        return self.history[-1].generation if self.history else 0

    def best_trace(self) -> np.ndarray:
        return np.array([t.best_fitness for t in self.history])

    def same_as(self, other: "OptimizationResult") -> bool:
        """Bit-identical comparison (NaN-free values assumed)."""
        return (
            self.algorithm == other.algorithm
            and self.problem == other.problem
            and self.evaluations == other.evaluations
            and self.best_fitness == other.best_fitness
            and np.array_equal(self.best_point, other.best_point)
            and self.history == other.history
        )


def diversity(positions, g_best) -> float:
    """Mean Euclidean distance from each row of ``positions`` to ``g_best``."""
    positions = np.asarray(positions, dtype=float)
    g_best = np.asarray(g_best, dtype=float)
    if positions.ndim != 2 or positions.shape[0] == 0:
        raise DimensionError(f"positions must be a non-empty 2-D array, got shape {positions.shape}")
    if g_best.shape != (positions.shape[1],):
        raise DimensionError(
            f"g_best has shape {g_best.shape}, positions have {positions.shape[1]} columns"
        )
    diff = positions - g_best
    return float(np.mean(np.sqrt(np.einsum("ij,ij->i", diff, diff))))
