"""
Generalized Evolutionary Walk Algorithm.

A population of ``n`` walkers is sampled uniformly in the box. Every
generation the ``replace_count`` worst walkers are discarded and each is
replaced by a fresh proposal: with probability ``alpha`` a Gaussian walk
around the global best ``g*`` (clipped to the box), otherwise a uniform
sample of the box. The best walker is never discarded, so the best fitness
is non-increasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError
from .problem import ObjectiveProblem, SearchSpace, fitness_function
from .result import GenerationTrace, OptimizationResult
from .walks import RandomSource, StepConfig, best_walk, uniform_sample

__all__ = [
    "GewaConfig",
    "WalkerPopulation",
    "initialize",
    "propose",
    "step_generation",
    "run",
]


@dataclass(frozen=True)
class GewaConfig:
    """
    GEWA parameters.

    Parameters
    ----------
    n : int, default 20
        Number of walkers; 15 to 50 is the usual range.
    alpha : float, default 0.5
        Probability that a proposal is a local walk around the best rather
        than a uniform sample of the box.
    step_ratio : float, default 0.01
        Local step length as a fraction of each variable's range, so that
        ``d = step_ratio * (upper - lower)``. Typically 0.001 to 0.01.
    sigma : float, default 1.0
        Standard deviation of the Gaussian multiplier.
    replace_count : int, default 1
        Worst walkers replaced per generation, in ``[1, n - 1]``.
    max_generations : int, default 1000
    target_fitness : float, optional
        Stop as soon as the best fitness reaches this value.
    """

    n: int = 20
    alpha: float = 0.5
    step_ratio: float = 0.01
    sigma: float = 1.0
    replace_count: int = 1
    max_generations: int = 1000
    target_fitness: float | None = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ConfigError(f"n must be an integer >= 2, got {self.n}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not self.step_ratio > 0:
            raise ConfigError(f"step_ratio must be positive, got {self.step_ratio}")
        if not self.sigma > 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if int(self.replace_count) != self.replace_count or not 1 <= self.replace_count <= self.n - 1:
            raise ConfigError(
                f"replace_count must be an integer in [1, n - 1] = [1, {self.n - 1}], "
                f"got {self.replace_count}"
            )
        if int(self.max_generations) != self.max_generations or self.max_generations < 0:
            raise ConfigError(f"max_generations must be a nonnegative integer, got {self.max_generations}")

    def step_config(self, space: SearchSpace) -> StepConfig:
        return StepConfig.for_space(space, self.step_ratio, sigma=self.sigma)


@dataclass(eq=False)
class WalkerPopulation:
    """Walker positions and fitnesses plus the global best ``g*``."""

    positions: np.ndarray
    fitnesses: np.ndarray
    best_index: int
    best_point: np.ndarray
    best_fitness: float
    generation: int = 0
    evaluations: int = 0

    @classmethod
    def from_arrays(cls, positions, fitnesses, evaluations: int | None = None) -> "WalkerPopulation":
        positions = np.array(positions, dtype=float)
        fitnesses = np.array(fitnesses, dtype=float)
        if positions.ndim != 2 or fitnesses.shape != (positions.shape[0],):
            raise ConfigError("positions must be n x dim and fitnesses length n")
        best = int(np.argmin(fitnesses))
        return cls(
            positions,
            fitnesses,
            best,
            positions[best].copy(),
            float(fitnesses[best]),
            evaluations=len(fitnesses) if evaluations is None else evaluations,
        )

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    def diversity(self) -> float:
        diff = self.positions - self.best_point
        return float(np.sqrt(np.einsum("ij,ij->i", diff, diff)).sum()) / diff.shape[0]

    def trace(self) -> GenerationTrace:
        return GenerationTrace(self.generation, self.best_fitness, self.diversity(), self.evaluations)


def _check_dims(space: SearchSpace, problem: ObjectiveProblem):
    if space.dim != problem.space.dim:
        raise ConfigError(
            f"search space has dimension {space.dim}, problem {problem.name} has {problem.space.dim}"
        )


def initialize(space: SearchSpace, config: GewaConfig, problem: ObjectiveProblem, rng,
               fitness=None) -> WalkerPopulation:
    """Sample ``n`` walkers uniformly in ``space`` and evaluate them."""
    _check_dims(space, problem)
    fitness = fitness or fitness_function(problem)
    positions = uniform_sample(space, rng, config.n)
    fitnesses = np.array([fitness(x) for x in positions])
    return WalkerPopulation.from_arrays(positions, fitnesses)


def propose(pop: WalkerPopulation, config: GewaConfig, space: SearchSpace, rng,
            step: StepConfig | None = None) -> np.ndarray:
    """
    One replacement candidate.

    Draws ``r ~ Unif[0, 1)``; if ``r < alpha`` returns the clipped walk
    ``g* + eps * d``, otherwise a uniform sample of the box. When alpha is
    0 or 1 the branch is already decided and ``r`` is not drawn.
    """
    alpha = config.alpha
    if alpha == 0.0:
        local = False
    elif alpha == 1.0:
        local = True
    else:
        local = rng.uniform() < alpha
    if local:
        step = step or config.step_config(space)
        return space.clip(best_walk(pop.best_point, step, rng))
    return uniform_sample(space, rng)


def _worst_indices(fitnesses: np.ndarray, count: int, best_index: int) -> list[int]:
    # highest fitness first, lowest index first among ties
    if count == 1:
        w = int(fitnesses.argmax())
        if w != best_index:
            return [w]
    order = np.argsort(-fitnesses, kind="stable")
    return [int(i) for i in order if i != best_index][:count]


def step_generation(pop: WalkerPopulation, config: GewaConfig, problem: ObjectiveProblem,
                    space: SearchSpace, rng, step: StepConfig | None = None,
                    fitness=None) -> tuple[WalkerPopulation, GenerationTrace]:
    """
    Advance ``pop`` by one generation, in place.

    The ``replace_count`` worst walkers (never the best one) are replaced by
    independent :func:`propose` draws, all made around the same ``g*``; then
    the new points are evaluated and ``g*`` is refreshed.
    """
    fitness = fitness or fitness_function(problem)
    step = step or config.step_config(space)
    worst = _worst_indices(pop.fitnesses, config.replace_count, pop.best_index)
    proposals = [propose(pop, config, space, rng, step) for _ in worst]
    for i, x in zip(worst, proposals):
        pop.positions[i] = x
        pop.fitnesses[i] = fitness(x)
    pop.evaluations += len(worst)
    pop.generation += 1

    best = int(pop.fitnesses.argmin())
    if best != pop.best_index:
        pop.best_index = best
        pop.best_point = pop.positions[best].copy()
        pop.best_fitness = float(pop.fitnesses[best])
    return pop, pop.trace()


def _reached(pop: WalkerPopulation, target: float | None) -> bool:
    return target is not None and pop.best_fitness <= target


def run(config: GewaConfig, problem: ObjectiveProblem, seed: int, rng=None) -> OptimizationResult:
    """
    Full GEWA run.

    Stops after ``max_generations`` or once ``target_fitness`` is reached.
    ``rng`` overrides the stream built from ``seed`` (used to script draws).
    Total evaluations are ``n + replace_count * generations``.
    """
    rng = rng if rng is not None else RandomSource(seed)
    space = problem.space
    step = config.step_config(space)
    fitness = fitness_function(problem)

    pop = initialize(space, config, problem, rng, fitness)
    history = [pop.trace()]
    while pop.generation < config.max_generations and not _reached(pop, config.target_fitness):
        _, trace = step_generation(pop, config, problem, space, rng, step, fitness)
        history.append(trace)

    return OptimizationResult(
        algorithm="gewa",
        problem=problem.name,
        best_point=pop.best_point.copy(),
        best_fitness=pop.best_fitness,
        evaluations=pop.evaluations,
        history=history,
        seed=seed,
    )
