"""
Comparator metaheuristics in their standard textbook forms.

All runners share the walk kernels and :class:`~optbench.walks.RandomSource`
with GEWA, return an :class:`~optbench.result.OptimizationResult` with a
monotone best-so-far history, and count objective evaluations exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError
from .problem import ObjectiveProblem, fitness_function
from .result import GenerationTrace, OptimizationResult
from .walks import RandomSource, StepConfig, local_walk, uniform_sample

__all__ = [
    "SaConfig",
    "PsoConfig",
    "HsConfig",
    "DeConfig",
    "sa_acceptance_probability",
    "sa_accept",
    "sa_run",
    "improvise",
    "hs_update",
    "de_trial",
    "de_generation",
    "pso_run",
    "hs_run",
    "de_run",
    "random_search_run",
]


def _positive_int(name, value, minimum=1):
    if int(value) != value or value < minimum:
        raise ConfigError(f"{name} must be an integer >= {minimum}, got {value}")


def _unit(name, value):
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"{name} must lie in [0, 1], got {value}")


def _coins(p: float, k: int, rng) -> np.ndarray:
    """k Bernoulli(p) draws; p of exactly 0 or 1 draws nothing from the stream."""
    if p == 0.0:
        return np.zeros(k, dtype=bool)
    if p == 1.0:
        return np.ones(k, dtype=bool)
    return rng.uniform(k) < p


def _mean_distance(positions: np.ndarray, point: np.ndarray) -> float:
    diff = positions - point
    return float(np.sqrt(np.einsum("ij,ij->i", diff, diff)).sum()) / diff.shape[0]


# -- simulated annealing ----------------------------------------------------

@dataclass(frozen=True)
class SaConfig:
    """
    Simulated annealing with geometric cooling.

    Moves are Gaussian random walks with per-dimension scale
    ``step_ratio * (upper - lower)``. The temperature is multiplied by
    ``cooling_rate`` after every ``moves_per_temp`` moves.
    """

    initial_temp: float = 10.0
    cooling_rate: float = 0.95
    moves_per_temp: int = 50
    step_ratio: float = 0.02
    max_evaluations: int = 20000

    def __post_init__(self):
        if not self.initial_temp > 0:
            raise ConfigError(f"initial_temp must be positive, got {self.initial_temp}")
        if not 0.0 < self.cooling_rate < 1.0:
            raise ConfigError(f"cooling_rate must lie in (0, 1), got {self.cooling_rate}")
        _positive_int("moves_per_temp", self.moves_per_temp)
        if not self.step_ratio > 0:
            raise ConfigError(f"step_ratio must be positive, got {self.step_ratio}")
        _positive_int("max_evaluations", self.max_evaluations)


def sa_acceptance_probability(delta: float, temperature: float) -> float:
    """Metropolis rule: 1 for improvements, ``exp(-delta / T)`` otherwise."""
    if delta <= 0.0:
        return 1.0
    if not temperature > 0.0 or math.isnan(delta):
        return 0.0
    return math.exp(-delta / temperature)


def sa_accept(delta: float, temperature: float, rng) -> bool:
    """Accept or reject a move; a uniform is drawn only for worsening moves."""
    if delta <= 0.0:
        return True
    return rng.uniform() < sa_acceptance_probability(delta, temperature)


def sa_run(config: SaConfig, problem: ObjectiveProblem, seed: int, rng=None) -> OptimizationResult:
    rng = rng if rng is not None else RandomSource(seed)
    space = problem.space
    fitness = fitness_function(problem)
    step = StepConfig.for_space(space, config.step_ratio)

    x = uniform_sample(space, rng)
    fx = fitness(x)
    best_x, best_f = x.copy(), fx
    temp = config.initial_temp
    level = 0
    history = [GenerationTrace(0, best_f, None, 1)]

    for k in range(1, config.max_evaluations):
        y = space.clip(local_walk(x, 1.0, step, rng))
        fy = fitness(y)
        if sa_accept(fy - fx, temp, rng):
            x, fx = y, fy
        if fy < best_f:
            best_x, best_f = y.copy(), fy
        if k % config.moves_per_temp == 0:
            temp *= config.cooling_rate
            level += 1
            history.append(GenerationTrace(level, best_f, None, k + 1))
    if history[-1].evaluations_so_far != config.max_evaluations:
        history.append(GenerationTrace(level + 1, best_f, None, config.max_evaluations))

    return OptimizationResult("sa", problem.name, best_x, best_f, config.max_evaluations, history, seed)


# -- particle swarm ---------------------------------------------------------

@dataclass(frozen=True)
class PsoConfig:
    """
    Global-best PSO.

    ``v <- inertia*v + cognitive*r1*(pbest - x) + social*r2*(gbest - x)``,
    velocities clamped to ``velocity_clamp_ratio * (upper - lower)``,
    positions clamped to the box. Velocities start at zero.
    """

    swarm_size: int = 20
    inertia: float = 0.7
    cognitive: float = 1.5
    social: float = 1.5
    velocity_clamp_ratio: float = 0.2
    max_generations: int = 999

    def __post_init__(self):
        _positive_int("swarm_size", self.swarm_size, 2)
        for name in ("inertia", "cognitive", "social"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be nonnegative")
        if not self.velocity_clamp_ratio > 0:
            raise ConfigError("velocity_clamp_ratio must be positive")
        _positive_int("max_generations", self.max_generations, 0)


def pso_run(config: PsoConfig, problem: ObjectiveProblem, seed: int, rng=None) -> OptimizationResult:
    rng = rng if rng is not None else RandomSource(seed)
    space = problem.space
    fitness = fitness_function(problem)
    size, dim = config.swarm_size, space.dim
    vmax = config.velocity_clamp_ratio * space.width

    x = uniform_sample(space, rng, size)
    v = np.zeros_like(x)
    f = np.array([fitness(p) for p in x])
    pbest, pbest_f = x.copy(), f.copy()
    g = int(pbest_f.argmin())
    gbest, gbest_f = pbest[g].copy(), float(pbest_f[g])
    evals = size
    history = [GenerationTrace(0, gbest_f, _mean_distance(x, gbest), evals)]

    for t in range(1, config.max_generations + 1):
        r1 = rng.uniform((size, dim))
        r2 = rng.uniform((size, dim))
        v = (config.inertia * v
             + config.cognitive * r1 * (pbest - x)
             + config.social * r2 * (gbest - x))
        v = np.clip(v, -vmax, vmax)
        x = space.clip(x + v)
        f = np.array([fitness(p) for p in x])
        evals += size
        improved = f < pbest_f
        pbest[improved] = x[improved]
        pbest_f[improved] = f[improved]
        g = int(pbest_f.argmin())
        if pbest_f[g] < gbest_f:
            gbest, gbest_f = pbest[g].copy(), float(pbest_f[g])
        history.append(GenerationTrace(t, gbest_f, _mean_distance(x, gbest), evals))

    return OptimizationResult("pso", problem.name, gbest, gbest_f, evals, history, seed)


# -- harmony search ---------------------------------------------------------

@dataclass(frozen=True)
class HsConfig:
    """
    Harmony search.

    Each coordinate is taken from a random memory entry with probability
    ``memory_rate`` (HMCR) and then pitch-adjusted with probability
    ``pitch_rate`` (PAR) by a Gaussian walk of scale
    ``bandwidth_ratio * (upper - lower)``; otherwise it is drawn uniformly.
    """

    memory_size: int = 20
    memory_rate: float = 0.9
    pitch_rate: float = 0.3
    bandwidth_ratio: float = 0.01
    max_improvisations: int = 19980

    def __post_init__(self):
        _positive_int("memory_size", self.memory_size)
        _unit("memory_rate", self.memory_rate)
        _unit("pitch_rate", self.pitch_rate)
        if not self.bandwidth_ratio > 0:
            raise ConfigError("bandwidth_ratio must be positive")
        _positive_int("max_improvisations", self.max_improvisations, 0)


def improvise(memory: np.ndarray, config: HsConfig, space, step: StepConfig, rng) -> np.ndarray:
    """Compose one new harmony from ``memory``."""
    size, dim = memory.shape
    from_memory = _coins(config.memory_rate, dim, rng)
    if not from_memory.any():
        return uniform_sample(space, rng)
    picks = np.minimum((rng.uniform(dim) * size).astype(int), size - 1)
    x = memory[picks, np.arange(dim)]
    adjust = from_memory & _coins(config.pitch_rate, dim, rng)
    if adjust.any():
        x = np.where(adjust, space.clip(local_walk(x, 1.0, step, rng)), x)
    if not from_memory.all():
        x = np.where(from_memory, x, uniform_sample(space, rng))
    return x


def hs_update(memory: np.ndarray, scores: np.ndarray, x: np.ndarray, fx: float) -> bool:
    """Replace the worst memory entry by ``x`` if ``x`` is strictly better."""
    w = int(scores.argmax())
    if fx < scores[w]:
        memory[w] = x
        scores[w] = fx
        return True
    return False


def hs_run(config: HsConfig, problem: ObjectiveProblem, seed: int, rng=None) -> OptimizationResult:
    rng = rng if rng is not None else RandomSource(seed)
    space = problem.space
    fitness = fitness_function(problem)
    step = StepConfig.for_space(space, config.bandwidth_ratio)

    memory = uniform_sample(space, rng, config.memory_size)
    scores = np.array([fitness(p) for p in memory])
    b = int(scores.argmin())
    evals = config.memory_size
    history = [GenerationTrace(0, float(scores[b]), _mean_distance(memory, memory[b]), evals)]

    for t in range(1, config.max_improvisations + 1):
        x = improvise(memory, config, space, step, rng)
        fx = fitness(x)
        evals += 1
        if hs_update(memory, scores, x, fx):
            b = int(scores.argmin())
        history.append(GenerationTrace(t, float(scores[b]), _mean_distance(memory, memory[b]), evals))

    return OptimizationResult("hs", problem.name, memory[b].copy(), float(scores[b]), evals, history, seed)


# -- differential evolution -------------------------------------------------

@dataclass(frozen=True)
class DeConfig:
    """DE/rand/1/bin with greedy one-to-one selection."""

    pop_size: int = 20
    differential_weight: float = 0.5
    crossover_rate: float = 0.9
    max_generations: int = 999

    def __post_init__(self):
        _positive_int("pop_size", self.pop_size, 4)
        if not 0.0 <= self.differential_weight <= 2.0:
            raise ConfigError(f"differential_weight must lie in [0, 2], got {self.differential_weight}")
        _unit("crossover_rate", self.crossover_rate)
        _positive_int("max_generations", self.max_generations, 0)


def _distinct_others(target: int, size: int, rng, k: int = 3) -> list[int]:
    pool = [i for i in range(size) if i != target]
    picked = []
    for u in rng.uniform(k):
        j = min(int(u * len(pool)), len(pool) - 1)
        picked.append(pool.pop(j))
    return picked


def de_trial(pop: np.ndarray, target: int, config: DeConfig, space, rng) -> np.ndarray:
    """Mutant ``a + F (b - c)`` crossed binomially with the target, then clipped."""
    size, dim = pop.shape
    a, b, c = _distinct_others(target, size, rng)
    mutant = pop[a] + config.differential_weight * (pop[b] - pop[c])
    cross = _coins(config.crossover_rate, dim, rng)
    jrand = min(int(rng.uniform() * dim), dim - 1)
    cross[jrand] = True
    return space.clip(np.where(cross, mutant, pop[target]))


def de_generation(pop: np.ndarray, scores: np.ndarray, config: DeConfig, space, fitness, rng) -> int:
    """
    One synchronous DE generation, in place.

    Every member gets a trial built from the current population; a trial
    replaces its target when it is no worse. Returns the evaluations used.
    """
    trials = np.array([de_trial(pop, i, config, space, rng) for i in range(pop.shape[0])])
    trial_scores = np.array([fitness(x) for x in trials])
    keep = trial_scores <= scores
    pop[keep] = trials[keep]
    scores[keep] = trial_scores[keep]
    return len(trials)


def de_run(config: DeConfig, problem: ObjectiveProblem, seed: int, rng=None) -> OptimizationResult:
    rng = rng if rng is not None else RandomSource(seed)
    space = problem.space
    fitness = fitness_function(problem)
    size = config.pop_size

    pop = uniform_sample(space, rng, size)
    scores = np.array([fitness(p) for p in pop])
    b = int(scores.argmin())
    evals = size
    history = [GenerationTrace(0, float(scores[b]), _mean_distance(pop, pop[b]), evals)]

    for t in range(1, config.max_generations + 1):
        evals += de_generation(pop, scores, config, space, fitness, rng)
        b = int(scores.argmin())
        history.append(GenerationTrace(t, float(scores[b]), _mean_distance(pop, pop[b]), evals))

    return OptimizationResult("de", problem.name, pop[b].copy(), float(scores[b]), evals, history, seed)


# -- pure random search -----------------------------------------------------

def random_search_run(budget: int, problem: ObjectiveProblem, seed: int, rng=None) -> OptimizationResult:
    """``budget`` independent uniform samples of the box; best-so-far kept."""
    _positive_int("budget", budget)
    rng = rng if rng is not None else RandomSource(seed)
    space = problem.space
    fitness = fitness_function(problem)

    best_x, best_f = None, math.inf
    history = []
    for k in range(1, budget + 1):
        x = uniform_sample(space, rng)
        fx = fitness(x)
        if best_x is None or fx < best_f:
            best_x, best_f = x, fx
        history.append(GenerationTrace(k - 1, best_f, None, k))

    return OptimizationResult("random", problem.name, best_x, best_f, budget, history, seed)
