"""
Optimization problem model and the benchmark suite.

A problem is a single-objective minimization over a box ``[lower, upper]``
with optional equality constraints ``h_j(x) = 0`` and inequality constraints
``g_k(x) <= 0``. Constraints are folded into the objective through a static
quadratic penalty (see :func:`penalized_evaluate`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exceptions import ConfigError, DimensionError

__all__ = [
    "SearchSpace",
    "ObjectiveProblem",
    "PenaltyConfig",
    "evaluate",
    "penalized_evaluate",
    "benchmark_suite",
    "get_problem",
    "problem_names",
    "PROBLEMS",
    "sphere",
    "rosenbrock",
    "rastrigin",
    "ackley",
    "griewank",
    "parse_problem_key",
    "fitness_function",
]

Objective = Callable[[np.ndarray], float]


@dataclass(frozen=True, eq=False)
class SearchSpace:
    """Feasible box ``lower <= x <= upper``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.array(self.lower, dtype=float).reshape(-1)
        upper = np.array(self.upper, dtype=float).reshape(-1)
        if lower.size == 0:
            raise ConfigError("search space must have at least one dimension")
        if lower.shape != upper.shape:
            raise ConfigError(
                f"lower and upper must have the same length, got {lower.size} and {upper.size}"
            )
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigError("bounds must be finite")
        if np.any(lower >= upper):
            raise ConfigError("lower must be strictly smaller than upper in every dimension")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def cube(cls, low: float, high: float, dim: int) -> "SearchSpace":
        if dim < 1:
            raise ConfigError(f"dim must be >= 1, got {dim}")
        return cls(np.full(dim, float(low)), np.full(dim, float(high)))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def clip(self, x) -> np.ndarray:
        return np.minimum(np.maximum(x, self.lower), self.upper)


@dataclass(frozen=True)
class PenaltyConfig:
    """Weights of the quadratic constraint penalty."""

    eq_weight: float = 1e6
    ineq_weight: float = 1e6

    def __post_init__(self):
        if self.eq_weight < 0 or self.ineq_weight < 0:
            raise ConfigError("penalty weights must be nonnegative")


@dataclass(frozen=True, eq=False)
class ObjectiveProblem:
    """
    Single-objective minimization problem.

    Parameters
    ----------
    name : str
        Registry identifier, e.g. ``"rastrigin"``.
    objective : callable
        Pure function mapping a 1-D float array of length ``space.dim`` to a
        scalar. Must not mutate its input.
    space : SearchSpace
        Feasible box.
    known_optimum : tuple (ndarray, float), optional
        Global minimizer and minimum value, when known.
    equality_constraints, inequality_constraints : sequence of callable
        ``h_j(x)`` (satisfied at 0) and ``g_k(x)`` (satisfied when <= 0).
    """

    name: str
    objective: Objective
    space: SearchSpace
    known_optimum: tuple[np.ndarray, float] | None = None
    equality_constraints: tuple[Objective, ...] = field(default_factory=tuple)
    inequality_constraints: tuple[Objective, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "equality_constraints", tuple(self.equality_constraints))
        object.__setattr__(self, "inequality_constraints", tuple(self.inequality_constraints))
        if self.known_optimum is not None:
            point, value = self.known_optimum
            point = np.array(point, dtype=float).reshape(-1)
            point.flags.writeable = False
            if point.size != self.space.dim:
                raise ConfigError("known optimum has the wrong dimension")
            if not self.space.contains(point):
                raise ConfigError(f"known optimum of {self.name} lies outside the search space")
            object.__setattr__(self, "known_optimum", (point, float(value)))

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def constrained(self) -> bool:
        return bool(self.equality_constraints or self.inequality_constraints)

    def __call__(self, x) -> float:
        return evaluate(self, x)


def _check_dim(problem: ObjectiveProblem, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != problem.space.dim:
        raise DimensionError(
            f"{problem.name} expects a vector of length {problem.space.dim}, got shape {x.shape}"
        )
    return x


def evaluate(problem: ObjectiveProblem, x) -> float:
    """Return ``f(x)``; non-finite objective values are reported as ``+inf``."""
    x = _check_dim(problem, x)
    value = float(problem.objective(x))
    if not math.isfinite(value):
        return math.inf
    return value


def penalized_evaluate(problem: ObjectiveProblem, x, penalty: PenaltyConfig) -> float:
    """
    Objective plus quadratic constraint penalty.

    ``f(x) + eq_weight * sum(h_j(x)**2) + ineq_weight * sum(max(0, g_k(x))**2)``.
    With no constraints this is exactly :func:`evaluate`.
    """
    value = evaluate(problem, x)
    if not problem.constrained:
        return value
    x = np.asarray(x, dtype=float)
    eq = math.fsum(float(h(x)) ** 2 for h in problem.equality_constraints)
    ineq = math.fsum(max(0.0, float(g(x))) ** 2 for g in problem.inequality_constraints)
    value = value + penalty.eq_weight * eq + penalty.ineq_weight * ineq
    if not math.isfinite(value):
        return math.inf
    return value


# Benchmark functions. Formulas are listed in docs/benchmarks.md.

def sphere(x):
    return float(np.dot(x, x))


def rosenbrock(x):
    head, tail = x[:-1], x[1:]
    return float((100.0 * (tail - head * head) ** 2 + (1.0 - head) ** 2).sum())


def rastrigin(x):
    return float(10.0 * x.size + (x * x - 10.0 * np.cos(2.0 * np.pi * x)).sum())


def ackley(x):
    n = x.size
    s1 = np.dot(x, x) / n
    s2 = np.cos(2.0 * np.pi * x).sum() / n
    return float(-20.0 * np.exp(-0.2 * np.sqrt(s1)) - np.exp(s2) + 20.0 + np.e)


def griewank(x):
    i = np.arange(1, x.size + 1)
    return float(1.0 + np.dot(x, x) / 4000.0 - np.cos(x / np.sqrt(i)).prod())


def _make(name, func, low, high, opt_coord):
    def build(dim: int) -> ObjectiveProblem:
        if not isinstance(dim, (int, np.integer)) or dim < 1:
            raise ConfigError(f"dim must be a positive integer, got {dim!r}")
        space = SearchSpace.cube(low, high, int(dim))
        return ObjectiveProblem(name, func, space, known_optimum=(np.full(dim, opt_coord), 0.0))

    build.__name__ = f"make_{name}"
    build.__doc__ = f"Build the {name} problem at dimension ``dim``."
    return build


# name -> constructor taking dim
PROBLEMS: dict[str, Callable[[int], ObjectiveProblem]] = {
    "sphere": _make("sphere", sphere, -5.12, 5.12, 0.0),
    "rosenbrock": _make("rosenbrock", rosenbrock, -5.0, 10.0, 1.0),
    "rastrigin": _make("rastrigin", rastrigin, -5.12, 5.12, 0.0),
    "ackley": _make("ackley", ackley, -32.768, 32.768, 0.0),
    "griewank": _make("griewank", griewank, -600.0, 600.0, 0.0),
}


def problem_names() -> list[str]:
    return list(PROBLEMS)


def get_problem(name: str, dim: int) -> ObjectiveProblem:
    """Look up a benchmark by name and instantiate it at ``dim``."""
    try:
        build = PROBLEMS[name]
    except KeyError:
        raise ConfigError(
            f"unknown problem {name!r}; available: {', '.join(PROBLEMS)}"
        ) from None
    return build(dim)


def benchmark_suite(dim: int) -> list[ObjectiveProblem]:
    """All registered benchmarks at dimension ``dim``."""
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise ConfigError(f"dim must be a positive integer, got {dim!r}")
    return [build(int(dim)) for build in PROBLEMS.values()]


def parse_problem_key(key: str) -> tuple[str, int]:
    """Split ``"rastrigin:5"`` into ``("rastrigin", 5)``."""
    name, sep, dim = key.partition(":")
    if not sep or not dim.strip().isdigit():
        raise ConfigError(f"problem must be given as name:dim, got {key!r}")
    return name.strip(), int(dim)


def fitness_function(problem: ObjectiveProblem, penalty: PenaltyConfig | None = None):
    """
    Callable used by the optimizers to score a point.

    Unconstrained problems are scored by :func:`evaluate`; constrained ones by
    :func:`penalized_evaluate` with ``penalty`` (default weights if None).
    Points produced by the optimizers already have the right shape, so the
    unconstrained path skips the dimension check.
    """
    if problem.constrained:
        penalty = penalty or PenaltyConfig()
        return lambda x: penalized_evaluate(problem, x, penalty)
    objective = problem.objective
    isfinite = math.isfinite

    def fitness(x):
        value = float(objective(x))
        return value if isfinite(value) else math.inf

    return fitness
