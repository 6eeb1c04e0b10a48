"""Seedable black-box optimization: GEWA, baseline metaheuristics and a benchmark harness."""

from .baselines import (
    DeConfig,
    HsConfig,
    PsoConfig,
    SaConfig,
    de_run,
    hs_run,
    pso_run,
    random_search_run,
    sa_run,
)
from .exceptions import ConfigError, DimensionError
from .gewa import GewaConfig, WalkerPopulation
from .gewa import run as gewa_run
from .harness import ExperimentSpec, RunRecord, run_experiment, summarize
from .problem import (
    ObjectiveProblem,
    PenaltyConfig,
    SearchSpace,
    benchmark_suite,
    evaluate,
    get_problem,
    penalized_evaluate,
)
from .result import GenerationTrace, OptimizationResult, diversity
from .walks import RandomSource, ScriptedRandom, StepConfig

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DimensionError",
    "DeConfig",
    "ExperimentSpec",
    "GenerationTrace",
    "GewaConfig",
    "HsConfig",
    "ObjectiveProblem",
    "OptimizationResult",
    "PenaltyConfig",
    "PsoConfig",
    "RandomSource",
    "RunRecord",
    "SaConfig",
    "ScriptedRandom",
    "SearchSpace",
    "StepConfig",
    "WalkerPopulation",
    "benchmark_suite",
    "de_run",
    "diversity",
    "evaluate",
    "get_problem",
    "gewa_run",
    "hs_run",
    "penalized_evaluate",
    "pso_run",
    "random_search_run",
    "run_experiment",
    "sa_run",
    "summarize",
]
