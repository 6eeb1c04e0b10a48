"""
Experiment harness: sweeps algorithms x problems x seeds under a common
evaluation budget, summarizes the final values and exports CSV/JSON.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import os
import statistics
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

from . import baselines, gewa
from .exceptions import ConfigError
from .problem import PROBLEMS, get_problem
from .result import OptimizationResult, diversity

__all__ = [
    "ALGORITHMS",
    "AlgorithmEntry",
    "ExperimentSpec",
    "RunRecord",
    "CellSummary",
    "SummaryStats",
    "ExportError",
    "derive_seed",
    "build_config",
    "diversity",
    "run_cell",
    "run_experiment",
    "summarize",
    "export_csv",
    "export_json",
    "load_csv",
    "load_json",
    "trace_path_for",
]

RECORD_COLUMNS = ["algorithm", "problem", "dim", "seed", "evaluations", "final_best", "wall_time_s"]
TRACE_COLUMNS = ["algorithm", "problem", "seed", "evaluations_so_far", "best_fitness", "diversity"]


class ExportError(OSError):
    """Writing or reading an output file failed."""


# -- algorithm registry -----------------------------------------------------

def _per_generation(budget: int, fixed: int, per_gen: int, label: str) -> int:
    if budget < fixed or (budget - fixed) % per_gen:
        raise ConfigError(
            f"budget {budget} is not representable as {fixed} + {per_gen} x generations ({label})"
        )
    return (budget - fixed) // per_gen


def _gewa_config(params, budget):
    probe = gewa.GewaConfig(**params, max_generations=0)
    gens = _per_generation(budget, probe.n, probe.replace_count,
                           f"n={probe.n}, replace_count={probe.replace_count}")
    return dataclasses.replace(probe, max_generations=gens)


def _pso_config(params, budget):
    probe = baselines.PsoConfig(**params, max_generations=0)
    gens = _per_generation(budget, probe.swarm_size, probe.swarm_size, f"swarm_size={probe.swarm_size}")
    return dataclasses.replace(probe, max_generations=gens)


def _de_config(params, budget):
    probe = baselines.DeConfig(**params, max_generations=0)
    gens = _per_generation(budget, probe.pop_size, probe.pop_size, f"pop_size={probe.pop_size}")
    return dataclasses.replace(probe, max_generations=gens)


def _hs_config(params, budget):
    probe = baselines.HsConfig(**params, max_improvisations=0)
    gens = _per_generation(budget, probe.memory_size, 1, f"memory_size={probe.memory_size}")
    return dataclasses.replace(probe, max_improvisations=gens)


def _sa_config(params, budget):
    return baselines.SaConfig(**params, max_evaluations=budget)


def _random_config(params, budget):
    if params:
        raise ConfigError(f"random search takes no parameters, got {sorted(params)}")
    if budget < 1:
        raise ConfigError(f"budget must be >= 1, got {budget}")
    return budget


@dataclass(frozen=True)
class AlgorithmEntry:
    name: str
    config_type: type | None
    budget_field: str | None
    make_config: Callable[[Mapping[str, Any], int], Any]
    runner: Callable[..., OptimizationResult]
    population_param: str | None = None

    def parameters(self) -> dict[str, Any]:
        """Tunable parameters and their defaults (budget field excluded)."""
        if self.config_type is None:
            return {}
        return {
            f.name: f.default
            for f in dataclasses.fields(self.config_type)
            if f.name != self.budget_field
        }


ALGORITHMS: dict[str, AlgorithmEntry] = {
    "gewa": AlgorithmEntry("gewa", gewa.GewaConfig, "max_generations", _gewa_config, gewa.run, "n"),
    "sa": AlgorithmEntry("sa", baselines.SaConfig, "max_evaluations", _sa_config, baselines.sa_run),
    "pso": AlgorithmEntry("pso", baselines.PsoConfig, "max_generations", _pso_config,
                          baselines.pso_run, "swarm_size"),
    "hs": AlgorithmEntry("hs", baselines.HsConfig, "max_improvisations", _hs_config,
                         baselines.hs_run, "memory_size"),
    "de": AlgorithmEntry("de", baselines.DeConfig, "max_generations", _de_config,
                         baselines.de_run, "pop_size"),
    "random": AlgorithmEntry("random", None, None, _random_config, baselines.random_search_run),
}


def build_config(algorithm: str, params: Mapping[str, Any], budget: int):
    """Algorithm config whose evaluation count is exactly ``budget``."""
    try:
        entry = ALGORITHMS[algorithm]
    except KeyError:
        raise ConfigError(
            f"unknown algorithm {algorithm!r}; available: {', '.join(ALGORITHMS)}"
        ) from None
    params = dict(params)
    if entry.budget_field in params:
        raise ConfigError(f"{entry.budget_field} is set from the evaluation budget, not as a parameter")
    if entry.config_type is not None:
        unknown = set(params) - set(entry.parameters())
        if unknown:
            raise ConfigError(f"unknown parameter(s) for {algorithm}: {', '.join(sorted(unknown))}")
    try:
        return entry.make_config(params, int(budget))
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {algorithm}: {exc}") from None


# -- experiment types -------------------------------------------------------

def derive_seed(base_seed: int, algorithm: str, problem: str, run_index: int) -> int:
    """Deterministic 64-bit child seed for one experiment cell."""
    key = f"{int(base_seed)}\x1f{algorithm}\x1f{problem}\x1f{int(run_index)}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


@dataclass
class ExperimentSpec:
    """
    A factorial experiment.

    ``algorithms`` holds ``(name, params)`` pairs and ``problems`` holds
    ``(name, dim)`` pairs. Seeds are either listed explicitly in ``seeds`` or
    derived per cell from ``base_seed`` for ``run_count`` runs.
    """

    algorithms: list[tuple[str, dict[str, Any]]]
    problems: list[tuple[str, int]]
    evaluation_budget: int = 20000
    seeds: list[int] | None = None
    base_seed: int = 0
    run_count: int = 25
    output_path: str | None = None
    trace_stride: int = 1

    def __post_init__(self):
        self.algorithms = [
            (a, {}) if isinstance(a, str) else (a[0], dict(a[1])) for a in self.algorithms
        ]
        self.problems = [(str(p), int(d)) for p, d in self.problems]
        if not self.algorithms:
            raise ConfigError("at least one algorithm is required")
        if not self.problems:
            raise ConfigError("at least one problem is required")
        if self.seeds is not None:
            self.seeds = [int(s) for s in self.seeds]
            if not self.seeds:
                raise ConfigError("seed list is empty")
        elif int(self.run_count) < 1:
            raise ConfigError(f"run_count must be >= 1, got {self.run_count}")
        if int(self.evaluation_budget) < 1:
            raise ConfigError("evaluation_budget must be positive")
        if int(self.trace_stride) < 1:
            raise ConfigError("trace_stride must be positive")

    @property
    def runs(self) -> int:
        return len(self.seeds) if self.seeds is not None else int(self.run_count)

    def seed_for(self, algorithm: str, problem: str, dim: int, run_index: int) -> int:
        if self.seeds is not None:
            return self.seeds[run_index]
        return derive_seed(self.base_seed, algorithm, f"{problem}:{dim}", run_index)


@dataclass
class RunRecord:
    algorithm: str
    problem: str
    dim: int
    seed: int
    final_best: float
    evaluations: int
    wall_time: float
    # (evaluations_so_far, best_fitness, diversity or None)
    trace: list[tuple[int, float, float | None]] = field(default_factory=list)

    def key(self):
        return (self.algorithm, self.problem, self.dim, self.seed)

    def same_outcome(self, other: "RunRecord") -> bool:
        """Equality ignoring wall time."""
        return dataclasses.replace(self, wall_time=0.0) == dataclasses.replace(other, wall_time=0.0)


@dataclass(frozen=True)
class CellSummary:
    algorithm: str
    problem: str
    dim: int
    runs: int
    min: float
    median: float
    mean: float
    std: float
    max: float
    success_rate: float | None


@dataclass(frozen=True)
class SummaryStats:
    cells: tuple[CellSummary, ...]
    tolerance: float = 1e-2

    def get(self, algorithm: str, problem: str, dim: int) -> CellSummary:
        for c in self.cells:
            if (c.algorithm, c.problem, c.dim) == (algorithm, problem, dim):
                return c
        raise KeyError((algorithm, problem, dim))

    def to_dict(self) -> dict:
        return {"tolerance": self.tolerance, "cells": [dataclasses.asdict(c) for c in self.cells]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "SummaryStats":
        return cls(tuple(CellSummary(**c) for c in data["cells"]), data["tolerance"])


# -- running ----------------------------------------------------------------

def _subsample(result: OptimizationResult, stride: int):
    history = result.history
    rows = [
        (t.evaluations_so_far, t.best_fitness, t.diversity)
        for t in history
        if t.generation % stride == 0
    ]
    last = history[-1]
    if last.generation % stride:
        rows.append((last.evaluations_so_far, last.best_fitness, last.diversity))
    return rows


def run_cell(algorithm: str, config, problem: str, dim: int, seed: int, trace_stride: int = 1) -> RunRecord:
    """Execute one run and package it as a record."""
    prob = get_problem(problem, dim)
    runner = ALGORITHMS[algorithm].runner
    start = time.perf_counter()
    result = runner(config, prob, seed)
    elapsed = time.perf_counter() - start
    return RunRecord(
        algorithm, problem, dim, seed, result.best_fitness, result.evaluations,
        elapsed, _subsample(result, trace_stride),
    )


def _run_cell_args(args):
    return run_cell(*args)


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> list[RunRecord]:
    """
    Run every (algorithm, problem, seed) cell of ``spec``.

    All names, parameters and budgets are validated before the first run.
    Records come back sorted by (algorithm, problem, dim, seed).
    """
    for name, dim in spec.problems:
        get_problem(name, dim)
    tasks = []
    for algo, params in spec.algorithms:
        for name, dim in spec.problems:
            try:
                config = build_config(algo, params, spec.evaluation_budget)
            except ConfigError as exc:
                raise ConfigError(f"cell {algo} x {name}:{dim}: {exc}") from None
            for r in range(spec.runs):
                seed = spec.seed_for(algo, name, dim, r)
                tasks.append((algo, config, name, dim, seed, spec.trace_stride))

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_cell_args, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        records = [_run_cell_args(t) for t in tasks]
    records.sort(key=RunRecord.key)
    return records


# -- summaries --------------------------------------------------------------

def _success_threshold(problem: str, dim: int, tolerance: float) -> float | None:
    if problem not in PROBLEMS:
        return None
    optimum = get_problem(problem, dim).known_optimum
    return None if optimum is None else optimum[1] + tolerance


def summarize(records: Sequence[RunRecord], tolerance: float = 1e-2) -> SummaryStats:
    """
    Order statistics of ``final_best`` per (algorithm, problem, dim).

    ``std`` is the population standard deviation. ``success_rate`` is the
    fraction of runs ending within ``tolerance`` of the known optimum, or
    None when the optimum is unknown.
    """
    if not records:
        raise ValueError("cannot summarize an empty record list")
    groups: dict[tuple[str, str, int], list[float]] = {}
    for r in records:
        groups.setdefault((r.algorithm, r.problem, r.dim), []).append(r.final_best)
    cells = []
    for (algo, problem, dim), finals in sorted(groups.items()):
        threshold = _success_threshold(problem, dim, tolerance)
        rate = None if threshold is None else sum(v <= threshold for v in finals) / len(finals)
        cells.append(CellSummary(
            algo, problem, dim, len(finals),
            min(finals), statistics.median(finals), statistics.fmean(finals),
            statistics.pstdev(finals) if len(finals) > 1 else 0.0,
            max(finals), rate,
        ))
    return SummaryStats(tuple(cells), tolerance)


# -- export / import --------------------------------------------------------

def trace_path_for(path) -> Path:
    """Sibling file holding the trace rows of a records CSV."""
    path = Path(path)
    return path.with_name(f"{path.stem}_traces{path.suffix or '.csv'}")


def _fmt(value) -> str:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def _atomic_write(targets: Sequence[tuple[Path, Callable]]):
    """Write several files; on any failure none of them is left behind."""
    staged, done = [], []
    try:
        for path, writer in targets:
            try:
                fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
            except OSError as exc:
                raise ExportError(f"cannot write {path}: {exc.strerror or exc}") from exc
            staged.append(tmp)
            try:
                with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
                    writer(fh)
            except OSError as exc:
                raise ExportError(f"cannot write {path}: {exc.strerror or exc}") from exc
        for tmp, (path, _) in zip(staged, targets):
            try:
                os.replace(tmp, path)
            except OSError as exc:
                raise ExportError(f"cannot write {path}: {exc.strerror or exc}") from exc
            done.append(path)
    except BaseException:
        for p in staged + done:
            try:
                os.unlink(p)
            except FileNotFoundError:
                pass
        raise


def export_csv(records: Sequence[RunRecord], path, trace_path=None) -> tuple[Path, Path]:
    """
    Write one row per run to ``path`` and the trace rows to a sibling file.

    Floats are written with ``repr`` so they parse back bit-exactly.
    """
    path = Path(path)
    trace_path = Path(trace_path) if trace_path else trace_path_for(path)

    def write_records(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_COLUMNS)
        for r in records:
            w.writerow([r.algorithm, r.problem, r.dim, r.seed, r.evaluations,
                        _fmt(r.final_best), _fmt(r.wall_time)])

    def write_traces(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for r in records:
            for evals, best, div in r.trace:
                w.writerow([r.algorithm, r.problem, r.seed, evals, _fmt(best), _fmt(div)])

    _atomic_write([(path, write_records), (trace_path, write_traces)])
    return path, trace_path


def _open_csv(path: Path):
    try:
        return open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ExportError(f"cannot read {path}: {exc.strerror or exc}") from exc


def load_csv(path, trace_path=None) -> list[RunRecord]:
    """Read records written by :func:`export_csv`; traces are attached when present."""
    path = Path(path)
    with _open_csv(path) as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RECORD_COLUMNS:
            raise ExportError(f"{path}: unexpected columns {reader.fieldnames}")
        records = [
            RunRecord(row["algorithm"], row["problem"], int(row["dim"]), int(row["seed"]),
                      float(row["final_best"]), int(row["evaluations"]), float(row["wall_time_s"]))
            for row in reader
        ]
    trace_path = Path(trace_path) if trace_path else trace_path_for(path)
    if trace_path.exists():
        by_key = {(r.algorithm, r.problem, r.seed): r for r in records}
        with _open_csv(trace_path) as fh:
            for row in csv.DictReader(fh):
                rec = by_key.get((row["algorithm"], row["problem"], int(row["seed"])))
                if rec is not None:
                    div = float(row["diversity"]) if row["diversity"] else None
                    rec.trace.append((int(row["evaluations_so_far"]), float(row["best_fitness"]), div))
    return records


def export_json(records: Sequence[RunRecord], summary: SummaryStats | None, path) -> Path:
    """Write ``{"records": [...], "summary": {...}}``."""
    path = Path(path)
    summary = summary if summary is not None else summarize(records)
    payload = {
        "records": [dataclasses.asdict(r) for r in records],
        "summary": summary.to_dict(),
    }
    _atomic_write([(path, lambda fh: json.dump(payload, fh, indent=1))])
    return path


def load_json(path) -> tuple[list[RunRecord], SummaryStats]:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ExportError(f"cannot read {path}: {exc.strerror or exc}") from exc
    records = []
    for r in data["records"]:
        r = dict(r)
        r["trace"] = [tuple(t) for t in r["trace"]]
        records.append(RunRecord(**r))
    return records, SummaryStats.from_dict(data["summary"])
