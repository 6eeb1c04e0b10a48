"""Command line interface: ``optbench run | summarize | list``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .exceptions import ConfigError
from .harness import (
    ALGORITHMS,
    ExperimentSpec,
    ExportError,
    SummaryStats,
    export_csv,
    export_json,
    load_csv,
    load_json,
    run_experiment,
    summarize,
)
from .problem import PROBLEMS, get_problem, parse_problem_key

log = logging.getLogger("optbench")

DEFAULTS = {
    "algorithms": ["gewa"],
    "problems": ["sphere:5"],
    "budget": 20000,
    "runs": 25,
    "seed": 42,
    "out": "results",
    "workers": 1,
    "trace_stride": 1,
    "tolerance": 1e-2,
    "params": {},
}


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _parse_param(text: str) -> tuple[str, str, object]:
    key, sep, value = text.partition("=")
    algo, dot, name = key.partition(".")
    if not sep or not dot or not algo or not name:
        raise ConfigError(f"--param expects ALGO.NAME=VALUE, got {text!r}")
    return algo.strip(), name.strip(), _parse_value(value.strip())


def _load_config_file(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ExportError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    unknown = set(data) - set(DEFAULTS) - {"alpha", "pop", "step_ratio"}
    if unknown:
        raise ConfigError(f"{path}: unknown keys {', '.join(sorted(unknown))}")
    return data


def resolve_settings(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then command line flags."""
    settings = {k: (dict(v) if isinstance(v, dict) else v) for k, v in DEFAULTS.items()}
    if args.config:
        settings.update(_load_config_file(args.config))
    flags = {
        "algorithms": args.algo,
        "problems": args.problem,
        "budget": args.budget,
        "runs": args.runs,
        "seed": args.seed,
        "out": args.out,
        "workers": args.workers,
        "trace_stride": args.trace_stride,
        "tolerance": args.tolerance,
        "alpha": args.alpha,
        "pop": args.pop,
        "step_ratio": args.step_ratio,
    }
    settings.update({k: v for k, v in flags.items() if v is not None})

    params = {a: dict(p) for a, p in settings.get("params", {}).items()}
    for text in args.param or []:
        algo, name, value = _parse_param(text)
        params.setdefault(algo, {})[name] = value
    if settings.get("alpha") is not None:
        params.setdefault("gewa", {})["alpha"] = settings["alpha"]
    if settings.get("step_ratio") is not None:
        params.setdefault("gewa", {})["step_ratio"] = settings["step_ratio"]
    if settings.get("pop") is not None:
        for name, entry in ALGORITHMS.items():
            if entry.population_param:
                params.setdefault(name, {})[entry.population_param] = settings["pop"]
    settings["params"] = params
    return settings


def build_spec(settings: dict) -> ExperimentSpec:
    algorithms = []
    for name in dict.fromkeys(settings["algorithms"]):
        if name not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {name!r}; available: {', '.join(ALGORITHMS)}")
        algorithms.append((name, settings["params"].get(name, {})))
    stray = set(settings["params"]) - set(ALGORITHMS)
    if stray:
        raise ConfigError(f"parameters given for unknown algorithm(s): {', '.join(sorted(stray))}")
    problems = []
    for key in dict.fromkeys(settings["problems"]):
        name, dim = parse_problem_key(key)
        get_problem(name, dim)
        problems.append((name, dim))
    return ExperimentSpec(
        algorithms=algorithms,
        problems=problems,
        evaluation_budget=int(settings["budget"]),
        base_seed=int(settings["seed"]),
        run_count=int(settings["runs"]),
        output_path=str(settings["out"]),
        trace_stride=int(settings["trace_stride"]),
    )


def format_summary(summary: SummaryStats) -> str:
    header = f"{'algorithm':<8} {'problem':<12} {'dim':>4} {'runs':>5} {'min':>12} {'median':>12} {'mean':>12} {'std':>12} {'success':>8}"
    lines = [header, "-" * len(header)]
    for c in summary.cells:
        rate = "-" if c.success_rate is None else f"{c.success_rate:.2f}"
        lines.append(
            f"{c.algorithm:<8} {c.problem:<12} {c.dim:>4} {c.runs:>5} "
            f"{c.min:>12.4e} {c.median:>12.4e} {c.mean:>12.4e} {c.std:>12.4e} {rate:>8}"
        )
    return "\n".join(lines)


def cmd_run(args) -> int:
    settings = resolve_settings(args)
    spec = build_spec(settings)
    out = Path(spec.output_path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ExportError(f"cannot create {out}: {exc.strerror or exc}") from exc
    cells = len(spec.algorithms) * len(spec.problems) * spec.runs
    log.info("running %d cells with %d worker(s)", cells, settings["workers"])
    records = run_experiment(spec, workers=int(settings["workers"]))
    summary = summarize(records, tolerance=float(settings["tolerance"]))
    export_csv(records, out / "records.csv")
    export_json(records, summary, out / "results.json")
    print(format_summary(summary))
    print(f"\nwrote {out / 'records.csv'}, {out / 'records_traces.csv'}, {out / 'results.json'}")
    return 0


def cmd_summarize(args) -> int:
    path = Path(args.path)
    if path.suffix == ".json":
        records, _ = load_json(path)
    else:
        records = load_csv(path)
    if not records:
        raise ConfigError(f"{path} contains no records")
    print(format_summary(summarize(records, tolerance=args.tolerance)))
    return 0


def cmd_list(args) -> int:
    print("algorithms:")
    for name, entry in ALGORITHMS.items():
        params = ", ".join(f"{k}={v}" for k, v in entry.parameters().items()) or "(budget only)"
        print(f"  {name:<7} {params}")
    print("problems:")
    for name in PROBLEMS:
        space = get_problem(name, 1).space
        print(f"  {name:<11} [{space.lower[0]:g}, {space.upper[0]:g}]^dim")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="optbench", description="Seedable black-box optimization benchmarks.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment")
    run.add_argument("--config", help="JSON file with experiment settings (flags override it)")
    run.add_argument("--algo", action="append", help=f"algorithm, repeatable ({', '.join(ALGORITHMS)})")
    run.add_argument("--problem", action="append", help="problem as name:dim, repeatable")
    run.add_argument("--budget", type=int, help="objective evaluations per run (default 20000)")
    run.add_argument("--runs", type=int, help="runs per cell (default 25)")
    run.add_argument("--seed", type=int, help="base seed (default 42)")
    run.add_argument("--alpha", type=float, help="GEWA local-search probability")
    run.add_argument("--pop", type=int, help="population size for population-based algorithms")
    run.add_argument("--step-ratio", type=float, help="GEWA step length relative to variable range")
    run.add_argument("--param", action="append", metavar="ALGO.NAME=VALUE", help="any algorithm parameter")
    run.add_argument("--out", help="output directory (default results/)")
    run.add_argument("--workers", type=int, help="worker processes (default 1)")
    run.add_argument("--trace-stride", type=int, help="record every k-th generation (default 1)")
    run.add_argument("--tolerance", type=float, help="success tolerance above the known optimum")
    run.set_defaults(func=cmd_run)

    summ = sub.add_parser("summarize", help="summarize a records.csv or results.json file")
    summ.add_argument("path")
    summ.add_argument("--tolerance", type=float, default=1e-2)
    summ.set_defaults(func=cmd_summarize)

    lst = sub.add_parser("list", help="list registered algorithms and problems")
    lst.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"optbench: configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"optbench: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
