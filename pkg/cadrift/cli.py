"""
Command-line entry point.

    cadrift generate --preset paper-suite --out data/
    cadrift run --config experiment.json --seeds 1,2,3 --parallel 4
    cadrift inspect results/snapshots/NB-CURIE-Sine_A_F1_seed1_t10043_drift.jsonl
    cadrift rank results/results.csv
"""
import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd

from cadrift import __version__
from cadrift.config import ExperimentConfig, load_config
from cadrift.detectors import DETECTOR_NAMES, SignalMapping, build_detector
from cadrift.evaluation.harness import directory_snapshot_hook, run_scheme, scheme_id
from cadrift.evaluation.ranking import RankTable, rank_results
from cadrift.exceptions import CadriftError, ImproperlyConfigured, StreamFormatError
from cadrift.learners import LEARNER_NAMES, build_learner
from cadrift.snapshot import read_snapshot, render_snapshot
from cadrift.streams import StreamSpec, export_csv
from cadrift.utils.setter import parse_assignment

logger = logging.getLogger("cadrift")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUN = 2

RESULT_COLUMNS = [
    "scheme_id",
    "learner",
    "detector",
    "stream",
    "seed",
    "pacc",
    "tp",
    "fp",
    "fn",
    "tn",
    "precision",
    "recall",
    "mcc",
    "mu_d",
    "warnings",
    "ram_hours",
    "wall_seconds",
]


class RunJob(NamedTuple):
    """Every learner x detector run on one stream realization."""

    source: Any
    seed: int
    learners: List[Any]
    detectors: List[Any]
    prep_size: int
    signal_convention: str
    sample_every: int
    snapshot_every: Optional[int]
    snapshot_dir: Optional[Path]


class JobOutcome(NamedTuple):
    rows: List[Dict[str, Any]]
    segments: Dict[str, List[Optional[float]]]
    failures: List[Dict[str, Any]]


def execute_job(job: RunJob) -> JobOutcome:
    rows, segments, failures = [], {}, []
    label = job.source.label
    try:
        stream = job.source.load(job.seed)
    except Exception as exc:
        logger.error("Could not load stream %s (seed %d): %s", label, job.seed, exc)
        for learner_config in job.learners:
            for detector_config in job.detectors:
                failures.append(
                    {
                        "scheme_id": scheme_id(
                            LEARNER_NAMES[learner_config.kind],
                            DETECTOR_NAMES[detector_config.kind],
                            label,
                        ),
                        "seed": job.seed,
                        "error": repr(exc),
                    }
                )
        return JobOutcome(rows, segments, failures)

    for learner_config in job.learners:
        for detector_config in job.detectors:
            learner = build_learner(learner_config)
            detector = build_detector(
                detector_config, bins_per_dim=stream.bins, levels=stream.levels
            )
            current = scheme_id(learner.name, detector.name, stream.name)
            hook = None
            if job.snapshot_dir is not None and hasattr(detector, "grid"):
                hook = directory_snapshot_hook(job.snapshot_dir, f"{current}_seed{job.seed}")
            try:
                result = run_scheme(
                    learner,
                    detector,
                    stream,
                    prep_size=job.prep_size,
                    signal=SignalMapping(job.signal_convention),
                    seed=job.seed,
                    sample_every=job.sample_every,
                    snapshot_every=job.snapshot_every,
                    snapshot_hook=hook,
                )
            except Exception as exc:
                logger.exception("Run %s (seed %d) failed", current, job.seed)
                failures.append({"scheme_id": current, "seed": job.seed, "error": repr(exc)})
                continue
            row = result.row()
            rows.append(row)
            segments[f"{current}:{job.seed}"] = result.segment_accuracies()
            logger.info(
                "%s seed %d: pACC=%.4f MCC=%.3f muD=%.1f (%d detections)",
                current,
                job.seed,
                row["pacc"],
                row["mcc"],
                row["mu_d"],
                len(result.detections),
            )
    return JobOutcome(rows, segments, failures)


def plan_jobs(config: ExperimentConfig) -> List[RunJob]:
    snapshot_dir = None
    if config.snapshot_every is not None:
        snapshot_dir = config.output_dir / "snapshots"
    return [
        RunJob(
            source=source,
            seed=seed,
            learners=list(config.learners),
            detectors=list(config.detectors),
            prep_size=config.prep_size,
            signal_convention=config.signal_convention,
            sample_every=config.sample_every,
            snapshot_every=config.snapshot_every,
            snapshot_dir=snapshot_dir,
        )
        for source in config.all_streams()
        for seed in config.seeds
    ]


def execute_jobs(jobs: Sequence[RunJob], parallel: int = 1) -> JobOutcome:
    if parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            outcomes = list(pool.map(execute_job, jobs))
    else:
        outcomes = [execute_job(job) for job in jobs]
    rows, segments, failures = [], {}, []
    for outcome in outcomes:
        rows.extend(outcome.rows)
        segments.update(outcome.segments)
        failures.extend(outcome.failures)
    return JobOutcome(rows, segments, failures)


def results_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    frame = pd.DataFrame(rows, columns=RESULT_COLUMNS)
    return frame.sort_values(["scheme_id", "seed"], kind="stable").reset_index(drop=True)


def _mean_segments(values: List[List[Optional[float]]]) -> List[Optional[float]]:
    width = max((len(v) for v in values), default=0)
    means = []
    for index in range(width):
        column = [v[index] for v in values if index < len(v) and v[index] is not None]
        means.append(float(np.mean(column)) if column else None)
    return means


def summarize(
    frame: pd.DataFrame,
    segments: Dict[str, List[Optional[float]]],
    tables: Dict[str, RankTable],
    metrics: Sequence[str],
    n_failures: int = 0,
) -> Dict[str, Any]:
    """Mean scores per detector and per learner-detector pair, plus mean ranks."""
    columns = [m for m in metrics if m in frame.columns]
    summary: Dict[str, Any] = {
        "runs": int(len(frame)),
        "failures": n_failures,
        "detectors": {},
        "schemes": {},
        "mean_ranks": {m: t.mean_ranks for m, t in tables.items()},
        "critical_difference": {m: t.cd for m, t in tables.items()},
        "friedman_pvalue": {m: t.f_pvalue for m, t in tables.items()},
    }
    if frame.empty:
        return summary
    for name, group in frame.groupby("detector", sort=True):
        summary["detectors"][name] = {m: float(group[m].mean()) for m in columns}
    for (learner, detector), group in frame.groupby(["learner", "detector"], sort=True):
        pair = f"{learner}-{detector}"
        entry = {m: float(group[m].mean()) for m in columns}
        entry["segment_pacc"] = {
            stream: _mean_segments(
                [
                    segments[key]
                    for key in segments
                    if key.startswith(f"{pair}-{stream}:")
                ]
            )
            for stream in sorted(group["stream"].unique())
        }
        summary["schemes"][pair] = entry
    return summary


def write_rank_tables(tables: Dict[str, RankTable], output_dir: Path) -> None:
    if not tables:
        return
    text = "\n".join(table.render() for table in tables.values())
    (output_dir / "nemenyi.txt").write_text(text)
    frame = pd.concat([table.to_frame() for table in tables.values()], ignore_index=True)
    frame.to_csv(output_dir / "nemenyi.csv", index=False)


def _write_json(path: Path, data: Any) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def cmd_run(config: ExperimentConfig) -> int:
    output_dir = config.output_dir
    output_dir.mkdir(parents=True, exist_ok=True)
    jobs = plan_jobs(config)
    logger.info(
        "Running %d schemes on %d stream realizations (%d workers)",
        config.n_runs,
        len(jobs),
        config.parallel,
    )
    outcome = execute_jobs(jobs, config.parallel)
    frame = results_frame(outcome.rows)
    frame.to_csv(output_dir / "results.csv", index=False)

    tables = rank_results(frame, config.metrics, alpha=config.alpha) if not frame.empty else {}
    write_rank_tables(tables, output_dir)
    summary = summarize(frame, outcome.segments, tables, config.metrics, len(outcome.failures))
    _write_json(output_dir / "summary.json", summary)
    _write_json(
        output_dir / "manifest.json",
        {"version": __version__, "runs": config.n_runs, "config": config.model_dump(mode="json")},
    )
    if outcome.failures:
        _write_json(output_dir / "failures.json", outcome.failures)
        logger.error(
            "%d of %d runs failed, see %s",
            len(outcome.failures),
            config.n_runs,
            output_dir / "failures.json",
        )
        return EXIT_RUN
    return EXIT_OK


def stream_filename(name: str, seed: int, n_seeds: int) -> str:
    return f"{name}.csv" if n_seeds == 1 else f"{name}_seed{seed}.csv"


def cmd_generate(config: ExperimentConfig) -> int:
    output_dir = config.output_dir
    output_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for source in config.all_streams():
        if not isinstance(source, StreamSpec):
            logger.info("Skipping %s: file streams are not generated", source.label)
            continue
        for seed in config.seeds:
            stream = source.load(seed)
            path = export_csv(stream, output_dir / stream_filename(source.name, seed, len(config.seeds)))
            logger.info("Wrote %s (%d instances)", path, len(stream))
            entries.append(
                {
                    "file": path.name,
                    "name": source.name,
                    "seed": seed,
                    "rows": len(stream),
                    "spec": source.model_dump(mode="json"),
                }
            )
    _write_json(output_dir / "manifest.json", {"version": __version__, "streams": entries})
    return EXIT_OK


def cmd_inspect(path: Path) -> int:
    try:
        snapshot = read_snapshot(path)
    except OSError as exc:
        raise ImproperlyConfigured(f"Cannot read snapshot {path}: {exc.strerror or exc}") from exc
    sys.stdout.write(render_snapshot(snapshot))
    return EXIT_OK


def cmd_rank(results_path: Path, output_dir: Optional[Path], metrics: Sequence[str], alpha: float) -> int:
    try:
        frame = pd.read_csv(results_path)
    except (FileNotFoundError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise ImproperlyConfigured(f"Cannot read results from {results_path}: {exc}") from exc
    missing = {"detector", "stream", *metrics} - set(frame.columns)
    if missing:
        raise ImproperlyConfigured(f"{results_path} lacks columns {sorted(missing)}")
    tables = rank_results(frame, metrics, alpha=alpha)
    output_dir = output_dir or results_path.parent
    output_dir.mkdir(parents=True, exist_ok=True)
    write_rank_tables(tables, output_dir)
    for table in tables.values():
        sys.stdout.write(table.render())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cadrift", description="Concept drift detection experiments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    verbs = parser.add_subparsers(dest="verb", required=True)

    def experiment_options(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--config", type=Path, help="experiment JSON file")
        sub.add_argument("--preset", choices=["paper-suite"], help="built-in stream suite")
        sub.add_argument("--out", type=Path, help="output directory")
        sub.add_argument("--seeds", help="comma separated seeds, e.g. 1,2,3")
        sub.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="PATH=VALUE",
            help="override a config value by dotted path (repeatable)",
        )

    generate = verbs.add_parser("generate", help="write streams to CSV files")
    experiment_options(generate)

    run = verbs.add_parser("run", help="run every learner x detector x stream x seed")
    experiment_options(run)
    run.add_argument("--parallel", type=int, help="worker processes")
    run.add_argument("--snapshot-every", type=int, help="dump CURIE grids every K steps")

    inspect = verbs.add_parser("inspect", help="render a CURIE grid snapshot")
    inspect.add_argument("snapshot", type=Path)

    rank = verbs.add_parser("rank", help="Friedman/Nemenyi ranks from a results CSV")
    rank.add_argument("results", type=Path)
    rank.add_argument("--out", type=Path, help="where to write nemenyi tables (default: next to the CSV)")
    rank.add_argument("--metrics", nargs="+", default=["pacc", "mcc", "mu_d", "ram_hours"])
    rank.add_argument("--alpha", type=float, default=0.05)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    overrides = [parse_assignment(expression) for expression in args.overrides]
    if args.out is not None:
        overrides.append(("output_dir", str(args.out)))
    if args.seeds is not None:
        overrides.append(("seeds", args.seeds))
    if getattr(args, "parallel", None) is not None:
        overrides.append(("parallel", args.parallel))
    if getattr(args, "snapshot_every", None) is not None:
        overrides.append(("snapshot_every", args.snapshot_every))
    base = {"preset": args.preset} if args.preset else None
    return load_config(args.config, overrides, base=base)


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        if args.verb == "inspect":
            return cmd_inspect(args.snapshot)
        if args.verb == "rank":
            return cmd_rank(args.results, args.out, args.metrics, args.alpha)
        config = config_from_args(args)
        if args.verb == "generate":
            return cmd_generate(config)
        return cmd_run(config)
    except ImproperlyConfigured as exc:
        logger.error("%s", exc)
        if exc.detail:
            logger.error("%s", json.dumps(exc.detail, indent=2, default=str))
        return EXIT_CONFIG
    except (StreamFormatError, ValueError) as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG
    except OSError as exc:
        logger.error("Cannot write results: %s", exc)
        return EXIT_RUN
    except CadriftError as exc:
        logger.error("%s", exc)
        return EXIT_RUN
