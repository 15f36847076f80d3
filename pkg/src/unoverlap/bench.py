"""Benchmark harness: runs (graph x algorithm) sweeps, aggregates results,
and computes metric correlations.

Runs execute in a process pool keyed by (graph, algorithm); records are
re-sorted by (graph_id, algorithm) afterwards so parallelism never affects
output content, only the time column. Adjustment wall time covers the
adjustment call alone; generation, layout, and metric computation are
excluded. Per-run failures are captured on the record instead of aborting
the sweep.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algorithms import AdjustParams, CLI_ALGORITHM_NAMES, adjust
from .catalog import METRIC_NAMES, SELECTED_METRICS
from .corpus import CorpusSpec, generate, initial_layout
from .geometry import count_overlaps
from .metrics import MetricReport, compute_metrics
from .model import CSV_HEADER, AdjustmentPair, Embedding, SizedGraph


@dataclass(frozen=True)
class BenchRecord:
    """One (graph x algorithm) run: identity, timing, and metric values.

    ``error`` is empty for successful runs; failed runs carry no metrics
    and are reported separately from the records CSV.
    """

    graph_id: str
    generator: str
    n: int
    m: int
    algorithm: str
    seed: int
    time_ms: float
    fallback: bool
    metrics: MetricReport | None
    error: str = ""


@dataclass(frozen=True)
class GroupStats:
    """Quartiles and mean of one metric within one group; undefined metric
    values are excluded from the statistics but counted."""

    q1: float | None
    median: float | None
    q3: float | None
    mean: float | None
    undefined_count: int


@dataclass(frozen=True)
class AggregateTable:
    group_by: tuple[str, ...]
    columns: tuple[str, ...]
    rows: dict[tuple, dict[str, GroupStats]] = field(default_factory=dict)


@dataclass(frozen=True)
class RunSettings:
    """Knobs shared by every run of a sweep."""

    algorithms: tuple[str, ...] = CLI_ALGORITHM_NAMES
    parallelism: int = 1
    layout_iterations: int = 300
    padding: float = 0.0
    max_outer_iterations: int = 1000
    knn_k: int | None = None

    def __post_init__(self):
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        if self.parallelism < 1:
            raise ValueError("parallelism must be positive")


def count_runs(spec: CorpusSpec, settings: RunSettings) -> tuple[int, int]:
    """(graph count, run count) for a corpus sweep, without executing."""
    graphs = spec.graph_count
    return graphs, graphs * len(settings.algorithms)


def _prepare_job(args) -> tuple[SizedGraph, Embedding, str, int]:
    model, n, seed, size_rule, iterations = args
    graph = generate(model, n, seed, size_rule=size_rule)
    embedding = initial_layout(graph, seed, iterations=iterations)
    return graph, embedding, model, seed


def _run_job(args) -> BenchRecord:
    graph, embedding, generator, seed, algorithm, settings = args
    base = dict(
        graph_id=graph.graph_id,
        generator=generator,
        n=graph.n,
        m=graph.m,
        algorithm=algorithm,
        seed=seed,
    )
    try:
        params = AdjustParams(
            algorithm=algorithm,
            seed=seed,
            padding=settings.padding,
            max_outer_iterations=settings.max_outer_iterations,
        )
        outcome = adjust(graph, embedding, params)
        residue = count_overlaps(graph, outcome.adjusted)
        if residue:
            return BenchRecord(
                **base, time_ms=outcome.wall_time * 1000.0, fallback=outcome.fallback_used,
                metrics=None, error=f"{residue} overlaps left after adjustment",
            )
        report = compute_metrics(
            AdjustmentPair(graph, embedding, outcome.adjusted), k=settings.knn_k
        )
        return BenchRecord(
            **base,
            time_ms=outcome.wall_time * 1000.0,
            fallback=outcome.fallback_used,
            metrics=report,
        )
    except Exception as exc:  # per-run failures must not abort the sweep
        return BenchRecord(**base, time_ms=0.0, fallback=False, metrics=None, error=str(exc))


def _map_jobs(fn, jobs, parallelism: int):
    if parallelism <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (parallelism * 4))))


def run_benchmark(
    spec: CorpusSpec | None = None,
    inputs: list[tuple[SizedGraph, Embedding, str, int]] | None = None,
    settings: RunSettings = RunSettings(),
) -> list[BenchRecord]:
    """Execute a full sweep over a corpus spec and/or imported inputs.

    ``inputs`` entries are (graph, embedding, generator label, seed).
    Returns one record per (graph x algorithm), sorted by (graph_id,
    algorithm) regardless of parallelism.
    """
    prepared: list[tuple[SizedGraph, Embedding, str, int]] = []
    if spec is not None:
        jobs = [
            (model, n, seed, spec.node_size_rule, settings.layout_iterations)
            for model, n, seed in spec.jobs()
        ]
        prepared.extend(_map_jobs(_prepare_job, jobs, settings.parallelism))
    if inputs:
        prepared.extend(inputs)
    if not prepared:
        raise ValueError("nothing to run: no corpus spec and no inputs")

    run_jobs = [
        (graph, embedding, generator, seed, algorithm, settings)
        for graph, embedding, generator, seed in prepared
        for algorithm in settings.algorithms
    ]
    records = _map_jobs(_run_job, run_jobs, settings.parallelism)
    records.sort(key=lambda r: (r.graph_id, r.algorithm))
    return records


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------

AGGREGATE_COLUMNS: tuple[str, ...] = ("time_ms",) + METRIC_NAMES


def _quartiles(values: list[float]) -> tuple[float, float, float, float]:
    arr = np.array(values, dtype=float)
    q1, med, q3 = np.quantile(arr, [0.25, 0.5, 0.75])  # linear interpolation
    return float(q1), float(med), float(q3), float(np.mean(arr))


def aggregate(records: list[BenchRecord], group_by: tuple[str, ...] = ("algorithm",)) -> AggregateTable:
    """Quartiles and means per group for every metric plus the run time.

    ``group_by`` may contain "algorithm" and/or "n". Failed runs are
    skipped; undefined metric values are excluded from the statistics and
    counted per group.
    """
    for key in group_by:
        if key not in ("algorithm", "n"):
            raise ValueError(f"unsupported group key {key!r}")
    usable = [r for r in records if r.metrics is not None]
    if not usable:
        raise ValueError("no successful records to aggregate")

    groups: dict[tuple, list[BenchRecord]] = {}
    for rec in usable:
        key = tuple(getattr(rec, k) for k in group_by)
        groups.setdefault(key, []).append(rec)

    rows: dict[tuple, dict[str, GroupStats]] = {}
    for key in sorted(groups):
        group_records = groups[key]
        row: dict[str, GroupStats] = {}
        for column in AGGREGATE_COLUMNS:
            if column == "time_ms":
                values = [r.time_ms for r in group_records]
                undefined = 0
            else:
                raw = [r.metrics[column] for r in group_records]
                values = [v for v in raw if v is not None]
                undefined = len(raw) - len(values)
            if values:
                q1, med, q3, mean = _quartiles(values)
                row[column] = GroupStats(q1, med, q3, mean, undefined)
            else:
                row[column] = GroupStats(None, None, None, None, undefined)
        rows[key] = row
    return AggregateTable(group_by=group_by, columns=AGGREGATE_COLUMNS, rows=rows)


# ---------------------------------------------------------------------------
# Correlation
# ---------------------------------------------------------------------------

def correlation_matrix(
    records: list[BenchRecord], metric_subset: tuple[str, ...] = SELECTED_METRICS
) -> tuple[tuple[str, ...], np.ndarray]:
    """Pearson correlations between metrics across records, using
    pairwise-complete observations. Entries with fewer than 3 complete
    pairs or zero variance are NaN; the diagonal is 1 wherever the metric
    has at least 3 defined values."""
    for name in metric_subset:
        if name not in METRIC_NAMES:
            raise ValueError(f"unknown metric {name!r}")
    usable = [r for r in records if r.metrics is not None]
    k = len(metric_subset)
    matrix = np.full((k, k), np.nan)
    columns = {
        name: np.array(
            [math.nan if r.metrics[name] is None else r.metrics[name] for r in usable],
            dtype=float,
        )
        for name in metric_subset
    }
    for i, a in enumerate(metric_subset):
        defined = np.count_nonzero(~np.isnan(columns[a]))
        if defined >= 3:
            matrix[i, i] = 1.0
        for j in range(i + 1, k):
            b = metric_subset[j]
            both = ~np.isnan(columns[a]) & ~np.isnan(columns[b])
            if np.count_nonzero(both) < 3:
                continue
            x = columns[a][both]
            y = columns[b][both]
            xd = x - x.mean()
            yd = y - y.mean()
            denom = math.sqrt(float(np.sum(xd**2)) * float(np.sum(yd**2)))
            if denom == 0.0:
                continue
            matrix[i, j] = matrix[j, i] = float(np.sum(xd * yd)) / denom
    return tuple(metric_subset), matrix


# ---------------------------------------------------------------------------
# Records CSV parsing (the inverse of model.write_records_csv)
# ---------------------------------------------------------------------------

def read_records_csv(data: bytes | str) -> list[BenchRecord]:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = [line for line in data.splitlines() if line]
    if not lines or tuple(lines[0].split(",")) != CSV_HEADER:
        raise ValueError("unrecognized records CSV header")
    records = []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != len(CSV_HEADER):
            raise ValueError(f"malformed records row: {line!r}")
        values = {
            name: (None if cell == "" else float(cell))
            for name, cell in zip(METRIC_NAMES, cells[8:])
        }
        records.append(
            BenchRecord(
                graph_id=cells[0],
                generator=cells[1],
                n=int(cells[2]),
                m=int(cells[3]),
                algorithm=cells[4],
                seed=int(cells[5]),
                time_ms=float(cells[6]),
                fallback=cells[7] == "true",
                metrics=MetricReport(values),
            )
        )
    return records
