"""Command line interface.

Subcommands: generate (corpus to JSON files), layout (assign positions),
adjust (run one algorithm), metrics (evaluate a pair), bench (full sweep
to a records CSV), report (aggregate a records CSV into delimited tables
plus figures), render (SVG drawing).

Exit codes: 0 success, 1 usage error, 2 validation error, 3 benchmark
completed with per-run failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .algorithms import (
    ALGORITHM_NAMES,
    CLI_ALGORITHM_NAMES,
    AdjustParams,
    adjust,
    normalize_algorithm,
)
from .bench import (
    RunSettings,
    aggregate,
    correlation_matrix,
    read_records_csv,
    run_benchmark,
)
from .catalog import METRIC_NAMES, SELECTED_METRICS
from .corpus import (
    CorpusSpec,
    NodeSizeRule,
    desk_scale_spec,
    generate,
    initial_layout,
    paper_scale_spec,
)
from .metrics import compute_metrics
from .model import (
    AdjustmentPair,
    DotParseError,
    Embedding,
    GraphValidationError,
    SizedGraph,
    format_real,
    read_graph_dot,
    read_graph_json,
    write_graph_json,
    write_records_csv,
)
from .render import render_svg

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_RUN_FAILURES = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1 for usage problems
        raise _UsageError(message)


def _load_graph_file(path: Path) -> tuple[SizedGraph, Embedding | None]:
    data = path.read_bytes()
    if path.suffix.lower() in (".dot", ".gv"):
        graph, embedding = read_graph_dot(data)
    else:
        graph, embedding = read_graph_json(data)
    if not graph.graph_id:  # fall back to the file name so records stay distinct
        nodes = [
            (v, float(graph.widths[i]), float(graph.heights[i]))
            for i, v in enumerate(graph.node_ids)
        ]
        graph = SizedGraph(nodes, graph.edge_ids(), graph_id=path.stem)
        if embedding is not None:
            embedding = Embedding.from_array(graph, embedding.coords)
    return graph, embedding


def _require_embedding(graph: SizedGraph, embedding: Embedding | None, path: Path) -> Embedding:
    if embedding is None:
        raise GraphValidationError(f"{path}: no node positions; run 'layout' first")
    return embedding


def _parse_metric_list(text: str) -> tuple[str, ...]:
    if text == "selected":
        return SELECTED_METRICS
    if text == "all":
        return METRIC_NAMES
    names = tuple(part.strip() for part in text.split(",") if part.strip())
    for name in names:
        if name not in METRIC_NAMES:
            raise GraphValidationError(f"unknown metric {name!r}")
    return names


# ---------------------------------------------------------------------------
# Config files
# ---------------------------------------------------------------------------

def _load_config(path: Path) -> dict:
    data = path.read_bytes()
    if path.suffix.lower() == ".json":
        return json.loads(data)
    try:
        import tomllib  # python >= 3.11
    except ModuleNotFoundError:
        import tomli as tomllib
    return tomllib.loads(data.decode("utf-8"))


def _spec_from_config(cfg: dict) -> tuple[CorpusSpec, RunSettings, tuple[str, ...]]:
    corpus = cfg.get("corpus", {})
    size_cfg = corpus.get("node_size", {})
    rule = NodeSizeRule(
        rule=size_cfg.get("rule", "uniform"),
        width=float(size_cfg.get("width", NodeSizeRule.width)),
        height=float(size_cfg.get("height", NodeSizeRule.height)),
        base=float(size_cfg.get("base", NodeSizeRule.base)),
        slope=float(size_cfg.get("slope", NodeSizeRule.slope)),
    )
    spec = CorpusSpec(
        models=tuple(corpus.get("models", ("random", "tree", "small_world", "scale_free"))),
        sizes=tuple(int(s) for s in corpus.get("sizes", ())),
        seeds_per_size=int(corpus.get("seeds_per_size", 1)),
        node_size_rule=rule,
    )
    run_cfg = cfg.get("run", {})
    algorithms = tuple(
        normalize_algorithm(a).replace("_", "-") for a in run_cfg.get("algorithms", CLI_ALGORITHM_NAMES)
    )
    settings = RunSettings(
        algorithms=algorithms,
        parallelism=int(run_cfg.get("parallelism", 1)),
        layout_iterations=int(run_cfg.get("layout_iterations", 300)),
        padding=float(run_cfg.get("padding", 0.0)),
        max_outer_iterations=int(run_cfg.get("max_outer_iterations", 1000)),
        knn_k=int(run_cfg["knn_k"]) if "knn_k" in run_cfg else None,
    )
    selection = cfg.get("metrics", {}).get("selection", "selected")
    if isinstance(selection, list):
        metric_names = _parse_metric_list(",".join(selection))
    else:
        metric_names = _parse_metric_list(str(selection))
    return spec, settings, metric_names


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_generate(args) -> int:
    models = tuple(m.strip() for m in args.models.split(","))
    sizes = tuple(int(s) for s in args.sizes.split(","))
    if args.size_rule == "uniform":
        rule = NodeSizeRule(rule="uniform", width=args.node_width, height=args.node_height)
    else:
        rule = NodeSizeRule(rule="degree_proportional", base=args.size_base, slope=args.size_slope)
    spec = CorpusSpec(models=models, sizes=sizes, seeds_per_size=args.seeds, node_size_rule=rule)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    count = 0
    for model, n, seed in spec.jobs():
        graph = generate(model, n, seed, size_rule=spec.node_size_rule)
        (out_dir / f"{graph.graph_id}.json").write_bytes(write_graph_json(graph))
        count += 1
    print(f"wrote {count} graphs to {out_dir}")
    return EXIT_OK


def _cmd_layout(args) -> int:
    graph, _ = _load_graph_file(Path(args.input))
    embedding = initial_layout(graph, args.seed, iterations=args.iterations)
    Path(args.output).write_bytes(write_graph_json(graph, embedding))
    print(f"laid out {graph.graph_id or args.input}: n={graph.n} m={graph.m}")
    return EXIT_OK


def _cmd_adjust(args) -> int:
    path = Path(args.input)
    graph, embedding = _load_graph_file(path)
    embedding = _require_embedding(graph, embedding, path)
    params = AdjustParams(
        algorithm=args.algorithm,
        seed=args.seed,
        padding=args.padding,
        max_outer_iterations=args.max_iterations,
    )
    outcome = adjust(graph, embedding, params)
    Path(args.output).write_bytes(write_graph_json(graph, outcome.adjusted))
    print(
        "adjusted with {}: {:.1f} ms, {} iterations{}".format(
            args.algorithm,
            outcome.wall_time * 1000.0,
            outcome.outer_iterations,
            ", fallback used" if outcome.fallback_used else "",
        )
    )
    return EXIT_OK


def _cmd_metrics(args) -> int:
    if args.pair:
        obj = json.loads(Path(args.pair).read_bytes())
        if not isinstance(obj, dict) or "initial" not in obj or "adjusted" not in obj:
            raise GraphValidationError("paired file must contain 'initial' and 'adjusted'")
        graph, initial = read_graph_json(json.dumps(obj["initial"]))
        graph2, adjusted = read_graph_json(json.dumps(obj["adjusted"]))
    else:
        if not args.adjusted:
            raise _UsageError("metrics requires either --pair or two embedding files")
        p1, p2 = Path(args.initial), Path(args.adjusted)
        graph, initial = _load_graph_file(p1)
        graph2, adjusted = _load_graph_file(p2)
    if initial is None or adjusted is None:
        raise GraphValidationError("both inputs must carry node positions")
    if graph2 != graph:
        raise GraphValidationError("the two inputs describe different graphs")
    pair = AdjustmentPair(graph, initial, adjusted)
    report = compute_metrics(pair, k=args.k)
    names = METRIC_NAMES if args.all_metrics else SELECTED_METRICS
    if args.json:
        payload = {name: report[name] for name in names}
        print(json.dumps(payload, indent=2))
    else:
        for name in names:
            value = report[name]
            print(f"{name} {'undef' if value is None else format_real(value)}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    spec = None
    settings_kwargs: dict = {}
    if args.config:
        spec, settings, _ = _spec_from_config(_load_config(Path(args.config)))
    elif args.preset:
        spec = desk_scale_spec() if args.preset == "desk" else paper_scale_spec()
        settings = RunSettings()
    else:
        settings = RunSettings()
    if args.algorithms:
        algorithms = tuple(
            normalize_algorithm(a).replace("_", "-") for a in args.algorithms.split(",")
        )
        settings_kwargs["algorithms"] = algorithms
    if args.parallelism is not None:
        settings_kwargs["parallelism"] = args.parallelism
    if settings_kwargs:
        from dataclasses import replace

        settings = replace(settings, **settings_kwargs)

    inputs = []
    for name in args.inputs or ():
        path = Path(name)
        graph, embedding = _load_graph_file(path)
        embedding = _require_embedding(graph, embedding, path)
        inputs.append((graph, embedding, "file", 0))

    if spec is None and not inputs:
        raise _UsageError("bench needs --config, --preset, or --inputs")

    if args.dry_run:
        graphs = (spec.graph_count if spec else 0) + len(inputs)
        runs = graphs * len(settings.algorithms)
        print(f"graphs: {graphs}")
        print(f"runs: {runs}")
        return EXIT_OK

    records = run_benchmark(spec=spec, inputs=inputs or None, settings=settings)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    good = [r for r in records if not r.error]
    out.write_bytes(write_records_csv(good, mask_time=args.mask_time))
    failures = [r for r in records if r.error]
    print(f"wrote {len(good)} records to {out}")
    if failures:
        sidecar = out.with_suffix(out.suffix + ".errors.txt")
        sidecar.write_text(
            "".join(f"{r.graph_id},{r.algorithm}: {r.error}\n" for r in failures)
        )
        print(f"{len(failures)} runs failed; details in {sidecar}", file=sys.stderr)
        return EXIT_RUN_FAILURES
    return EXIT_OK


def _stats_cell(value: float | None) -> str:
    return "" if value is None else format_real(value)


def _cmd_report(args) -> int:
    records = read_records_csv(Path(args.records).read_bytes())
    if not records:
        raise GraphValidationError("records file contains no rows")
    group_by = tuple(k.strip() for k in args.group_by.split(","))
    metric_names = _parse_metric_list(args.metrics)
    table = aggregate(records, group_by=group_by)
    names, matrix = correlation_matrix(records, metric_names)

    agg_lines = [",".join(group_by + ("column", "q1", "median", "q3", "mean", "undefined"))]
    for key, row in table.rows.items():
        prefix = [str(part) for part in key]
        for column in ("time_ms",) + metric_names:
            stats = row[column]
            agg_lines.append(
                ",".join(
                    prefix
                    + [
                        column,
                        _stats_cell(stats.q1),
                        _stats_cell(stats.median),
                        _stats_cell(stats.q3),
                        _stats_cell(stats.mean),
                        str(stats.undefined_count),
                    ]
                )
            )
    agg_text = "\n".join(agg_lines) + "\n"

    corr_lines = [",".join(("metric",) + names)]
    for i, name in enumerate(names):
        cells = [name]
        for j in range(len(names)):
            value = matrix[i, j]
            cells.append("" if np.isnan(value) else format_real(float(value)))
        corr_lines.append(",".join(cells))
    corr_text = "\n".join(corr_lines) + "\n"

    if args.text:
        print(agg_text, end="")
        print()
        print(corr_text, end="")
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "aggregates.csv").write_text(agg_text)
        (out_dir / "correlations.csv").write_text(corr_text)
        written = ["aggregates.csv", "correlations.csv"]
        if not args.no_figures:
            from .figures import write_report_figures

            paths = write_report_figures(records, out_dir, metrics=metric_names)
            written.extend(p.name for p in paths)
        print(f"report written to {out_dir}: {', '.join(written)}")
    elif not args.text:
        raise _UsageError("report needs --out-dir or --text")
    return EXIT_OK


def _cmd_render(args) -> int:
    path = Path(args.input)
    graph, embedding = _load_graph_file(path)
    embedding = _require_embedding(graph, embedding, path)
    second = None
    if args.adjusted:
        path2 = Path(args.adjusted)
        graph2, second = _load_graph_file(path2)
        second = _require_embedding(graph2, second, path2)
        if graph2 != graph:
            raise GraphValidationError("adjusted file describes a different graph")
    Path(args.output).write_bytes(render_svg(graph, embedding, second))
    print(f"rendered {args.output}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="unoverlap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic corpus as JSON files")
    p.add_argument("--models", default="random,tree,small_world,scale_free")
    p.add_argument("--sizes", required=True, help="comma-separated node counts")
    p.add_argument("--seeds", type=int, default=1, help="seeds per (model, size)")
    p.add_argument("--size-rule", choices=("uniform", "degree-proportional"), default="uniform")
    p.add_argument("--node-width", type=float, default=4.0)
    p.add_argument("--node-height", type=float, default=2.0)
    p.add_argument("--size-base", type=float, default=4.0)
    p.add_argument("--size-slope", type=float, default=0.25)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("layout", help="compute a force-directed initial layout")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterations", type=int, default=300)
    p.set_defaults(func=_cmd_layout)

    p = sub.add_parser("adjust", help="remove overlaps with one algorithm")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--algorithm", required=True, choices=CLI_ALGORITHM_NAMES + ALGORITHM_NAMES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--padding", type=float, default=0.0)
    p.add_argument("--max-iterations", type=int, default=1000)
    p.set_defaults(func=_cmd_adjust)

    p = sub.add_parser("metrics", help="evaluate metrics on an adjustment pair")
    p.add_argument("initial", nargs="?", help="initial embedding file")
    p.add_argument("adjusted", nargs="?", help="adjusted embedding file")
    p.add_argument("--pair", help="single JSON file with 'initial' and 'adjusted'")
    p.add_argument("--k", type=int, default=None, help="knn neighbourhood size")
    p.add_argument("--all-metrics", action="store_true", help="print all 21 metrics")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("bench", help="run the benchmark protocol")
    p.add_argument("--config", help="TOML or JSON benchmark configuration")
    p.add_argument("--preset", choices=("desk", "paper"))
    p.add_argument("--inputs", nargs="*", help="embedded graph files (JSON or DOT)")
    p.add_argument("--out", default="records.csv")
    p.add_argument("--parallelism", type=int, default=None)
    p.add_argument("--algorithms", help="comma-separated algorithm subset")
    p.add_argument("--dry-run", action="store_true", help="print run counts and exit")
    p.add_argument("--mask-time", action="store_true", help="write 0 in the time column")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("report", help="aggregate a records CSV")
    p.add_argument("--records", required=True)
    p.add_argument("--out-dir")
    p.add_argument("--group-by", default="algorithm", help="algorithm or algorithm,n")
    p.add_argument("--metrics", default="selected", help="selected, all, or a comma list")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--text", action="store_true", help="print tables to stdout")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("render", help="render an embedded graph to SVG")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--adjusted", help="second embedding for before/after")
    p.set_defaults(func=_cmd_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphValidationError, DotParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
