"""Matplotlib figures for the report path: quartile charts per metric and
running-time curves, written next to the delimited report output."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bench import BenchRecord, aggregate
from .catalog import SELECTED_METRICS


def quartile_figure(records: list[BenchRecord], metrics: tuple[str, ...], path: Path) -> None:
    """Per-algorithm median with a q1..q3 bar, one panel per metric."""
    table = aggregate(records, group_by=("algorithm",))
    algorithms = [key[0] for key in table.rows]
    cols = min(3, len(metrics))
    rows = math.ceil(len(metrics) / cols)
    fig, axes = plt.subplots(rows, cols, figsize=(4.2 * cols, 3.2 * rows), squeeze=False)
    for k, metric in enumerate(metrics):
        ax = axes[k // cols][k % cols]
        y = np.arange(len(algorithms))
        medians, lows, highs = [], [], []
        for key in table.rows:
            stats = table.rows[key][metric]
            medians.append(np.nan if stats.median is None else stats.median)
            lows.append(np.nan if stats.q1 is None else stats.q1)
            highs.append(np.nan if stats.q3 is None else stats.q3)
        medians = np.array(medians)
        err = np.vstack([medians - np.array(lows), np.array(highs) - medians])
        ax.errorbar(medians, y, xerr=np.abs(err), fmt="o", color="#27567b", ecolor="#8aa9c4", capsize=3)
        ax.set_yticks(y)
        ax.set_yticklabels(algorithms, fontsize=8)
        ax.invert_yaxis()
        ax.set_title(metric, fontsize=10)
        ax.grid(True, axis="x", alpha=0.3)
    for k in range(len(metrics), rows * cols):
        axes[k // cols][k % cols].axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def timing_figure(records: list[BenchRecord], path: Path) -> None:
    """Median adjustment time against node count, one curve per algorithm."""
    by_algo: dict[str, dict[int, list[float]]] = {}
    for rec in records:
        if rec.metrics is None:
            continue
        by_algo.setdefault(rec.algorithm, {}).setdefault(rec.n, []).append(rec.time_ms)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    any_positive = False
    for algorithm in sorted(by_algo):
        sizes = sorted(by_algo[algorithm])
        medians = [float(np.median(by_algo[algorithm][n])) for n in sizes]
        any_positive = any_positive or any(m > 0 for m in medians)
        ax.plot(sizes, medians, marker="o", markersize=3, label=algorithm)
    ax.set_xscale("log")
    if any_positive:  # time-masked records would break the log axis
        ax.set_yscale("log")
    ax.set_xlabel("nodes")
    ax.set_ylabel("median adjustment time (ms)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report_figures(
    records: list[BenchRecord],
    out_dir: Path,
    metrics: tuple[str, ...] = SELECTED_METRICS,
) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    quartiles = out_dir / "metric_quartiles.png"
    quartile_figure(records, metrics, quartiles)
    timing = out_dir / "timing.png"
    timing_figure(records, timing)
    return [quartiles, timing]
