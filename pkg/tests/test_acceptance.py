"""Acceptance suite: one test per criterion, each printing a PASS/FAIL
line (run with -s to see them). The desk-corpus sweep is executed three
times (parallelism 4, 1, and 8) by a shared module fixture; everything
else derives from those records or from dedicated seeded case suites."""

import random
import time
import warnings

import numpy as np
import pytest
from scipy.spatial import Delaunay as SciPyDelaunay

from unoverlap.algorithms import AdjustParams, adjust, scaling_factor
from unoverlap.algorithms._vpsc import solve_separation
from unoverlap.bench import (
    RunSettings,
    aggregate,
    correlation_matrix,
    count_runs,
    run_benchmark,
)
from unoverlap.corpus import desk_scale_spec, paper_scale_spec
from unoverlap.geometry import (
    convex_hull,
    corner_points,
    count_overlaps,
    delaunay_edges,
    delaunay_index_pairs,
    knn_sets,
    overlap_matrix,
)
from unoverlap.metrics import compute_metrics, el_metrics, nm_metrics, oo_metrics
from unoverlap.model import AdjustmentPair, Embedding, SizedGraph, write_records_csv

import oracles
from conftest import random_instance, random_pair

DESK_TIME_BUDGET_S = 600.0


def _report(criterion: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {criterion}: {status}{suffix}", flush=True)


@pytest.fixture(scope="module")
def desk_runs():
    spec = desk_scale_spec()
    start = time.perf_counter()
    records_p4 = run_benchmark(spec=spec, settings=RunSettings(parallelism=4))
    wall_p4 = time.perf_counter() - start
    records_p1 = run_benchmark(spec=spec, settings=RunSettings(parallelism=1))
    records_p8 = run_benchmark(spec=spec, settings=RunSettings(parallelism=8))
    return {
        "wall_p4": wall_p4,
        "p4": records_p4,
        "p1": records_p1,
        "p8": records_p8,
    }


def overlap_free_instance(rng, n=None, with_edges=True):
    graph, emb = random_instance(
        rng, n=n, edge_prob=0.3 if with_edges else 0.0, size_span=(0.5, 3.0), pos_span=6.0
    )
    cleared = adjust(graph, emb, AdjustParams(algorithm="vpsc", seed=1)).adjusted
    assert count_overlaps(graph, cleared) == 0
    return graph, cleared


class TestCriterion1:
    def test_overlap_freeness_and_runtime(self, desk_runs):
        records = desk_runs["p4"]
        ok = True
        assert len(records) == 672
        failures = [r for r in records if r.error]
        ok &= not failures
        assert not failures, failures[:3]
        ok &= desk_runs["wall_p4"] < DESK_TIME_BUDGET_S
        assert desk_runs["wall_p4"] < DESK_TIME_BUDGET_S
        _report(
            "C1 overlap-freeness + runtime",
            ok,
            f"672 runs clean in {desk_runs['wall_p4']:.0f}s",
        )


class TestCriterion2:
    def test_ordering_preservation(self, desk_runs):
        rows = [
            r
            for r in desk_runs["p4"]
            if r.algorithm in ("scaling", "pfs", "pfs-prime")
        ]
        assert len(rows) == 252
        bad = [
            (r.graph_id, r.algorithm)
            for r in rows
            if r.metrics["oo_o"] != 1.0 or r.metrics["oo_nni"] != 0.0
        ]
        assert bad == []
        _report("C2 ordering preservation", True, "252/252 rows at oo_o=1, oo_nni=0")


class TestCriterion3:
    def test_identity_targets(self):
        rng = random.Random(303)
        exact_targets = {
            "oo_o": 1.0, "oo_kt": 0.0, "oo_ni": 0.0, "oo_nni": 0.0,
            "sp_bb_l1ml": 1.0, "sp_bb_a": 1.0, "sp_bb_na": 0.0, "sp_ch_a": 1.0,
            "gs_bb_ar": 1.0, "gs_bb_iar": 1.0, "gs_ch_sd": 0.0,
            "nm_mn": 0.0, "nm_dm_me": 0.0, "nm_dm_ne": 0.0, "nm_dm_h": 0.0,
            "nm_dm_se": 0.0, "nm_dm_imse": 0.0, "nm_d": 0.0, "nm_knn": 0.0,
            "el_rsdd": 0.0,
        }
        for case in range(100):
            graph, emb = overlap_free_instance(rng, n=rng.randint(2, 10))
            pair = AdjustmentPair(graph, emb, emb)
            report = compute_metrics(pair)
            for name, expected in exact_targets.items():
                value = report[name]
                if value is None:
                    continue  # undefined by precondition (e.g. knn on n<2)
                assert value == expected, (case, name, value)
            # el_r measures the adjusted layout itself: under identity it
            # equals the initial max/min edge-length ratio, not 1
            if graph.m:
                idx = np.array(graph.edges)
                d = emb.coords[idx[:, 0]] - emb.coords[idx[:, 1]]
                lengths = np.hypot(d[:, 0], d[:, 1])
                if lengths.min() > 0:
                    assert report["el_r"] == float(lengths.max() / lengths.min())
            # the knn target holds for every valid k
            for k in range(1, graph.n - 1):
                assert nm_metrics(pair, k=k)["nm_knn"] == 0.0
        _report("C3 identity targets", True, "100 embeddings, exact")


class TestCriterion4:
    def test_worked_examples(self):
        def pair_with_boxes(initial_positions, adjusted_positions):
            nodes = [(f"v{i}", 2.0, 2.0) for i in range(len(initial_positions))]
            graph = SizedGraph(nodes)
            return AdjustmentPair(
                graph,
                Embedding.from_array(graph, np.array(initial_positions, dtype=float)),
                Embedding.from_array(graph, np.array(adjusted_positions, dtype=float)),
            )

        # boxes 4x2 -> 4x4
        pair = pair_with_boxes([(1, 1), (3, 1)], [(1, 1), (3, 3)])
        report = compute_metrics(pair)
        assert abs(report["sp_bb_l1ml"] - 1.0) <= 1e-12

        # boxes 3x2 -> 6x4: aspect preserved
        pair = pair_with_boxes([(1, 1), (2, 1)], [(1, 1), (5, 3)])
        report = compute_metrics(pair)
        assert abs(report["gs_bb_ar"] - 1.0) <= 1e-12

        # boxes 3x2 -> 4x6: aspect flipped
        pair = pair_with_boxes([(1, 1), (2, 1)], [(1, 1), (3, 5)])
        report = compute_metrics(pair)
        assert abs(report["gs_bb_ar"] - 2.25) <= 1e-12
        assert abs(report["gs_bb_iar"] - 2.25) <= 1e-12
        _report("C4 worked examples", True, "box ratios at 1e-12")


class TestCriterion5:
    def test_oracle_equivalence(self):
        rng = random.Random(505)

        for _ in range(200):  # ordering metrics, exact
            pair = random_pair(rng, n=rng.randint(1, 10))
            assert oo_metrics(pair) == oracles.oo_brute(
                pair.initial.as_dict(), pair.adjusted.as_dict()
            )

        for _ in range(200):  # movement metrics
            n = rng.randint(1, 10)
            pair = random_pair(rng, n=n)
            k = rng.randint(1, n - 1) if n > 1 else None
            mine = nm_metrics(pair, k=k)
            widths = {v: pair.graph.widths[i] for i, v in enumerate(pair.graph.node_ids)}
            heights = {v: pair.graph.heights[i] for i, v in enumerate(pair.graph.node_ids)}
            ref = oracles.nm_brute(
                pair.initial.as_dict(), pair.adjusted.as_dict(), widths, heights, k
            )
            assert mine["nm_mn"] == ref["nm_mn"]
            assert mine["nm_knn"] == ref["nm_knn"]
            for name in ("nm_dm_me", "nm_dm_ne", "nm_dm_h", "nm_dm_se", "nm_dm_imse", "nm_d"):
                assert mine[name] == pytest.approx(ref[name], rel=1e-12, abs=1e-12)

        for _ in range(200):  # edge-length metrics
            pair = random_pair(rng, n=rng.randint(2, 10), edge_prob=0.4)
            mine = el_metrics(pair)
            ref_r = oracles.el_r_brute(pair.adjusted.as_dict(), pair.graph.edge_ids())
            assert (mine["el_r"] is None) == (ref_r is None)
            if ref_r is not None:
                assert mine["el_r"] == pytest.approx(ref_r, rel=1e-12)
            tri = delaunay_edges(pair.initial, pair.graph)
            ref_rsdd = oracles.el_rsdd_brute(
                pair.initial.as_dict(), pair.adjusted.as_dict(), tri.edges
            )
            assert (mine["el_rsdd"] is None) == (ref_rsdd is None)
            if ref_rsdd is not None:
                assert mine["el_rsdd"] == pytest.approx(ref_rsdd, rel=1e-12, abs=1e-12)

        for _ in range(200):  # hull area vs shoelace on the oracle hull
            graph, emb = random_instance(rng, n=rng.randint(1, 6))
            hull = convex_hull(graph, emb)
            reference = oracles.hull_brute([tuple(p) for p in corner_points(graph, emb)])
            if len(reference) >= 3:
                assert hull.area == pytest.approx(oracles.shoelace(reference), abs=1e-9)

        checked = 0  # Delaunay empty-circumcircle property
        for _ in range(200):
            n = rng.randint(3, 12)
            pts = np.array([[rng.uniform(-10, 10), rng.uniform(-10, 10)] for _ in range(n)])
            pairs = set(delaunay_index_pairs(pts))
            try:
                tri = SciPyDelaunay(pts)
            except Exception:
                continue
            for simplex in tri.simplices:
                i, j, k = sorted(int(v) for v in simplex)
                assert {(i, j), (i, k), (j, k)} <= pairs
                a, b, c = (tuple(pts[v]) for v in (i, j, k))
                for other in range(n):
                    if other in (i, j, k):
                        continue
                    assert not oracles.circumcircle_contains(a, b, c, tuple(pts[other]))
                    checked += 1
        assert checked > 1000

        for _ in range(200):  # knn, exact
            n = rng.randint(2, 40)
            graph, emb = random_instance(rng, n=n)
            k = rng.randint(1, n - 1)
            mine = knn_sets(emb, k)
            positions = emb.as_dict()
            for v in graph.node_ids:
                assert mine[v] == oracles.knn_brute(positions, v, k)

        def overlap_free(widths, heights, coords):
            return not overlap_matrix(widths, heights, coords).any()

        for case in range(200):  # scaling factor vs bisection
            n = rng.randint(2, 14)
            nodes = [(f"v{i:02d}", rng.uniform(1, 4), rng.uniform(1, 4)) for i in range(n)]
            graph = SizedGraph(nodes)
            emb = Embedding.from_array(
                graph,
                np.array([[rng.uniform(0, n * 0.7), rng.uniform(0, n * 0.7)] for _ in range(n)]),
            )
            s = scaling_factor(graph, emb)
            ref = oracles.scaling_bisect(graph.widths, graph.heights, emb.coords, overlap_free)
            assert s == pytest.approx(ref, abs=1e-6)

        for _ in range(200):  # separation chains vs closed-form projection
            k = rng.randint(2, 3)
            desired = [rng.uniform(-5, 5) for _ in range(k)]
            gaps = [rng.uniform(0.5, 3.0) for _ in range(k - 1)]
            constraints = [(i, i + 1, gaps[i]) for i in range(k - 1)]
            mine = solve_separation(np.array(desired), constraints, np.arange(k))
            ref = oracles.chain_projection(desired, gaps)
            assert mine == pytest.approx(ref, abs=1e-6)

        _report("C5 oracle equivalence", True, "8 suites x 200 seeded cases")


class TestCriterion6:
    def test_alignment_invariances(self):
        rng = random.Random(606)
        from unoverlap.geometry import bounding_box

        for _ in range(50):  # pure translation
            graph, emb = random_instance(rng, n=rng.randint(2, 9))
            t = (rng.uniform(-20, 20), rng.uniform(-20, 20))
            shifted = emb.translated(*t)
            value = nm_metrics(AdjustmentPair(graph, emb, shifted))["nm_dm_imse"]
            assert abs(value) <= 1e-9

        for _ in range(50):  # pure scaling of centers about the bb center
            graph, emb = random_instance(rng, n=rng.randint(2, 9))
            s = rng.choice([0.5, 1.6, 2.0, 3.3])
            center = np.array(bounding_box(graph, emb).center)
            scaled = Embedding.from_array(graph, center + (emb.coords - center) * s)
            value = nm_metrics(AdjustmentPair(graph, emb, scaled))["nm_dm_imse"]
            assert abs(value) <= 1e-9

        for _ in range(50):  # uniform center scaling keeps relative edge lengths
            graph, emb = random_instance(rng, n=rng.randint(2, 9))
            s = rng.uniform(0.3, 4.0)
            scaled = Embedding.from_array(graph, emb.coords * s)
            value = el_metrics(AdjustmentPair(graph, emb, scaled))["el_rsdd"]
            assert value == pytest.approx(0.0, abs=1e-12)

        _report("C6 alignment invariances", True, "imse 1e-9, el_rsdd 1e-12")


class TestCriterion7:
    def test_qualitative_findings_soft(self, desk_runs):
        records = desk_runs["p4"]
        table = aggregate(records)
        medians_spread = {key[0]: row["sp_ch_a"].median for key, row in table.rows.items()}
        medians_move = {key[0]: row["nm_dm_imse"].median for key, row in table.rows.items()}
        checks = {
            "scaling worst median sp_ch_a": medians_spread["scaling"]
            == max(medians_spread.values())
            and sum(v == medians_spread["scaling"] for v in medians_spread.values()) == 1,
            "scaling best median nm_dm_imse": medians_move["scaling"]
            == min(medians_move.values()),
        }
        _, matrix = correlation_matrix(records, ("nm_dm_se", "nm_dm_h", "gs_bb_iar", "gs_ch_sd"))
        checks["corr(nm_dm_se, nm_dm_h) > 0.5"] = matrix[0, 1] > 0.5
        checks["corr(gs_bb_iar, gs_ch_sd) > 0"] = matrix[2, 3] > 0.0

        failed = [name for name, ok in checks.items() if not ok]
        for name in failed:
            warnings.warn(f"soft acceptance check failed: {name}")
        _report(
            "C7 qualitative findings (soft)",
            not failed,
            "all 4 hold" if not failed else f"warn: {', '.join(failed)}",
        )


class TestCriterion8:
    def test_paper_scale_structure(self, capsys):
        spec = paper_scale_spec()
        graphs, runs = count_runs(spec, RunSettings())
        assert (graphs, runs) == (840, 6720)
        from unoverlap.cli import main

        assert main(["bench", "--preset", "paper", "--dry-run"]) == 0
        out = capsys.readouterr().out
        assert "graphs: 840" in out
        assert "runs: 6720" in out
        _report("C8 scale structure", True, "840 graphs, 6720 runs (dry run)")


class TestCriterion9:
    def test_determinism_across_runs_and_parallelism(self, desk_runs):
        csv_p4 = write_records_csv(desk_runs["p4"], mask_time=True)
        csv_p1 = write_records_csv(desk_runs["p1"], mask_time=True)
        csv_p8 = write_records_csv(desk_runs["p8"], mask_time=True)
        assert csv_p1 == csv_p4
        assert csv_p1 == csv_p8
        _report("C9 determinism", True, "time-masked CSVs identical for p1/p4/p8")
