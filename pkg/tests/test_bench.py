import math
import random

import numpy as np
import pytest

from unoverlap.bench import (
    AGGREGATE_COLUMNS,
    BenchRecord,
    RunSettings,
    aggregate,
    correlation_matrix,
    count_runs,
    read_records_csv,
    run_benchmark,
)
from unoverlap.catalog import METRIC_NAMES
from unoverlap.corpus import CorpusSpec, desk_scale_spec, paper_scale_spec
from unoverlap.metrics import MetricReport
from unoverlap.model import write_records_csv

from conftest import make_graph


def record(algorithm="vpsc", graph_id="g1", n=4, time_ms=1.0, **metric_values):
    values = {name: metric_values.get(name, 0.0) for name in METRIC_NAMES}
    return BenchRecord(
        graph_id=graph_id,
        generator="tree",
        n=n,
        m=n - 1,
        algorithm=algorithm,
        seed=0,
        time_ms=time_ms,
        fallback=False,
        metrics=MetricReport(values),
    )


TINY_SPEC = CorpusSpec(models=("tree", "random"), sizes=(8, 12), seeds_per_size=1)


class TestCounts:
    def test_paper_scale(self):
        graphs, runs = count_runs(paper_scale_spec(), RunSettings())
        assert graphs == 840
        assert runs == 6720

    def test_desk_scale(self):
        graphs, runs = count_runs(desk_scale_spec(), RunSettings())
        assert graphs == 84
        assert runs == 672


class TestRunBenchmark:
    def test_record_grid_and_order(self):
        settings = RunSettings(algorithms=("vpsc", "pfs"), parallelism=1)
        records = run_benchmark(spec=TINY_SPEC, settings=settings)
        assert len(records) == 4 * 2
        keys = [(r.graph_id, r.algorithm) for r in records]
        assert keys == sorted(keys)
        for rec in records:
            assert rec.error == ""
            assert rec.metrics is not None
            assert rec.time_ms >= 0.0

    def test_parallel_content_identical(self):
        settings1 = RunSettings(algorithms=("scaling", "gtree"), parallelism=1)
        settings2 = RunSettings(algorithms=("scaling", "gtree"), parallelism=4)
        rec1 = run_benchmark(spec=TINY_SPEC, settings=settings1)
        rec2 = run_benchmark(spec=TINY_SPEC, settings=settings2)
        assert write_records_csv(rec1, mask_time=True) == write_records_csv(rec2, mask_time=True)

    def test_same_config_identical(self):
        settings = RunSettings(algorithms=("rwordle-l",), parallelism=1)
        rec1 = run_benchmark(spec=TINY_SPEC, settings=settings)
        rec2 = run_benchmark(spec=TINY_SPEC, settings=settings)
        assert write_records_csv(rec1, mask_time=True) == write_records_csv(rec2, mask_time=True)

    def test_file_inputs(self):
        g, emb = make_graph(
            [("a", 2, 2, 0, 0), ("b", 2, 2, 1, 0), ("c", 2, 2, 0.5, 0.5)],
            graph_id="manual",
        )
        records = run_benchmark(
            inputs=[(g, emb, "file", 3)],
            settings=RunSettings(algorithms=("fta",), parallelism=1),
        )
        assert len(records) == 1
        assert records[0].graph_id == "manual"
        assert records[0].generator == "file"
        assert records[0].seed == 3

    def test_nothing_to_run(self):
        with pytest.raises(ValueError):
            run_benchmark()


class TestAggregate:
    def test_r7_quartiles(self):
        records = [record(sp_bb_a=v, graph_id=f"g{v}") for v in (1.0, 2.0, 3.0, 4.0)]
        table = aggregate(records)
        stats = table.rows[("vpsc",)]["sp_bb_a"]
        assert stats.q1 == pytest.approx(1.75)
        assert stats.median == pytest.approx(2.5)
        assert stats.q3 == pytest.approx(3.25)
        assert stats.mean == pytest.approx(2.5)

    def test_single_record_group(self):
        table = aggregate([record(sp_bb_a=7.0)])
        stats = table.rows[("vpsc",)]["sp_bb_a"]
        assert stats.q1 == stats.median == stats.q3 == 7.0

    def test_undefined_excluded_but_counted(self):
        records = [record(graph_id=f"g{i}", sp_ch_a=float(i)) for i in range(1, 11)]
        broken = records[3]
        values = dict(broken.metrics.values)
        values["sp_ch_a"] = None
        records[3] = BenchRecord(
            graph_id=broken.graph_id, generator=broken.generator, n=broken.n,
            m=broken.m, algorithm=broken.algorithm, seed=broken.seed,
            time_ms=broken.time_ms, fallback=broken.fallback,
            metrics=MetricReport(values),
        )
        stats = aggregate(records).rows[("vpsc",)]["sp_ch_a"]
        assert stats.undefined_count == 1
        kept = [float(i) for i in range(1, 11) if i != 4]
        assert stats.mean == pytest.approx(sum(kept) / len(kept))

    def test_quartile_ordering_everywhere(self):
        rng = random.Random(3)
        records = [
            record(
                algorithm=rng.choice(("pfs", "vpsc")),
                graph_id=f"g{i}",
                sp_bb_a=rng.uniform(1, 9),
                nm_dm_se=rng.uniform(0, 100),
            )
            for i in range(40)
        ]
        table = aggregate(records)
        for row in table.rows.values():
            for column in AGGREGATE_COLUMNS:
                stats = row[column]
                if stats.median is None:
                    continue
                assert stats.q1 <= stats.median <= stats.q3

    def test_group_by_n(self):
        records = [record(graph_id=f"g{i}", n=8 + (i % 2)) for i in range(6)]
        table = aggregate(records, group_by=("algorithm", "n"))
        assert set(table.rows) == {("vpsc", 8), ("vpsc", 9)}

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate([])


class TestCorrelation:
    def test_self_correlation_unit(self):
        records = [record(graph_id=f"g{i}", oo_nni=float(i % 7) / 7) for i in range(10)]
        names, matrix = correlation_matrix(records, ("oo_nni",))
        assert matrix[0, 0] == 1.0

    def test_affine_pair(self):
        records = [
            record(graph_id=f"g{i}", nm_dm_se=float(i), nm_dm_h=2.0 * i + 3.0)
            for i in range(8)
        ]
        _, matrix = correlation_matrix(records, ("nm_dm_se", "nm_dm_h"))
        assert matrix[0, 1] == pytest.approx(1.0, abs=1e-12)

    def test_textbook_formula_oracle(self):
        rng = random.Random(11)
        xs = [rng.uniform(0, 10) for _ in range(30)]
        ys = [rng.uniform(0, 10) for _ in range(30)]
        records = [
            record(graph_id=f"g{i}", gs_bb_iar=x, gs_ch_sd=y)
            for i, (x, y) in enumerate(zip(xs, ys))
        ]
        _, matrix = correlation_matrix(records, ("gs_bb_iar", "gs_ch_sd"))
        mx = sum(xs) / len(xs)
        my = sum(ys) / len(ys)
        num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
        den = math.sqrt(sum((x - mx) ** 2 for x in xs) * sum((y - my) ** 2 for y in ys))
        assert matrix[0, 1] == pytest.approx(num / den, abs=1e-12)
        assert matrix[1, 0] == matrix[0, 1]

    def test_insufficient_data_undefined(self):
        records = [record(graph_id=f"g{i}", oo_nni=float(i)) for i in range(2)]
        _, matrix = correlation_matrix(records, ("oo_nni", "sp_ch_a"))
        assert np.isnan(matrix[0, 1])

    def test_zero_variance_undefined_offdiagonal(self):
        records = [record(graph_id=f"g{i}", oo_nni=1.0, sp_ch_a=float(i)) for i in range(9)]
        _, matrix = correlation_matrix(records, ("oo_nni", "sp_ch_a"))
        assert np.isnan(matrix[0, 1])
        assert matrix[0, 0] == 1.0


class TestRecordsRoundTrip:
    def test_csv_roundtrip(self):
        records = [
            record(graph_id="g1", algorithm="pfs", sp_bb_a=1.5, time_ms=2.25),
            record(graph_id="g2", algorithm="vpsc", oo_nni=0.125),
        ]
        data = write_records_csv(records)
        parsed = read_records_csv(data)
        assert len(parsed) == 2
        assert parsed[0].graph_id == "g1"
        assert parsed[0].metrics["sp_bb_a"] == 1.5
        assert parsed[1].metrics["oo_nni"] == 0.125
        assert parsed[0].time_ms == 2.25

    def test_bad_header_rejected(self):
        with pytest.raises(ValueError):
            read_records_csv(b"nope,nope\n")
