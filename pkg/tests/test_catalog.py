import math

from unoverlap.catalog import (
    DESCRIPTOR_BY_NAME,
    EDGE_LENGTH,
    GLOBAL_SHAPE,
    METRIC_CLASSES,
    METRIC_NAMES,
    METRICS,
    NODE_MOVEMENT,
    ORTHOGONAL_ORDERING,
    SELECTED_METRICS,
    SPREAD,
    range_high_for,
)


class TestRegistry:
    def test_twenty_one_rows(self):
        assert len(METRICS) == 21
        assert len(set(METRIC_NAMES)) == 21

    def test_selected_five(self):
        assert SELECTED_METRICS == ("oo_nni", "sp_ch_a", "gs_bb_iar", "nm_dm_imse", "el_rsdd")

    def test_class_partition(self):
        by_class = {}
        for d in METRICS:
            by_class.setdefault(d.metric_class, []).append(d.abbreviation)
        assert set(by_class) == set(METRIC_CLASSES)
        assert len(by_class[ORTHOGONAL_ORDERING]) == 4
        assert len(by_class[SPREAD]) == 4
        assert len(by_class[GLOBAL_SHAPE]) == 3
        assert len(by_class[NODE_MOVEMENT]) == 8
        assert len(by_class[EDGE_LENGTH]) == 2

    def test_catalog_order_matches_classes(self):
        # rows are grouped by class in a fixed order
        classes = [d.metric_class for d in METRICS]
        assert classes == sorted(classes, key=METRIC_CLASSES.index)

    def test_ranges_and_targets(self):
        spot = {
            "oo_o": (0.0, 1.0, 1.0),
            "oo_kt": (0.0, 1.0, 0.0),
            "oo_nni": (0.0, 1.0, 0.0),
            "sp_bb_l1ml": (1.0, math.inf, 1.0),
            "sp_bb_na": (0.0, 1.0, 0.0),
            "gs_bb_iar": (1.0, math.inf, 1.0),
            "nm_mn": (0.0, 1.0, 0.0),
            "nm_dm_ne": (0.0, 1.0, 0.0),
            "el_r": (1.0, math.inf, 1.0),
            "el_rsdd": (0.0, math.inf, 0.0),
        }
        for name, (low, high, target) in spot.items():
            d = DESCRIPTOR_BY_NAME[name]
            assert (d.range_low, d.range_high, d.target) == (low, high, target), name

    def test_node_count_dependent_bound(self):
        assert range_high_for("oo_ni", 10) == 90.0
        assert range_high_for("oo_kt", 10) == 1.0

    def test_all_targets_within_closed_range(self):
        for d in METRICS:
            assert d.range_low <= d.target <= d.range_high
