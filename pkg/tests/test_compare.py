from __future__ import annotations

import pytest

from busnet import (
    InvalidThreshold,
    build_c_space,
    build_p_space,
    compare_feeds,
    degree_report,
    distance_report,
    giant_share,
)

from conftest import FIVE_ROUTE_FEED, THREE_ROUTE_FEED, make_feed


def test_reduction_percentages_small_scale(fig3_feed, fig1_feed):
    report = compare_feeds(fig3_feed, fig1_feed)  # 5 routes -> 3 routes
    rows = {q.name: q for q in report.quantities}
    assert rows["routes"].value_a == 5
    assert rows["routes"].value_b == 3
    assert rows["routes"].percent_change == pytest.approx(-40.0)
    assert rows["routes"].direction == "down"


def test_reduction_arithmetic_matches_reported_percentages():
    # the full-count version runs end-to-end in the acceptance suite
    assert 100 * (377 - 488) / 488 == pytest.approx(-22.75, abs=0.005)
    assert 100 * (6656 - 7020) / 7020 == pytest.approx(-5.19, abs=0.005)


def test_identical_feeds_all_flat(fig1_feed):
    report = compare_feeds(fig1_feed, fig1_feed, thresholds=[1, 2, 3])
    assert all(q.direction == "flat" for q in report.quantities)
    assert all(q.delta == 0 for q in report.quantities)


def test_antisymmetry(fig1_feed, fig3_feed):
    forward = compare_feeds(fig1_feed, fig3_feed, thresholds=[2])
    backward = compare_feeds(fig3_feed, fig1_feed, thresholds=[2])
    for f, b in zip(forward.quantities, backward.quantities):
        assert f.name == b.name
        assert f.delta == -b.delta
        assert f.value_a == b.value_b


def test_values_match_standalone_metrics(fig1_feed, fig3_feed):
    report = compare_feeds(fig1_feed, fig3_feed, thresholds=[3])
    rows = {q.name: q for q in report.quantities}
    p1 = build_p_space(fig1_feed)
    assert rows["p_nodes"].value_a == p1.node_count
    assert rows["p_edges"].value_a == 32
    assert rows["p_avg_degree"].value_a == degree_report(p1).average
    assert rows["p_avg_distance"].value_a == distance_report(p1).average
    assert rows["p_diameter"].value_a == 2
    assert rows["cs3_giant_size"].value_b == 2
    assert rows["cs3_giant_fraction"].value_b == pytest.approx(0.4)
    assert rows["b_route_avg_degree"].value_a == pytest.approx(17 / 3)


def test_giant_share_five_route_fixture(fig3_feed):
    cs = build_c_space(fig3_feed)
    assert giant_share(cs, 3) == (2, pytest.approx(0.4))
    assert giant_share(cs, 1) == (5, pytest.approx(1.0))
    assert giant_share(cs, 4) == (1, pytest.approx(0.2))
    with pytest.raises(InvalidThreshold):
        giant_share(cs, 0)


def test_paper_share_arithmetic():
    assert 100 * 53 / 488 == pytest.approx(10.86, abs=0.005)
    assert 100 * 25 / 377 == pytest.approx(6.63, abs=0.005)


def test_table_rendering(fig1_feed, fig3_feed):
    report = compare_feeds(fig1_feed, fig3_feed, thresholds=[2])
    table = report.to_table()
    lines = table.splitlines()
    assert lines[0].split()[0] == "quantity"
    routes_row = next(line for line in lines if line.startswith("routes"))
    assert routes_row.split() == ["routes", "3", "5", "66.67%", "↑"]
    flat_table = compare_feeds(fig1_feed, fig1_feed).to_table()
    flat_rows = [line.split()[-1] for line in flat_table.splitlines()[1:]]
    assert set(flat_rows) == {"-"}


def test_percent_change_against_zero_base(fig1_feed):
    # degenerate: comparing a feed with itself never divides by zero, and
    # a zero-valued base with nonzero delta reports no percentage
    report = compare_feeds(fig1_feed, fig1_feed)
    for q in report.quantities:
        if q.value_a == 0:
            assert q.percent_change == 0.0
