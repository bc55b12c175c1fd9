from __future__ import annotations

import json

import pytest

from busnet import load_canonical, save_canonical, synthetic_feed
from busnet.cli import main

from conftest import FIVE_ROUTE_FEED, THREE_ROUTE_FEED, make_feed, write_gtfs


@pytest.fixture
def fig1_canonical(tmp_path):
    path = tmp_path / "fig1.json"
    save_canonical(make_feed("fig1", THREE_ROUTE_FEED), path)
    return path


@pytest.fixture
def fig3_canonical(tmp_path):
    path = tmp_path / "fig3.json"
    save_canonical(make_feed("fig3", FIVE_ROUTE_FEED), path)
    return path


def test_ingest_prints_stats(tmp_path, capsys):
    gtfs = write_gtfs(tmp_path / "gtfs", THREE_ROUTE_FEED)
    out = tmp_path / "canonical.json"
    assert main(["ingest", "--gtfs", str(gtfs), "--out", str(out)]) == 0
    line = capsys.readouterr().out.splitlines()[0]
    assert line.startswith("routes=3 stops=10")
    assert load_canonical(out).routes.keys() == THREE_ROUTE_FEED.keys()


def test_ingest_missing_file_exits_2(tmp_path, capsys):
    gtfs = write_gtfs(tmp_path / "gtfs", THREE_ROUTE_FEED)
    (gtfs / "stop_times.txt").unlink()
    assert main(["ingest", "--gtfs", str(gtfs), "--out", str(tmp_path / "c.json")]) == 2
    assert "stop_times.txt" in capsys.readouterr().err


def test_ingest_empty_directory_exits_2(tmp_path, capsys):
    empty = tmp_path / "nothing"
    empty.mkdir()
    assert main(["ingest", "--gtfs", str(empty), "--out", str(tmp_path / "c.json")]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_build_thresholded_c_space(fig3_canonical, tmp_path):
    out = tmp_path / "cs3.net"
    code = main(
        ["build", "--canonical", str(fig3_canonical), "--space", "c", "--min-shared", "3",
         "--out", str(out)]
    )
    assert code == 0
    text = out.read_text()
    assert text.startswith("*Vertices 5\n")
    assert text.count("\n") == 5 + 2 + 1  # header + vertices + marker + one edge


def test_build_p_space(fig1_canonical, tmp_path):
    out = tmp_path / "p.net"
    assert main(["build", "--canonical", str(fig1_canonical), "--space", "p", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "*Vertices 10"
    assert len(lines) == 1 + 10 + 1 + 32


def test_build_b_space_partition_header(fig1_canonical, tmp_path):
    out = tmp_path / "b.net"
    assert main(["build", "--canonical", str(fig1_canonical), "--space", "b", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "*Vertices 13 3"


def test_build_rejects_bad_threshold(fig3_canonical, tmp_path, capsys):
    code = main(
        ["build", "--canonical", str(fig3_canonical), "--space", "c", "--min-shared", "0",
         "--out", str(tmp_path / "x.net")]
    )
    assert code == 2
    assert capsys.readouterr().err.startswith("error:")


def test_build_rejects_threshold_for_p_space(fig1_canonical, tmp_path):
    code = main(
        ["build", "--canonical", str(fig1_canonical), "--space", "p", "--min-shared", "2",
         "--out", str(tmp_path / "x.net")]
    )
    assert code == 2


def test_metrics_distance_report(fig1_canonical, tmp_path):
    out = tmp_path / "reports"
    code = main(
        ["metrics", "--canonical", str(fig1_canonical), "--space", "p",
         "--metrics", "distance,degree", "--out", str(out)]
    )
    assert code == 0
    distance = json.loads((out / "distance.json").read_text())
    assert distance["diameter"] == 2
    assert abs(distance["average"] - 58 / 45) < 1e-9
    degree = json.loads((out / "degree.json").read_text())
    assert degree["average"] == 6.4
    assert (out / "degree.csv").read_text().splitlines()[0] == "node,degree"


def test_metrics_betweenness_on_path(tmp_path):
    canonical = tmp_path / "path.json"
    save_canonical(make_feed("p", {"A": ["a", "b"], "B": ["b", "c"]}), canonical)
    out = tmp_path / "reports"
    code = main(
        ["metrics", "--canonical", str(canonical), "--space", "p",
         "--metrics", "betweenness", "--out", str(out)]
    )
    assert code == 0
    values = json.loads((out / "betweenness.json").read_text())
    assert values == {"a": 0.0, "b": 1.0, "c": 0.0}


def test_metrics_rejects_unknown_selector(fig1_canonical, tmp_path, capsys):
    code = main(
        ["metrics", "--canonical", str(fig1_canonical), "--space", "p",
         "--metrics", "degree,entropy", "--out", str(tmp_path / "r")]
    )
    assert code == 2
    assert "entropy" in capsys.readouterr().err


def test_metrics_bipartite_space(fig1_canonical, tmp_path):
    out = tmp_path / "breports"
    code = main(
        ["metrics", "--canonical", str(fig1_canonical), "--space", "b",
         "--metrics", "degree,components", "--out", str(out)]
    )
    assert code == 0
    degree = json.loads((out / "degree.json").read_text())
    assert degree["route_average"] == pytest.approx(17 / 3)
    components = json.loads((out / "components.json").read_text())
    assert components["giant_fraction"] == 1.0


def test_worker_count_reports_byte_identical(tmp_path):
    """Same inputs, workers 1 vs 8: identical bytes in every report."""
    feed = synthetic_feed(
        "determinism", n_stops=1000, n_routes=80, stops_per_route=30, grid=5, seed=11
    )
    canonical = tmp_path / "synth.json"
    save_canonical(feed, canonical)
    outputs = {}
    for workers in ("1", "8"):
        out = tmp_path / f"reports-{workers}"
        code = main(
            ["metrics", "--canonical", str(canonical), "--space", "p", "--metrics", "all",
             "--workers", workers, "--out", str(out)]
        )
        assert code == 0
        outputs[workers] = {p.name: p.read_bytes() for p in sorted(out.iterdir())}
    assert outputs["1"].keys() == outputs["8"].keys()
    assert len(outputs["1"]) == 10  # five metrics, JSON + CSV each
    for name in outputs["1"]:
        assert outputs["1"][name] == outputs["8"][name], f"{name} differs between worker counts"


def test_compare_writes_table_and_json(fig3_canonical, fig1_canonical, tmp_path, capsys):
    out = tmp_path / "cmp"
    code = main(
        ["compare", str(fig3_canonical), str(fig1_canonical), "--thresholds", "1,2,3",
         "--out", str(out)]
    )
    assert code == 0
    stdout = capsys.readouterr().out
    assert stdout == (out / "comparison.txt").read_text()
    doc = json.loads((out / "comparison.json").read_text())
    rows = {q["name"]: q for q in doc["quantities"]}
    assert rows["routes"]["value_a"] == 5
    assert rows["routes"]["value_b"] == 3
    assert rows["routes"]["percent_change"] == pytest.approx(-40.0)
    assert rows["routes"]["direction"] == "down"
    assert "cs2_giant_size" in rows and "cs3_giant_fraction" in rows
    routes_line = next(
        line for line in (out / "comparison.txt").read_text().splitlines()
        if line.startswith("routes")
    )
    assert routes_line.split() == ["routes", "5", "3", "-40.00%", "↓"]


def test_compare_identical_snapshots_all_flat(fig1_canonical, tmp_path):
    out = tmp_path / "same"
    assert main(["compare", str(fig1_canonical), str(fig1_canonical), "--out", str(out)]) == 0
    table = (out / "comparison.txt").read_text()
    assert all(line.split()[-1] == "-" for line in table.splitlines()[1:])


def test_compare_three_threshold_rows(fig3_canonical, fig1_canonical, tmp_path):
    out = tmp_path / "cmp3"
    main(["compare", str(fig3_canonical), str(fig1_canonical), "--thresholds", "1,2,3",
          "--out", str(out)])
    doc = json.loads((out / "comparison.json").read_text())
    names = [q["name"] for q in doc["quantities"]]
    assert [n for n in names if n.endswith("_giant_size") and n.startswith("cs")] == [
        "cs1_giant_size", "cs2_giant_size", "cs3_giant_size"
    ]


def test_compare_load_failure_exits_2(fig1_canonical, tmp_path, capsys):
    code = main(["compare", str(fig1_canonical), str(tmp_path / "absent.json"),
                 "--out", str(tmp_path / "cmp")])
    assert code == 2
    assert capsys.readouterr().err.startswith("error:")


def test_export_metric_csv_roundtrip(fig1_canonical, tmp_path):
    reports = tmp_path / "reports"
    main(["metrics", "--canonical", str(fig1_canonical), "--space", "p", "--metrics", "degree",
          "--out", str(reports)])
    out = tmp_path / "hot.geojson"
    code = main(
        ["export", "--canonical", str(fig1_canonical), "--metric-csv", str(reports / "degree.csv"),
         "--threshold", "8", "--out", str(out)]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert [f["properties"]["stop_id"] for f in doc["features"]] == ["3", "5"]
    assert doc["features"][0]["properties"]["degree"] == 9.0


def test_export_route_intensity(fig1_canonical, tmp_path):
    out = tmp_path / "intensity.geojson"
    code = main(
        ["export", "--canonical", str(fig1_canonical), "--routes", "A,B,C", "--out", str(out)]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert len(doc["features"]) == 5


def test_export_empty_routes_exits_2(fig1_canonical, tmp_path, capsys):
    code = main(["export", "--canonical", str(fig1_canonical), "--routes", " , ",
                 "--out", str(tmp_path / "x.geojson")])
    assert code == 2
    assert "route list" in capsys.readouterr().err


def test_export_unknown_route_exits_2(fig1_canonical, tmp_path):
    code = main(["export", "--canonical", str(fig1_canonical), "--routes", "A,NOPE",
                 "--out", str(tmp_path / "x.geojson")])
    assert code == 2


def test_usage_error_exits_2():
    assert main(["build", "--space", "q"]) == 2
    assert main([]) == 2
