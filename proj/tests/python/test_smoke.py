"""Smoke tests for the Python bindings against values with known answers."""

import json
import math
import os

import pytest

import finex

GOLDEN = os.environ.get("FINEX_GOLDEN_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data", "golden"))


def test_distance():
    assert finex.distance((0, 0), (3, 4)) == 5.0
    assert finex.distance((7, 7), (7, 7)) == 0.0


def test_points_within_boundary_inclusive():
    pts = [(0, 499), (0, 500), (0, 501)]
    assert finex.points_within((0, 0), 500.0, pts) == [0, 1]
    with pytest.raises(finex.FinexError):
        finex.points_within((0, 0), 0.0, pts)


def test_nearest_neighbor():
    idx, dist = finex.nearest_neighbor(2, [(0, 0), (200, 0), (600, 0)])
    assert idx == 1
    assert dist == 400.0


def test_avcash_published_rows():
    assert finex.avcash({"free_atm": 1, "cashback": 1, "charging_atm": 1}) == 3.0
    assert finex.avcash({"free_atm": 1, "post_office": 1, "cashback": 2, "charging_atm": 1}) == 5.5
    assert finex.avcash({"free_atm": 3, "branch": 1, "cashback": 1}) == 10.5


def test_score_table_defaults():
    table = finex.default_score_table()
    assert table["free_atm"] == 3.0
    assert table["charging_atm"] == -0.5
    assert table["paypoint"] == 0.0
    assert table["recycler"] == 4.0


def test_lonely_atms():
    atms = [("free_atm", 0, 0), ("free_atm", 200, 0), ("free_atm", 600, 0)]
    flags = finex.lonely_atms(atms, threshold=250.0)
    assert [f["lonely"] for f in flags] == [False, False, True]
    assert flags[2]["nn_distance_m"] == 400.0


def test_nn_stats_lattice():
    k, s = 6, 10.0
    pts = [(i * s, j * s) for i in range(k) for j in range(k)]
    area = ((k - 1) * s) ** 2
    stats = finex.nn_stats(pts, area)
    assert math.isclose(stats["nni"], 2 * k / (k - 1), rel_tol=1e-12)
    assert stats["z_score"] > 0


def test_polarity():
    out = finex.align_polarity(
        {
            "claimant_pct": 30.0,
            "median_income": 12000.0,
            "rented_or_shared_pct": 55.0,
            "lone_parent_pct": 9.0,
            "iuc_score": 10,
            "car_access_pct": 40.0,
            "lonely_count": 2,
        }
    )
    assert out["claimant"] == 70.0
    assert out["iuc"] == 1.0
    assert out["loneliness"] == -2.0


def test_minmax():
    values, degenerate = finex.minmax([2.0, 4.0, 6.0], 2.0, 6.0)
    assert values == [0.0, 0.5, 1.0]
    assert not degenerate
    _, degenerate = finex.minmax([5.0, 5.0], 5.0, 5.0)
    assert degenerate


def test_weights_and_aggregate():
    w = finex.default_weights()
    assert round(100 * w["avcash"], 2) == 26.67
    assert math.isclose(sum(w.values()), 1.0, abs_tol=1e-9)
    assert finex.aggregate({name: 1.0 for name in w}) == pytest.approx(100.0)
    mid = {name: 0.5 for name in w}
    mid["loneliness"] = 1.0
    assert finex.aggregate(mid) == pytest.approx(800.0 / 15.0, abs=1e-9)


def test_jenks():
    r = finex.jenks_breaks([1, 2, 3, 10, 11, 12], 2)
    assert r["labels"] == [1, 1, 1, 2, 2, 2]
    with pytest.raises(finex.FinexError):
        finex.jenks_breaks([1.0, 1.0], 2)


def test_rank_and_compare():
    medians = {f"W{i}": float(i) for i in range(1, 21)}
    identical = {f"W{i}": float(i) for i in range(1, 21)}
    reversed_ranks = {f"W{i}": float(21 - i) for i in range(1, 21)}
    assert finex.rank_and_compare(medians, identical)["spearman"] == pytest.approx(1.0)
    assert finex.rank_and_compare(medians, reversed_ranks)["spearman"] == pytest.approx(-1.0)


def test_run_pipeline_golden(tmp_path):
    config = os.path.join(GOLDEN, "config.json")
    result = finex.run_pipeline(config, out_dir=str(tmp_path / "out"))
    assert result["n_areas"] == 10
    names = {os.path.basename(f) for f in result["files"]}
    assert {"catchments.csv", "nnstats.csv", "index.csv", "index.geojson",
            "validation.csv", "scenario_delta.csv", "scenario_delta.geojson",
            "run_report.json"} <= names

    with open(os.path.join(GOLDEN, "expected", "index.csv")) as f:
        header = f.readline().strip().split(",")
        for line in f:
            fields = dict(zip(header, line.strip().split(",")))
            area = result["areas"][fields["area_id"]]
            assert area["score"] == pytest.approx(float(fields["score"]), abs=1e-9)
            assert area["jenks_class"] == int(fields["jenks_class"])
