import csv
import io
import json

import pytest

from physarum.engine import SolverConfig, run
from physarum.dpath import DPathStable
from physarum.errors import Unconfirmed
from physarum.graph import dijkstra, gen_complete
from physarum.harness import (
    DATA_SET_1,
    RUN_COLUMNS,
    SUCCESS_COLUMNS,
    TIMING_COLUMNS,
    dataset_graph,
    emit_report,
    render_report,
    run_instances,
    run_success_suite,
    run_tpoint_eval,
)


def drop_timing(text):
    rows = list(csv.reader(io.StringIO(text)))
    keep = [i for i, name in enumerate(rows[0]) if name not in TIMING_COLUMNS]
    return [[row[i] for i in keep] for row in rows]


@pytest.fixture(scope="module")
def small_suite():
    return run_success_suite([5, 10], 6, ["eps=1e-2", "k=5", "k=30"], seed=3, budget=500)


def test_suite_shape_and_order(small_suite):
    assert [(r.size, r.criterion) for r in small_suite.rows] == [
        (5, "eps=0.01"),
        (5, "k=5"),
        (5, "k=30"),
        (10, "eps=0.01"),
        (10, "k=5"),
        (10, "k=30"),
    ]
    assert len(small_suite.records) == 2 * 6 * 3


def test_suite_accounting(small_suite):
    for row in small_suite.rows:
        assert row.successes + row.failed + row.budget_exhausted == row.total == 6
        assert row.success_rate == row.successes / 6


def test_suite_budget_records(small_suite):
    for r in small_suite.records:
        if r.terminated_by == "budget":
            assert r.iterations_used == 500
        if r.success:
            assert r.final_length == r.oracle_length


def test_success_runs_cross_check_with_dijkstra(small_suite):
    for r in small_suite.records:
        g = gen_complete(r.size, 1, 10000, r.seed)
        assert r.oracle_length == dijkstra(g).length
        if r.final_path is not None:
            assert g.path_length(r.final_path) == r.final_length >= r.oracle_length


def test_means_use_successes_only(small_suite):
    for row in small_suite.rows:
        its = [r.iterations_used for r in small_suite.records if (r.size, r.criterion) == (row.size, row.criterion) and r.success]
        assert row.mean_iterations == pytest.approx(sum(its) / len(its))


def test_two_node_suite_always_succeeds():
    table = run_success_suite([2], 1, ["eps=1e-1", "k=5", "k=30"], seed=0)
    assert all(row.success_rate == 1.0 for row in table.rows)


def test_suite_is_reproducible_and_job_independent(small_suite):
    again = run_success_suite([5, 10], 6, ["eps=1e-2", "k=5", "k=30"], seed=3, budget=500, jobs=2)
    assert drop_timing(render_report(again, "csv")) == drop_timing(render_report(small_suite, "csv"))
    assert drop_timing(render_report(again.records, "csv")) == drop_timing(render_report(small_suite.records, "csv"))


def test_different_master_seed_changes_graphs():
    a = run_success_suite([10], 2, ["k=5"], seed=1)
    b = run_success_suite([10], 2, ["k=5"], seed=2)
    assert [r.seed for r in a.records] != [r.seed for r in b.records]


def test_success_csv_schema(small_suite):
    rows = list(csv.reader(io.StringIO(render_report(small_suite, "csv"))))
    assert rows[0] == SUCCESS_COLUMNS
    assert rows[0] == "size,criterion,success_rate,failed,budget_exhausted,mean_time_s,mean_iterations".split(",")
    assert len(rows) == 7


def test_runs_csv_schema(small_suite):
    rows = list(csv.reader(io.StringIO(render_report(small_suite.records, "csv"))))
    assert rows[0] == RUN_COLUMNS
    assert {r[5] for r in rows[1:]} <= {"criterion", "budget", "solver_failed"}


def test_trace_jsonl_schema(triangle, tmp_path):
    r = run(triangle, SolverConfig(), DPathStable(3))
    path = tmp_path / "t.jsonl"
    emit_report(r, "trace-jsonl", path)
    lines = [json.loads(x) for x in path.read_text().splitlines()]
    assert len(lines) == 4
    for i, obj in enumerate(lines, start=1):
        assert set(obj) == {"iteration", "dpath_length", "dpath_nodes", "sum_abs_delta_D", "elapsed_ns"}
        assert obj["iteration"] == i
        assert obj["dpath_nodes"] == [1, 3, 2] and obj["dpath_length"] == 7
        assert isinstance(obj["elapsed_ns"], int)


def test_json_report(small_suite):
    data = json.loads(render_report(small_suite, "json"))
    assert data["rows"][0]["criterion"] == "eps=0.01"
    assert "success_rate" in data["rows"][0]


def test_emit_twice_is_identical_apart_from_timing(small_suite, tmp_path):
    emit_report(small_suite, "csv", tmp_path / "a.csv")
    emit_report(small_suite, "csv", tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_emit_to_stream(small_suite):
    buf = io.StringIO()
    emit_report(small_suite, "csv", buf)
    assert buf.getvalue().startswith("size,criterion")


def test_emit_io_error_names_path(small_suite, tmp_path):
    target = tmp_path / "missing" / "x.csv"
    with pytest.raises(OSError, match="missing"):
        emit_report(small_suite, "csv", target)


def test_emit_unknown_format(small_suite):
    with pytest.raises(ValueError):
        emit_report(small_suite, "xml", io.StringIO())


def test_tpoint_eval_triangle(triangle):
    report = run_tpoint_eval(triangle, SolverConfig(), repeats=2, min_window=50)
    assert report.tpoint_iteration == 1
    assert report.confirmed
    assert [r.tpoint_iteration for r in report.runs] == [1, 1]
    assert report.runs[0].iterations_run == 51


def test_tpoint_eval_two_node(two_node):
    assert run_tpoint_eval(two_node).tpoint_iteration == 1


def test_tpoint_eval_unconfirmed(triangle):
    with pytest.raises(Unconfirmed) as info:
        run_tpoint_eval(triangle, SolverConfig(max_iterations=20), min_window=50)
    assert info.value.report.tpoint_iteration == 1
    assert not info.value.report.confirmed


@pytest.mark.parametrize("seed", range(3))
def test_tpoint_eval_same_under_both_criteria(seed):
    g = gen_complete(20, 1, 10000, seed)
    a = run_tpoint_eval(g, SolverConfig(), criterion="eps=1e-2")
    b = run_tpoint_eval(g, SolverConfig(), criterion="k=10")
    assert a.tpoint_iteration == b.tpoint_iteration


def test_tpoint_csv(triangle):
    rows = list(csv.reader(io.StringIO(render_report(run_tpoint_eval(triangle), "csv"))))
    assert rows[0][:3] == ["run", "tpoint_iteration", "confirmed"]
    assert rows[1][1:3] == ["1", "true"]


def test_dataset_table():
    assert DATA_SET_1["Da-Com-1"] == ("complete", 50)
    assert DATA_SET_1["Da-SW-2"] == ("sw", 100, 12)
    assert dataset_graph("Da-Com-1", seed=1).edge_count == 1225
    assert dataset_graph("Da-SW-1", seed=1).edge_count == 150


def test_run_instances():
    graphs = {"Da-Com-1": dataset_graph("Da-Com-1", seed=2), "Da-SW-1": dataset_graph("Da-SW-1", seed=2)}
    records = run_instances(graphs, ["eps=1e-2", "eps=1e-5", "k=10"], repeats=2)
    assert len(records) == 2 * 2 * 3
    assert all(r.success for r in records)
