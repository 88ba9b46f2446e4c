"""Experiment drivers: criterion sweeps, T-Point evaluation, report writers.

Wall-clock figures are measured with a monotonic clock around the solver
loop only (graph generation, the oracle and report I/O are excluded).  They
are informational; everything else in a report is a pure function of the
master seed.
"""

import csv
import io
import json
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, is_dataclass
from typing import Optional

import numpy as np

from .dpath import parse_criterion
from .engine import RunResult, SolverConfig, TraceEntry, init_state, run_criteria, step
from .errors import Unconfirmed
from .graph import dijkstra, gen_complete, gen_small_world
from .rng import derive_seed

SUCCESS_COLUMNS = ["size", "criterion", "success_rate", "failed", "budget_exhausted", "mean_time_s", "mean_iterations"]
RUN_COLUMNS = [
    "size",
    "criterion",
    "graph_index",
    "seed",
    "iterations",
    "terminated_by",
    "final_length",
    "oracle_length",
    "success",
    "wall_time_s",
]
TPOINT_COLUMNS = ["run", "tpoint_iteration", "confirmed", "time_to_tpoint_s", "iterations_run", "criterion_fired_at"]
TIMING_COLUMNS = {"mean_time_s", "wall_time_s", "time_to_tpoint_s", "elapsed_ns"}

# named benchmark instances: name -> generator arguments
DATA_SET_1 = {
    **{f"Da-Com-{i + 1}": ("complete", n) for i, n in enumerate([50, 100, 250, 500, 750, 1000, 2000, 5000])},
    **{
        f"Da-SW-{i + 1}": ("sw", n, k)
        for i, (n, k) in enumerate(
            [(50, 6), (100, 12), (250, 30), (500, 60), (750, 90), (1000, 120), (2000, 240), (5000, 600)]
        )
    },
}


def dataset_graph(name, seed=0, beta=0.15):
    kind, *args = DATA_SET_1[name]
    if kind == "complete":
        return gen_complete(args[0], 1, 10000, seed)
    return gen_small_world(args[0], args[1], beta, 1, 10000, seed)


@dataclass
class RunRecord:
    graph_id: str
    size: int
    graph_index: int
    seed: int
    config: SolverConfig
    criterion: str
    iterations_used: int
    terminated_by: str
    final_path: Optional[tuple]
    final_length: Optional[float]
    oracle_length: float
    wall_time: float
    trace: Optional[list] = None
    error: Optional[str] = None

    @property
    def success(self):
        return self.terminated_by == "criterion" and self.final_length == self.oracle_length

    @property
    def outcome(self):
        if self.success:
            return "success"
        if self.terminated_by == "budget":
            return "budget_exhausted"
        return "failed"


@dataclass
class SuccessRow:
    size: int
    criterion: str
    total: int
    successes: int
    failed: int
    budget_exhausted: int
    mean_time_s: float
    mean_iterations: float

    @property
    def success_rate(self):
        return self.successes / self.total if self.total else math.nan


@dataclass
class SuccessTable:
    rows: list
    records: list = field(default_factory=list)

    def cell(self, size, criterion):
        label = criterion if isinstance(criterion, str) else criterion.label
        label = parse_criterion(label).label
        for row in self.rows:
            if row.size == size and row.criterion == label:
                return row
        raise KeyError((size, criterion))


def record_from_result(result: RunResult, *, graph_id, size, index, seed, config, criterion, oracle, keep_trace):
    return RunRecord(
        graph_id=graph_id,
        size=size,
        graph_index=index,
        seed=seed,
        config=config,
        criterion=criterion,
        iterations_used=result.iterations,
        terminated_by=result.terminated_by,
        final_path=None if result.final_path is None else result.final_path.nodes,
        final_length=result.final_length,
        oracle_length=oracle,
        wall_time=result.wall_time,
        trace=list(result.trace) if keep_trace else None,
        error=result.error,
    )


def _suite_job(args):
    size, index, master_seed, labels, config, keep_trace = args
    seed = derive_seed(master_seed, size, index)
    g = gen_complete(size, 1, 10000, seed)
    oracle = dijkstra(g).length
    results = run_criteria(g, config, [parse_criterion(x) for x in labels], keep_trace=keep_trace, record_errors=True)
    return [
        record_from_result(
            r,
            graph_id=f"complete-n{size}-g{index}",
            size=size,
            index=index,
            seed=seed,
            config=config,
            criterion=label,
            oracle=oracle,
            keep_trace=keep_trace,
        )
        for label, r in zip(labels, results)
    ]


def _aggregate(size, label, recs):
    ok = [r for r in recs if r.success]
    return SuccessRow(
        size=size,
        criterion=label,
        total=len(recs),
        successes=len(ok),
        failed=sum(r.outcome == "failed" for r in recs),
        budget_exhausted=sum(r.outcome == "budget_exhausted" for r in recs),
        mean_time_s=float(np.mean([r.wall_time for r in ok])) if ok else math.nan,
        mean_iterations=float(np.mean([r.iterations_used for r in ok])) if ok else math.nan,
    )


def run_success_suite(
    sizes, graphs_per_size, criteria_list, seed=0, budget=10000, config=None, jobs=1, keep_trace=False
):
    """Criterion sweep over random complete graphs (weights 1..10000).

    Graph ``i`` of size ``n`` is generated from ``derive_seed(seed, n, i)``.
    Every criterion is evaluated on the same trajectory of every graph; a run
    succeeds when its criterion fired and the D-Path length at that moment
    equals the Dijkstra length.  Rows come out in (size, criterion) order of
    the arguments regardless of ``jobs``.
    """
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if graphs_per_size < 1:
        raise ValueError("graphs_per_size must be >= 1")
    config = config or SolverConfig()
    if budget is not None:
        config = SolverConfig(**{**asdict(config), "max_iterations": budget})
    labels = [(c if isinstance(c, str) else c.label) for c in criteria_list]
    labels = [parse_criterion(x).label for x in labels]
    tasks = [(n, i, seed, labels, config, keep_trace) for n in sizes for i in range(graphs_per_size)]
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(_suite_job, tasks))
    else:
        batches = [_suite_job(t) for t in tasks]
    records = [r for batch in batches for r in batch]

    rows = []
    for n in sizes:
        for label in labels:
            rows.append(_aggregate(n, label, [r for r in records if r.size == n and r.criterion == label]))
    return SuccessTable(rows, records)


def run_instances(graphs, criteria_list, config=None, repeats=1):
    """Run each criterion ``repeats`` times on every named graph.

    ``graphs`` maps an instance name to a Graph.  Returns RunRecords in
    (instance, repeat, criterion) order; only the timings vary by repeat.
    """
    config = config or SolverConfig()
    labels = [parse_criterion(c if isinstance(c, str) else c.label).label for c in criteria_list]
    records = []
    for name, g in graphs.items():
        oracle = dijkstra(g).length
        for rep in range(repeats):
            results = run_criteria(g, config, [parse_criterion(x) for x in labels], keep_trace=False, record_errors=True)
            records.extend(
                record_from_result(
                    r,
                    graph_id=name,
                    size=g.node_count,
                    index=rep,
                    seed=0,
                    config=config,
                    criterion=label,
                    oracle=oracle,
                    keep_trace=False,
                )
                for label, r in zip(labels, results)
            )
    return records


@dataclass
class TPointRun:
    tpoint_iteration: Optional[int]
    time_to_tpoint: Optional[float]
    confirmed: bool
    iterations_run: int
    criterion_fired_at: Optional[int] = None


@dataclass
class TPointReport:
    oracle_length: float
    min_window: int
    runs: list

    @property
    def tpoint_iteration(self):
        return self.runs[0].tpoint_iteration

    @property
    def confirmed(self):
        return all(r.confirmed for r in self.runs)

    @property
    def mean_time_to_tpoint(self):
        times = [r.time_to_tpoint for r in self.runs if r.time_to_tpoint is not None]
        return float(np.mean(times)) if times else math.nan


def _tpoint_once(graph, config, oracle, min_window, criterion):
    if criterion is not None:
        criterion.reset()
    fired = None
    watch = None
    confirmed = False
    state = init_state(graph, config)
    start = time.perf_counter_ns()
    while state.iteration < config.max_iterations:
        state, entry = step(graph, state, config)
        now = (time.perf_counter_ns() - start) / 1e9
        if criterion is not None and fired is None and criterion.update(entry):
            fired = entry.iteration
        if entry.dpath_length == oracle:
            if watch is None:
                watch = (entry.iteration, now)
            elif entry.iteration - watch[0] >= min_window:
                confirmed = True
                break
        else:
            watch = None
    if watch is None:
        return TPointRun(None, None, False, state.iteration, fired)
    return TPointRun(watch[0], watch[1], confirmed, state.iteration, fired)


def run_tpoint_eval(graph, config=None, repeats=1, min_window=50, criterion=None, oracle_length=None):
    """Measure the T-Point of ``graph`` while ignoring the termination criterion.

    Per repeat: take the oracle length, step the solver and start a watch the
    first time the D-Path length matches it; the watch is dropped whenever the
    match breaks, and the T-Point is confirmed once the match has held for
    ``min_window`` further iterations.  ``criterion`` (if given) is updated
    along the way only so its firing iteration can be reported.  Raises
    :class:`Unconfirmed`, carrying the report, if the budget ends first.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    config = config or SolverConfig()
    oracle = dijkstra(graph).length if oracle_length is None else oracle_length
    if isinstance(criterion, str):
        criterion = parse_criterion(criterion)
    report = TPointReport(oracle, min_window, [])
    for _ in range(repeats):
        report.runs.append(_tpoint_once(graph, config, oracle, min_window, criterion))
    if not report.confirmed:
        raise Unconfirmed(
            f"T-Point not confirmed within {config.max_iterations} iterations (window {min_window})", report
        )
    return report


def _fmt(value, digits=6):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return ""
    if value.is_integer() and abs(value) < 2**53:
        return str(int(value))
    return f"{value:.{digits}f}"


def _fixed(value, digits):
    return "" if value is None or math.isnan(value) else f"{value:.{digits}f}"


def _csv_rows(report):
    if isinstance(report, SuccessTable):
        yield SUCCESS_COLUMNS
        for r in report.rows:
            yield [
                r.size,
                r.criterion,
                f"{r.success_rate:.4f}",
                r.failed,
                r.budget_exhausted,
                _fixed(r.mean_time_s, 6),
                _fixed(r.mean_iterations, 4),
            ]
    elif isinstance(report, TPointReport):
        yield TPOINT_COLUMNS
        for i, r in enumerate(report.runs):
            yield [i, _fmt(r.tpoint_iteration), _fmt(r.confirmed), _fixed(r.time_to_tpoint, 6), r.iterations_run, _fmt(r.criterion_fired_at)]
    else:
        records = list(report)
        if records and not isinstance(records[0], RunRecord):
            raise TypeError(f"no CSV schema for {type(records[0]).__name__}")
        yield RUN_COLUMNS
        for r in records:
            yield [
                r.size,
                r.criterion,
                r.graph_index,
                r.seed,
                r.iterations_used,
                r.terminated_by,
                _fmt(r.final_length),
                _fmt(r.oracle_length),
                _fmt(r.success),
                _fixed(r.wall_time, 6),
            ]


def _jsonable(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        out = {k: _jsonable(v) for k, v in vars(obj).items()}
        for prop in ("success_rate", "success", "outcome", "tpoint_iteration", "confirmed"):
            if hasattr(type(obj), prop) and isinstance(getattr(type(obj), prop), property):
                out[prop] = _jsonable(getattr(obj, prop))
        return out
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return None if math.isnan(obj) else float(obj)
    return obj


def trace_line(entry: TraceEntry):
    return json.dumps(
        {
            "iteration": entry.iteration,
            "dpath_length": entry.dpath_length,
            "dpath_nodes": None if entry.dpath_nodes is None else list(entry.dpath_nodes),
            "sum_abs_delta_D": entry.sum_abs_delta_D,
            "elapsed_ns": int(entry.elapsed_ns),
        }
    )


def render_report(report, fmt):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(_csv_rows(report))
        return buf.getvalue()
    if fmt == "json":
        return json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"
    if fmt == "trace-jsonl":
        trace = report.trace if hasattr(report, "trace") else report
        return "".join(trace_line(e) + "\n" for e in trace)
    raise ValueError(f"unknown report format {fmt!r}; expected csv, json or trace-jsonl")


def atomic_write_text(path, text):
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=folder)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write report to {path}: {exc.strerror or exc}") from exc


def emit_report(report, fmt, destination):
    """Write ``report`` as csv, json or trace-jsonl.

    ``destination`` is a path (written to a temp file and renamed into place)
    or an open text stream.
    """
    text = render_report(report, fmt)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        atomic_write_text(destination, text)
