"""Command-line front end: ``physarum {gen,solve,bench,tpoint}``.

Exit codes: 0 ok, 2 usage/validation, 3 I/O, 4 not terminated or T-Point
unconfirmed, 5 numerical failure.
"""

import argparse
import json
import os
import sys

from .dpath import parse_criterion
from .engine import SolverConfig, run
from .errors import GraphError, SolveFailed, Unconfirmed
from .graph import gen_complete, gen_small_world
from .harness import atomic_write_text, emit_report, render_report, run_success_suite, run_tpoint_eval
from .io import emit_edge_list, read_graph

STDOUT_FORMAT = 1

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NOT_TERMINATED, EXIT_NUMERICAL = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _fmt_num(x):
    if x is None:
        return "none"
    x = float(x)
    return str(int(x)) if x.is_integer() else repr(x)


def _common(p, graph_source=True):
    p.add_argument("--seed", type=int, default=0, help="master seed for generated graphs (default 0)")
    p.add_argument("--in0", type=float, default=1.0, help="inflow magnitude IN0")
    p.add_argument("--dt", type=float, default=1.0, help="adaptation time step")
    p.add_argument("--init-d", type=float, default=0.5, help="initial conductivity")
    p.add_argument("--budget", type=int, default=10000, help="iteration budget")
    p.add_argument("--tol", type=float, default=1e-10, help="linear-solve residual bound")
    p.add_argument("--source", type=int, default=None)
    p.add_argument("--sink", type=int, default=None)
    p.add_argument("-o", "--out", default=None)
    p.add_argument("--config", default=None, help="JSON file whose keys mirror these flags")
    if graph_source:
        p.add_argument("graph", nargs="?", default=None, help="edge-list file (same as --graph)")
        p.add_argument("--graph", dest="graph_file", default=None, help="edge-list file")
        p.add_argument("--tntp", default=None, help="TNTP network file")
        p.add_argument("--weight-col", default="length", help="TNTP column used as edge length")
        p.add_argument(
            "--gen", default=None, help="generator spec, e.g. complete:n=10 or sw:n=50,degree=6,beta=0.15"
        )


def build_parser():
    parser = argparse.ArgumentParser(prog="physarum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random graph as an edge list")
    gen.add_argument("kind", choices=["complete", "sw"])
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--degree", type=int, default=None, help="mean degree (sw only)")
    gen.add_argument("--beta", type=float, default=0.15, help="rewiring probability (sw only)")
    gen.add_argument("--wmin", type=int, default=1)
    gen.add_argument("--wmax", type=int, default=10000)
    _common(gen, graph_source=False)

    solve = sub.add_parser("solve", help="run the solver on one graph")
    solve.add_argument("--criterion", required=True, help="eps=<real> or k=<int>")
    solve.add_argument("--trace", default=None, help="write the per-iteration trace as JSON lines")
    _common(solve)

    bench = sub.add_parser("bench", help="criterion sweep over random complete graphs")
    bench.add_argument("--sizes", default="10,100")
    bench.add_argument("--count", type=int, default=50)
    bench.add_argument("--criteria", default="eps=1e-2,k=30")
    bench.add_argument("--jobs", type=int, default=1)
    _common(bench, graph_source=False)

    tp = sub.add_parser("tpoint", help="measure the T-Point of one graph")
    tp.add_argument("--window", type=int, default=50)
    tp.add_argument("--repeats", type=int, default=1)
    tp.add_argument("--criterion", default=None, help="criterion tracked alongside (reporting only)")
    _common(tp)
    return parser


def _config(args):
    try:
        return SolverConfig(
            in0=args.in0,
            delta_t=args.dt,
            initial_d=args.init_d,
            linear_tolerance=args.tol,
            max_iterations=args.budget,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_gen_spec(spec, seed):
    kind, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"bad generator parameter {item!r}")
        params[key.strip()] = value.strip()
    try:
        if kind == "complete":
            return gen_complete(int(params["n"]), 1, 10000, seed)
        if kind == "sw":
            return gen_small_world(
                int(params["n"]), int(params["degree"]), float(params.get("beta", 0.15)), 1, 10000, seed
            )
    except KeyError as exc:
        raise UsageError(f"generator spec {spec!r} lacks {exc.args[0]}") from None
    raise UsageError(f"unknown generator {kind!r}")


def _load_graph(args):
    sources = [x for x in (args.graph, args.graph_file, args.tntp, args.gen) if x is not None]
    if len(sources) != 1:
        raise UsageError("give exactly one graph source (edge-list path, --tntp or --gen)")
    if args.tntp:
        col = int(args.weight_col) if args.weight_col.isdigit() else args.weight_col
        g = read_graph(args.tntp, "tntp", weight_column=col)
    elif args.gen:
        g = _parse_gen_spec(args.gen, args.seed)
    else:
        g = read_graph(args.graph or args.graph_file)
    if args.source is not None or args.sink is not None:
        g = g.with_terminals(args.source or g.source, args.sink or g.sink)
    return g


def _criterion(text):
    try:
        return parse_criterion(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_gen(args, out):
    try:
        if args.kind == "complete":
            g = gen_complete(args.n, args.wmin, args.wmax, args.seed, args.source or 1, args.sink or 2)
        else:
            if args.degree is None:
                raise UsageError("gen sw needs --degree")
            g = gen_small_world(
                args.n, args.degree, args.beta, args.wmin, args.wmax, args.seed, args.source or 1, args.sink or 2
            )
    except (ValueError, GraphError) as exc:
        raise UsageError(str(exc)) from None
    text = emit_edge_list(g)
    if args.out:
        atomic_write_text(args.out, text)
        print(f"nodes: {g.node_count}", file=out)
        print(f"edges: {g.edge_count}", file=out)
    else:
        out.write(text)
    return EXIT_OK


def cmd_solve(args, out):
    criterion = _criterion(args.criterion)
    config = _config(args)
    g = _load_graph(args)
    result = run(g, config, criterion)
    if args.trace:
        emit_report(result.trace, "trace-jsonl", args.trace)
    path = result.final_path
    print(f"format: {STDOUT_FORMAT}", file=out)
    print("path: " + (" ".join(map(str, path.nodes)) if path else "none"), file=out)
    print(f"length: {_fmt_num(result.final_length)}", file=out)
    print(f"iterations: {result.iterations}", file=out)
    print(f"terminated_by: {result.terminated_by}", file=out)
    return EXIT_OK if result.terminated_by == "criterion" else EXIT_NOT_TERMINATED


def _split(text, conv):
    try:
        return [conv(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_bench(args, out):
    sizes = _split(args.sizes, int)
    criteria = [_criterion(x) for x in _split(args.criteria, str)]
    if not sizes or not criteria or args.count < 1 or any(n < 2 for n in sizes):
        raise UsageError("bench needs sizes >= 2, at least one criterion and --count >= 1")
    config = _config(args)
    table = run_success_suite(sizes, args.count, criteria, args.seed, args.budget, config, jobs=args.jobs)
    folder = args.out or "."
    os.makedirs(folder, exist_ok=True)
    emit_report(table, "csv", os.path.join(folder, "success.csv"))
    emit_report(table.records, "csv", os.path.join(folder, "runs.csv"))
    print(f"format: {STDOUT_FORMAT}", file=out)
    out.write(render_report(table, "csv"))
    return EXIT_OK


def cmd_tpoint(args, out):
    if args.window < 1 or args.repeats < 1:
        raise UsageError("--window and --repeats must be >= 1")
    config = _config(args)
    criterion = _criterion(args.criterion) if args.criterion else None
    g = _load_graph(args)
    code = EXIT_OK
    try:
        report = run_tpoint_eval(g, config, args.repeats, args.window, criterion)
    except Unconfirmed as exc:
        report = exc.report
        code = EXIT_NOT_TERMINATED
    if args.out:
        emit_report(report, "csv", args.out)
    print(f"format: {STDOUT_FORMAT}", file=out)
    print(f"optimal_length: {_fmt_num(report.oracle_length)}", file=out)
    print(f"tpoint_iteration: {report.tpoint_iteration if report.tpoint_iteration is not None else 'none'}", file=out)
    print(f"confirmed: {'yes' if report.confirmed else 'no'}", file=out)
    print(f"time_to_tpoint: {report.mean_time_to_tpoint:.6f}", file=out)
    return code


COMMANDS = {"gen": cmd_gen, "solve": cmd_solve, "bench": cmd_bench, "tpoint": cmd_tpoint}


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                defaults = {k.replace("-", "_"): v for k, v in json.load(fh).items()}
        except OSError as exc:
            print(f"physarum: cannot read config: {exc}", file=sys.stderr)
            return EXIT_IO
        except json.JSONDecodeError as exc:
            print(f"physarum: bad config {args.config}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        # command-line flags still win over the file
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, GraphError, ValueError) as exc:
        print(f"physarum: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"physarum: {exc}", file=sys.stderr)
        return EXIT_IO
    except SolveFailed as exc:
        print(f"physarum: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
