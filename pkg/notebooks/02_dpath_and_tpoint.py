# %% [markdown]
# # D-Path traces and the T-Point
#
# The D-Path length usually hits the shortest length long before the
# conductivities stop moving. The T-Point is the first iteration after
# which it never leaves it again.

# %%
from physarum import SolverConfig, dijkstra, gen_complete, run
from physarum.dpath import EpsilonDeltaD, detect_tpoint
from physarum.harness import run_tpoint_eval

g = gen_complete(5, 1, 10000, seed=3)
best = dijkstra(g)
print("dijkstra", best.nodes, best.length)

# %%
r = run(g, SolverConfig(), EpsilonDeltaD(1e-3))
for e in r.trace[:: max(1, len(r.trace) // 15)]:
    print(f"{e.iteration:4d}  {e.dpath_length:8.0f}  {e.sum_abs_delta_D:.2e}")
print("eps=1e-3 stops at", r.iterations)

# %%
tp = detect_tpoint(r.trace, best.length, min_window=1)
report = run_tpoint_eval(g, SolverConfig(), min_window=50)
print("T-Point on the eps trace:", tp.tpoint_iteration)
print("T-Point by the 50-iteration protocol:", report.tpoint_iteration, report.confirmed)

# %% [markdown]
# Over 20 graphs the gap between T-Point and the eps stop is large.

# %%
for seed in range(20):
    g = gen_complete(5, 1, 10000, seed)
    stop = run(g, SolverConfig(), EpsilonDeltaD(1e-3), keep_trace=False).iterations
    tpi = run_tpoint_eval(g, SolverConfig()).tpoint_iteration
    print(seed, tpi, stop)
