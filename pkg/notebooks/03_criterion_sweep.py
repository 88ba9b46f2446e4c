# %% [markdown]
# # Stopping rules compared
#
# Random complete graphs, weights 1..10000, 50 per size. All criteria ride
# on the same trajectory of each graph, so differences come only from where
# each rule stops.

# %%
from physarum.harness import render_report, run_success_suite

criteria = ["eps=1e-1", "eps=1e-2", "eps=1e-5", "k=5", "k=10", "k=30"]
table = run_success_suite([10, 100], 50, criteria, seed=0)
print(render_report(table, "csv"))

# %% [markdown]
# Iterations grow much faster when eps shrinks than when K grows.

# %%
m = {c: table.cell(100, c).mean_iterations for c in ("eps=0.1", "eps=1e-05", "k=5", "k=30")}
print("eps 1e-5 / 1e-1:", m["eps=1e-05"] / m["eps=0.1"])
print("k 30 / 5:      ", m["k=30"] / m["k=5"])

# %% [markdown]
# The misses are near-ties: a path 1 or 2 units longer than the optimum
# holds the D-Path for more iterations than the rule waits.

# %%
for r in table.records:
    if r.size == 100 and r.criterion in ("k=30", "eps=0.01") and not r.success:
        print(r.criterion, r.graph_index, r.terminated_by, r.final_length, r.oracle_length)
