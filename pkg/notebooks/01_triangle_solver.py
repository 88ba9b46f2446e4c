# %% [markdown]
# # One iteration by hand on the triangle
#
# Three nodes, source 1, sink 2. The direct edge 1-2 has length 10, the
# detour 1-3-2 has length 3 + 4 = 7. Every conductivity starts at 0.5.

# %%
import numpy as np

from physarum import SolverConfig, build_graph, init_state, run, step
from physarum.dpath import DPathStable
from physarum.engine import compute_flux
from physarum.laplacian import assemble_grounded_system, solve_pressures

g = build_graph(3, [(1, 2, 10), (1, 3, 3), (3, 2, 4)], 1, 2)
d = np.full(g.edge_count, 0.5)

# %% [markdown]
# Node 1 is grounded, leaving a 2x2 system for p2 and p3.

# %%
s = assemble_grounded_system(g, d, 1.0)
print(s.matrix)
print(s.rhs)

# %%
p = solve_pressures(g, d, 1.0)
q = compute_flux(g, d, p)
print("p  =", p)          # 0, 140/17, 60/17
print("|Q|=", np.abs(q))  # 7/17, 10/17, 10/17

# %% [markdown]
# The detour carries more flow, so its tubes thicken and the direct edge
# thins out.

# %%
state, entry = step(g, init_state(g))
print("D' =", state.conductivities)
print("D-Path", entry.dpath_nodes, "length", entry.dpath_length)
print("sum |dD| =", entry.sum_abs_delta_D)

# %%
r = run(g, SolverConfig(), DPathStable(10))
print(r.terminated_by, "after", r.iterations, "iterations:", r.final_path)
for e in r.trace[:5]:
    print(e.iteration, e.dpath_nodes, f"{e.sum_abs_delta_D:.3e}")
