# %% [markdown]
# # Road networks in TNTP format
#
# Sioux-Falls ships with the tests. Directed link pairs are merged into one
# undirected edge carrying the smaller length.

# %%
import os

from physarum import SolverConfig, dijkstra, run
from physarum.dpath import DPathStable
from physarum.io import parse_tntp, parse_tntp_links

path = os.path.join(os.path.dirname(os.path.abspath("__file__")), "..", "tests", "data", "SiouxFalls_net.tntp")
text = open(path).read()
links = parse_tntp_links(text)
print(links.node_count, "nodes,", len(links.links), "links")
print(links.metadata)

# %%
g = parse_tntp(text, source=1, sink=24)
print(g.node_count, "nodes,", g.edge_count, "undirected edges")

# %%
r = run(g, SolverConfig(), DPathStable(30))
print("physarum", r.final_path.nodes, r.final_length, "in", r.iterations, "iterations")
print("dijkstra", dijkstra(g).nodes, dijkstra(g).length)
