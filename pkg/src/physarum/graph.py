"""Undirected weighted graphs with a designated source and sink.

Node ids are 1-based everywhere in the public surface.  Edges are stored with
the smaller endpoint first, which also fixes the orientation used for signed
fluxes.  The numpy arrays hanging off a :class:`Graph` (``tail``, ``head``,
``weight`` and the CSR adjacency) use 0-based node indices.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from .errors import (
    DisconnectedGraph,
    DuplicateEdge,
    GenerationFailed,
    InvalidTerminal,
    NonPositiveWeight,
)
from .rng import SplitMix64

__all__ = [
    "Graph",
    "Path",
    "build_graph",
    "gen_complete",
    "gen_small_world",
    "dijkstra",
]


@dataclass(frozen=True)
class Graph:
    node_count: int
    edges: tuple
    source: int
    sink: int
    tail: np.ndarray = field(init=False, repr=False, compare=False)
    head: np.ndarray = field(init=False, repr=False, compare=False)
    weight: np.ndarray = field(init=False, repr=False, compare=False)
    adj_ptr: np.ndarray = field(init=False, repr=False, compare=False)
    adj_node: np.ndarray = field(init=False, repr=False, compare=False)
    adj_edge: np.ndarray = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = len(self.edges)
        tail = np.fromiter((e[0] - 1 for e in self.edges), dtype=np.int64, count=m)
        head = np.fromiter((e[1] - 1 for e in self.edges), dtype=np.int64, count=m)
        weight = np.fromiter((e[2] for e in self.edges), dtype=np.float64, count=m)

        # CSR adjacency, neighbours sorted by id inside every row
        ends = np.concatenate([tail, head])
        others = np.concatenate([head, tail])
        eidx = np.concatenate([np.arange(m), np.arange(m)])
        order = np.lexsort((others, ends))
        counts = np.bincount(ends, minlength=self.node_count)
        ptr = np.zeros(self.node_count + 1, dtype=np.int64)
        np.cumsum(counts, out=ptr[1:])

        for name, value in (
            ("tail", tail),
            ("head", head),
            ("weight", weight),
            ("adj_ptr", ptr),
            ("adj_node", others[order]),
            ("adj_edge", eidx[order]),
            ("_index", {(e[0], e[1]): i for i, e in enumerate(self.edges)}),
        ):
            if isinstance(value, np.ndarray):
                value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def edge_count(self):
        return len(self.edges)

    def degree(self, node):
        i = node - 1
        return int(self.adj_ptr[i + 1] - self.adj_ptr[i])

    def neighbors(self, node):
        """1-based neighbour ids of ``node`` in increasing order."""
        i = node - 1
        return [int(x) + 1 for x in self.adj_node[self.adj_ptr[i] : self.adj_ptr[i + 1]]]

    def edge_index(self, u, v):
        """Position of edge {u, v} in ``edges``; KeyError if absent."""
        return self._index[(u, v) if u < v else (v, u)]

    def has_edge(self, u, v):
        return ((u, v) if u < v else (v, u)) in self._index

    def path_length(self, nodes):
        return math.fsum(self.edges[self.edge_index(a, b)][2] for a, b in zip(nodes, nodes[1:]))

    def with_terminals(self, source, sink):
        return build_graph(self.node_count, self.edges, source, sink)


@dataclass(frozen=True)
class Path:
    nodes: tuple
    length: float

    @classmethod
    def from_nodes(cls, graph, nodes):
        """Validate ``nodes`` as a simple path of ``graph`` and attach its exact length."""
        nodes = tuple(int(x) for x in nodes)
        if len(set(nodes)) != len(nodes):
            raise ValueError(f"path repeats a node: {nodes}")
        for a, b in zip(nodes, nodes[1:]):
            if not graph.has_edge(a, b):
                raise ValueError(f"nodes {a} and {b} are not adjacent")
        return cls(nodes, graph.path_length(nodes))

    def __len__(self):
        return len(self.nodes)


def build_graph(node_count, edge_list, source, sink):
    """Validate an edge list and return a :class:`Graph`.

    Each edge is ``(u, v, w)`` with 1-based ids.  Raises on self-loops or
    repeated pairs (DuplicateEdge), ``w <= 0`` (NonPositiveWeight), bad
    terminals (InvalidTerminal) and on graphs that are not connected.
    """
    n = int(node_count)
    if n < 2:
        raise InvalidTerminal(f"need at least 2 nodes, got {n}")
    source, sink = int(source), int(sink)
    for name, t in (("source", source), ("sink", sink)):
        if not 1 <= t <= n:
            raise InvalidTerminal(f"{name} {t} outside 1..{n}")
    if source == sink:
        raise InvalidTerminal(f"source and sink are both {source}")

    edges = []
    seen = set()
    for u, v, w in edge_list:
        u, v, w = int(u), int(v), float(w)
        if not (1 <= u <= n and 1 <= v <= n):
            raise InvalidTerminal(f"edge ({u}, {v}) references a node outside 1..{n}")
        if u == v:
            raise DuplicateEdge(f"self-loop at node {u}")
        if not (w > 0 and math.isfinite(w)):
            raise NonPositiveWeight(f"edge ({u}, {v}) has weight {w}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEdge(f"edge {key} given twice")
        seen.add(key)
        edges.append((key[0], key[1], w))

    g = Graph(n, tuple(edges), source, sink)
    if not is_connected(g):
        raise DisconnectedGraph(f"graph with {n} nodes and {len(edges)} edges is not connected")
    return g


def _csr(node_count, tail, head, weight):
    return csr_matrix((weight, (tail, head)), shape=(node_count, node_count))


def is_connected(g):
    if g.edge_count == 0:
        return g.node_count <= 1
    ncomp, _ = connected_components(_csr(g.node_count, g.tail, g.head, g.weight), directed=False)
    return ncomp == 1


def gen_complete(n, w_min=1, w_max=10000, seed=0, source=1, sink=2):
    """Complete graph on ``n`` nodes with uniform integer weights in [w_min, w_max].

    Weights are drawn from ``SplitMix64(seed)`` in lexicographic edge order
    (1,2), (1,3), ..., (n-1,n).
    """
    if n < 2:
        raise ValueError(f"complete graph needs n >= 2, got {n}")
    if not 0 < w_min <= w_max:
        raise ValueError(f"need 0 < w_min <= w_max, got [{w_min}, {w_max}]")
    rng = SplitMix64(seed)
    edges = [(u, v, float(rng.randint(w_min, w_max))) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    return build_graph(n, edges, source, sink)


def _watts_strogatz_edges(n, half, beta, rng):
    # Ring lattice, then every (u, u+j) lattice edge is rewired with
    # probability beta to a uniformly chosen node that is neither u nor a
    # current neighbour of u.
    nbrs = [set() for _ in range(n)]
    for u in range(n):
        for j in range(1, half + 1):
            v = (u + j) % n
            nbrs[u].add(v)
            nbrs[v].add(u)
    for u in range(n):
        for j in range(1, half + 1):
            v = (u + j) % n
            if v not in nbrs[u] or rng.random() >= beta:
                continue
            free = [x for x in range(n) if x != u and x not in nbrs[u]]
            if not free:
                continue
            w = free[rng.randint(0, len(free) - 1)]
            nbrs[u].discard(v)
            nbrs[v].discard(u)
            nbrs[u].add(w)
            nbrs[w].add(u)
    return sorted((u, v) for u in range(n) for v in nbrs[u] if u < v)


def gen_small_world(n, mean_degree, beta=0.15, w_min=1, w_max=10000, seed=0, source=1, sink=2, max_tries=100):
    """Watts-Strogatz graph with uniform integer weights.

    Disconnected draws are discarded and regenerated with ``seed + 1``,
    ``seed + 2``, ... up to ``max_tries`` attempts.
    """
    if mean_degree % 2 or not 2 <= mean_degree < n:
        raise ValueError(f"mean_degree must be even with 2 <= k < n, got k={mean_degree}, n={n}")
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    if not 0 < w_min <= w_max:
        raise ValueError(f"need 0 < w_min <= w_max, got [{w_min}, {w_max}]")
    for attempt in range(max_tries):
        rng = SplitMix64(seed + attempt)
        pairs = _watts_strogatz_edges(n, mean_degree // 2, beta, rng)
        edges = [(u + 1, v + 1, float(rng.randint(w_min, w_max))) for u, v in pairs]
        try:
            return build_graph(n, edges, source, sink)
        except DisconnectedGraph:
            continue
    raise GenerationFailed(f"no connected small-world graph after {max_tries} seeds starting at {seed}")


def dijkstra(g):
    """Shortest source-to-sink :class:`Path` (ground-truth oracle)."""
    mat = _csr(g.node_count, g.tail, g.head, g.weight)
    dist, pred = _csgraph_dijkstra(mat, directed=False, indices=g.source - 1, return_predecessors=True)
    nodes = [g.sink - 1]
    while nodes[-1] != g.source - 1:
        nodes.append(int(pred[nodes[-1]]))
    path = Path.from_nodes(g, [x + 1 for x in reversed(nodes)])
    assert abs(path.length - dist[g.sink - 1]) <= 1e-9 * max(1.0, path.length)
    return path
