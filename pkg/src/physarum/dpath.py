"""Dominant paths, termination criteria and the transition point (T-Point)."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DPathExtractionFailed
from .graph import Path


def extract_dpath(g, flux):
    """Greedy max-|flux| walk from source to sink, deleting each node once left.

    At every node the incident edge with the largest ``|Q|`` among the nodes
    still present wins; exact ties go to the smaller neighbour id.  Raises
    :class:`DPathExtractionFailed` if the walk strands before the sink.
    """
    absq = np.abs(np.asarray(flux, dtype=np.float64))
    if absq.shape != (g.edge_count,):
        raise ValueError(f"expected {g.edge_count} flux values, got shape {absq.shape}")
    alive = np.ones(g.node_count, dtype=bool)
    cur = g.source - 1
    target = g.sink - 1
    nodes = [cur]
    weights = []
    while cur != target:
        lo, hi = g.adj_ptr[cur], g.adj_ptr[cur + 1]
        nbrs = g.adj_node[lo:hi]
        ok = alive[nbrs]
        if not ok.any():
            raise DPathExtractionFailed(f"walk stranded at node {cur + 1} after {[x + 1 for x in nodes]}")
        edges = g.adj_edge[lo:hi][ok]
        k = int(np.argmax(absq[edges]))  # first maximum = smallest neighbour id
        alive[cur] = False
        cur = int(nbrs[ok][k])
        nodes.append(cur)
        weights.append(g.weight[edges[k]])
    return Path(tuple(x + 1 for x in nodes), math.fsum(weights))


def _length(entry):
    return getattr(entry, "dpath_length", entry)


def _nodes(entry):
    return getattr(entry, "dpath_nodes", entry)


def criterion_epsilon_delta_D(entry, epsilon):
    """True once the summed per-edge conductivity change is at most ``epsilon``."""
    return entry.sum_abs_delta_D <= epsilon


def dpath_stable_count(trace):
    """COUNT after the last entry: trailing consecutive repeats of the D-Path."""
    count = 0
    for prev, cur in zip(trace[-2::-1], trace[::-1]):
        a, b = _nodes(prev), _nodes(cur)
        if a is None or b is None or tuple(a) != tuple(b):
            break
        count += 1
    return count


def criterion_dpath_stable(trace, K):
    return dpath_stable_count(trace) >= K


class EpsilonDeltaD:
    """Stop when sum |D_new - D_old| over all edges drops to ``epsilon``."""

    kind = "eps"

    def __init__(self, epsilon):
        if not epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {epsilon}")
        self.epsilon = float(epsilon)

    @property
    def label(self):
        return f"eps={self.epsilon:g}"

    def reset(self):
        pass

    def update(self, entry):
        return criterion_epsilon_delta_D(entry, self.epsilon)

    def __repr__(self):
        return f"EpsilonDeltaD({self.epsilon!r})"


class DPathStable:
    """Stop once the D-Path node sequence has repeated ``K`` times in a row."""

    kind = "k"

    def __init__(self, K):
        if isinstance(K, bool) or int(K) != K or K < 1:
            raise ValueError(f"K must be a positive integer, got {K}")
        self.K = int(K)
        self.reset()

    @property
    def label(self):
        return f"k={self.K}"

    def reset(self):
        self.count = 0
        self._prev = None

    def update(self, entry):
        nodes = entry.dpath_nodes
        if nodes is not None and nodes == self._prev:
            self.count += 1
        else:
            # also covers extraction failures: no stable path yet
            self.count = 0
        self._prev = nodes
        return self.count >= self.K

    def __repr__(self):
        return f"DPathStable({self.K})"


class Never:
    """Criterion that never fires; runs go to the iteration budget."""

    kind = "none"
    label = "none"

    def reset(self):
        pass

    def update(self, entry):
        return False


def parse_criterion(text):
    """``'eps=1e-3'`` or ``'k=30'`` to a criterion object."""
    key, sep, value = text.strip().partition("=")
    key = key.strip().lower()
    if not sep:
        raise ValueError(f"criterion must look like eps=<real> or k=<int>, got {text!r}")
    if key in ("eps", "epsilon"):
        return EpsilonDeltaD(float(value))
    if key == "k":
        try:
            k = int(value)
        except ValueError:
            raise ValueError(f"K must be an integer, got {value!r}") from None
        return DPathStable(k)
    raise ValueError(f"unknown criterion {key!r}")


@dataclass(frozen=True)
class TPointResult:
    tpoint_iteration: Optional[int]
    confirmed: bool


def detect_tpoint(trace, optimal_length, min_window=50):
    """Earliest iteration from which the D-Path length stays at ``optimal_length``.

    ``trace`` holds trace entries (or bare lengths, numbered from 1).  The
    result is confirmed when the trace runs at least ``min_window`` iterations
    past that point.
    """
    if min_window < 1:
        raise ValueError(f"min_window must be >= 1, got {min_window}")
    i = len(trace)
    while i > 0 and _length(trace[i - 1]) == optimal_length:
        i -= 1
    if i == len(trace):
        return TPointResult(None, False)

    def iteration(k):
        return getattr(trace[k], "iteration", k + 1)

    start = iteration(i)
    return TPointResult(start, iteration(len(trace) - 1) - start >= min_window)
