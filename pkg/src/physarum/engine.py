"""The Physarum solver loop: pressures, fluxes, conductivity adaptation.

One iteration is

1. solve the grounded Poisson system for pressures,
2. Q_uv = (D_uv / L_uv) * (p_u - p_v) on every stored edge (u < v),
3. D <- (D + dt * |Q|) / (1 + dt), which is (D + |Q|) / 2 for dt = 1,
4. extract the dominant path from the new fluxes.
"""

import time
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .dpath import Never, extract_dpath
from .errors import DPathExtractionFailed, SolveFailed
from .graph import Path
from .laplacian import solve_pressures


@dataclass(frozen=True)
class SolverConfig:
    in0: float = 1.0
    delta_t: float = 1.0
    alpha: float = 1.0
    initial_d: float = 0.5
    linear_tolerance: float = 1e-10
    max_iterations: int = 10000

    def __post_init__(self):
        if not self.in0 > 0:
            raise ValueError(f"in0 must be positive, got {self.in0}")
        if not self.delta_t > 0:
            raise ValueError(f"delta_t must be positive, got {self.delta_t}")
        if self.alpha != 1.0:
            raise ValueError("only alpha = 1 with f(|Q|) = |Q| is supported")
        if not self.initial_d > 0:
            raise ValueError(f"initial_d must be positive, got {self.initial_d}")
        if not self.linear_tolerance > 0:
            raise ValueError(f"linear_tolerance must be positive, got {self.linear_tolerance}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(f"max_iterations must be a positive integer, got {self.max_iterations}")


@dataclass(frozen=True)
class SolverState:
    conductivities: np.ndarray
    fluxes: np.ndarray
    pressures: np.ndarray
    iteration: int = 0


@dataclass(frozen=True)
class TraceEntry:
    iteration: int
    dpath_nodes: Optional[tuple]
    dpath_length: Optional[float]
    sum_abs_delta_D: float
    elapsed_ns: int = 0
    solve_residual: float = 0.0
    error: Optional[str] = None


@dataclass
class RunResult:
    final_path: object  # Path, or None when the last extraction failed
    iterations: int
    terminated_by: str  # "criterion", "budget" or "solver_failed"
    wall_time: float
    trace: list = field(default_factory=list)
    state: Optional[SolverState] = None
    error: Optional[str] = None

    @property
    def final_length(self):
        return None if self.final_path is None else self.final_path.length


def init_state(g, config=None):
    config = config or SolverConfig()
    return SolverState(
        np.full(g.edge_count, float(config.initial_d)),
        np.zeros(g.edge_count),
        np.zeros(g.node_count),
        0,
    )


def compute_flux(g, conductivities, pressures):
    p = np.asarray(pressures, dtype=np.float64)
    return np.asarray(conductivities, dtype=np.float64) / g.weight * (p[g.tail] - p[g.head])


def update_conductivity(conductivities, fluxes, delta_t=1.0):
    return (conductivities + delta_t * np.abs(fluxes)) / (1.0 + delta_t)


def net_inflow(g, fluxes):
    """Signed sum_i Q_ij at every node j (0-based array).

    Equals +IN0 at the source, -IN0 at the sink and 0 elsewhere when the
    pressures solve the Poisson system.
    """
    n = g.node_count
    return np.bincount(g.head, fluxes, n) - np.bincount(g.tail, fluxes, n)


def step(g, state, config=None):
    """Advance one iteration; returns ``(new_state, TraceEntry)``."""
    config = config or SolverConfig()
    t0 = time.perf_counter_ns()
    d = state.conductivities
    p, residual = solve_pressures(g, d, config.in0, config.linear_tolerance, return_residual=True)
    q = compute_flux(g, d, p)
    d_new = update_conductivity(d, q, config.delta_t)
    new_state = SolverState(d_new, q, p, state.iteration + 1)
    try:
        path = extract_dpath(g, q)
        nodes, length, error = path.nodes, path.length, None
    except DPathExtractionFailed as exc:
        nodes, length, error = None, None, str(exc)
    entry = TraceEntry(
        iteration=new_state.iteration,
        dpath_nodes=nodes,
        dpath_length=length,
        sum_abs_delta_D=float(np.abs(d_new - d).sum()),
        elapsed_ns=time.perf_counter_ns() - t0,
        solve_residual=residual,
        error=error,
    )
    return new_state, entry


def _path_of(g, entry):
    return None if entry.dpath_nodes is None else Path(entry.dpath_nodes, entry.dpath_length)


def run(g, config=None, criterion=None, observer=None, keep_trace=True):
    """Iterate until ``criterion`` fires or ``config.max_iterations`` is spent.

    ``observer(state, entry)`` is called after every step.  Trace entries
    carry ``elapsed_ns`` measured from the start of the run.  Solver errors
    propagate.
    """
    results = run_criteria(g, config, [criterion or Never()], observer=observer, keep_trace=keep_trace)
    return results[0]


def run_criteria(g, config=None, criteria=(), observer=None, keep_trace=True, record_errors=False):
    """Run several criteria off one shared trajectory.

    The dynamics do not depend on the stopping rule, so this gives the same
    outcome per criterion as separate runs while iterating only once.  The
    loop ends when every criterion has fired or the budget is spent.  Returns
    one :class:`RunResult` per criterion, in order; each result's trace is
    the shared trace truncated at that criterion's stopping point.

    With ``record_errors`` a :class:`SolveFailed` ends the loop instead of
    propagating: criteria that already fired keep their results and the rest
    are reported with ``terminated_by == "solver_failed"``.
    """
    config = config or SolverConfig()
    criteria = list(criteria)
    for c in criteria:
        c.reset()
    outcomes = [None] * len(criteria)
    state = init_state(g, config)
    trace = []
    last = None
    start = time.perf_counter_ns()
    failure = None
    while state.iteration < config.max_iterations and any(o is None for o in outcomes):
        try:
            state, entry = step(g, state, config)
        except SolveFailed as exc:
            if not record_errors:
                raise
            failure = exc
            break
        entry = replace(entry, elapsed_ns=time.perf_counter_ns() - start)
        if observer is not None:
            observer(state, entry)
        if keep_trace:
            trace.append(entry)
        last = entry
        for i, c in enumerate(criteria):
            if outcomes[i] is None and c.update(entry):
                outcomes[i] = RunResult(
                    _path_of(g, entry), entry.iteration, "criterion", entry.elapsed_ns / 1e9, None, state
                )
    results = []
    for o in outcomes:
        if o is None and failure is not None:
            wall = (time.perf_counter_ns() - start) / 1e9
            o = RunResult(None, state.iteration, "solver_failed", wall, None, state, str(failure))
        elif o is None:
            o = RunResult(_path_of(g, last), last.iteration, "budget", last.elapsed_ns / 1e9, None, state)
        o.trace = trace[: o.iterations] if keep_trace else []
        results.append(o)
    return results
