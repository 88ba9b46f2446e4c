"""Physarum shortest-path solver with dominant-path termination and T-Point detection."""

from .dpath import DPathStable, EpsilonDeltaD, TPointResult, detect_tpoint, extract_dpath, parse_criterion
from .engine import SolverConfig, SolverState, TraceEntry, init_state, run, run_criteria, step
from .errors import (
    DisconnectedGraph,
    DPathExtractionFailed,
    DuplicateEdge,
    GenerationFailed,
    InvalidTerminal,
    MetadataMismatch,
    NonFiniteConductivity,
    NonPositiveWeight,
    ParseError,
    SolveFailed,
    Unconfirmed,
)
from .graph import Graph, Path, build_graph, dijkstra, gen_complete, gen_small_world
from .harness import emit_report, run_success_suite, run_tpoint_eval
from .io import emit_edge_list, parse_edge_list, parse_tntp
from .laplacian import assemble_grounded_system, solve_pressures

__version__ = "0.1.0"
