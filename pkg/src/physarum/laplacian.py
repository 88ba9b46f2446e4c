"""Node pressures from the network Poisson equation.

For every node j::

    sum_i  g_ij * (p_i - p_j) = b_j,     g_ij = D_ij / L_ij

with ``b = +IN0`` at the source, ``-IN0`` at the sink and 0 elsewhere.  The
left side is ``-(L p)_j`` for the weighted Laplacian ``L``, so after grounding
the source (``p_source = 0``) the reduced system is ``L_red p_red = -b_red``,
which is symmetric positive definite on a connected graph with positive
conductivities.

The signs are kept exactly as written even though they make raw flux run
from sink to source; every consumer downstream works with ``|Q|``.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .errors import NonFiniteConductivity, SolveFailed

DENSE_LIMIT = 2000


@dataclass
class GroundedSystem:
    matrix: object  # ndarray, or scipy sparse matrix above DENSE_LIMIT nodes
    rhs: np.ndarray
    grounded_node: int
    unknowns: np.ndarray  # 1-based node id of each row
    injection: np.ndarray  # full-length b, indexed by 0-based node

    @property
    def dimension(self):
        return self.rhs.shape[0]


def injection_vector(g, in0):
    b = np.zeros(g.node_count)
    b[g.source - 1] = in0
    b[g.sink - 1] = -in0
    return b


def _conductance(g, conductivities):
    d = np.asarray(conductivities, dtype=np.float64)
    if d.shape != (g.edge_count,):
        raise ValueError(f"expected {g.edge_count} conductivities, got shape {d.shape}")
    if not np.all(np.isfinite(d)) or np.any(d < 0):
        raise NonFiniteConductivity("conductivities must be finite and positive")
    return d / g.weight


def laplacian(g, conductivities, sparse=None):
    """Weighted Laplacian with edge conductances D/L (dense unless ``sparse``)."""
    c = _conductance(g, conductivities)
    n = g.node_count
    diag = np.bincount(g.tail, c, n) + np.bincount(g.head, c, n)
    if sparse is None:
        sparse = n > DENSE_LIMIT
    if sparse:
        rows = np.concatenate([g.tail, g.head, np.arange(n)])
        cols = np.concatenate([g.head, g.tail, np.arange(n)])
        vals = np.concatenate([-c, -c, diag])
        return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
    lap = np.zeros((n, n))
    lap[g.tail, g.head] = -c
    lap[g.head, g.tail] = -c
    lap[np.arange(n), np.arange(n)] = diag
    return lap


def assemble_grounded_system(g, conductivities, in0, sparse=None):
    if not in0 > 0:
        raise ValueError(f"IN0 must be positive, got {in0}")
    lap = laplacian(g, conductivities, sparse)
    s = g.source - 1
    keep = np.array([i for i in range(g.node_count) if i != s])
    b = injection_vector(g, in0)
    if scipy.sparse.issparse(lap):
        matrix = lap[keep][:, keep].tocsr()
    else:
        matrix = lap[np.ix_(keep, keep)]
    return GroundedSystem(matrix, -b[keep], g.source, keep + 1, b)


def poisson_residual(g, conductivities, pressures, in0):
    """Per-node |sum_i g_ij (p_i - p_j) - b_j|."""
    c = np.asarray(conductivities, dtype=np.float64) / g.weight
    p = np.asarray(pressures, dtype=np.float64)
    drop = c * (p[g.head] - p[g.tail])
    n = g.node_count
    lhs = np.bincount(g.tail, drop, n) - np.bincount(g.head, drop, n)
    return np.abs(lhs - injection_vector(g, in0))


def _dense_solve(matrix, rhs):
    # symmetric diagonal scaling first: decayed conductivities leave rows many
    # orders of magnitude apart.  Powers of two keep the scaling exact.
    _, exponent = np.frexp(np.diag(matrix))
    scale = np.ldexp(1.0, -(exponent // 2))
    scaled = matrix * scale[:, None] * scale[None, :]
    factor = scipy.linalg.cho_factor(scaled, lower=True, check_finite=False)

    def solve(r):
        return scale * scipy.linalg.cho_solve(factor, scale * r, check_finite=False)

    return solve


def _sparse_solve(matrix, rhs, atol):
    inv_diag = 1.0 / matrix.diagonal()
    precond = scipy.sparse.linalg.LinearOperator(matrix.shape, lambda r: inv_diag * r)

    def solve(r):
        x, info = scipy.sparse.linalg.cg(matrix, r, rtol=0.0, atol=atol, M=precond, maxiter=20 * matrix.shape[0])
        if info != 0:
            raise SolveFailed(f"conjugate gradient did not converge (info={info})")
        return x

    return solve


def solve_pressures(g, conductivities, in0, tolerance=1e-10, sparse=None, return_residual=False):
    """Pressures (0-based array of length n, source entry exactly 0).

    Every node satisfies the Poisson equation to within
    ``tolerance * max(1, in0)``; otherwise :class:`SolveFailed` is raised.
    """
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    d = np.asarray(conductivities, dtype=np.float64)
    if d.size and np.all(np.isfinite(d)) and d.min() == 0:
        raise SolveFailed("a conductivity collapsed to zero")
    system = assemble_grounded_system(g, d, in0, sparse)
    bound = tolerance * max(1.0, in0)
    try:
        if scipy.sparse.issparse(system.matrix):
            solve = _sparse_solve(system.matrix, system.rhs, 0.5 * bound / np.sqrt(system.dimension))
        else:
            solve = _dense_solve(system.matrix, system.rhs)
        x = solve(system.rhs)
        p = np.zeros(g.node_count)
        p[system.unknowns - 1] = x
        residual = poisson_residual(g, d, p, in0)
        for _ in range(3):
            if not np.all(np.isfinite(p)) or residual.max() <= bound:
                break
            # iterative refinement on the reduced system
            x = x + solve(system.rhs - system.matrix @ x)
            p[system.unknowns - 1] = x
            residual = poisson_residual(g, d, p, in0)
    except (np.linalg.LinAlgError, ValueError, FloatingPointError) as exc:
        raise SolveFailed(f"pressure solve failed: {exc}") from exc
    if not np.all(np.isfinite(p)):
        raise SolveFailed("pressure solve produced non-finite values")
    worst = float(residual.max())
    if worst > bound:
        raise SolveFailed(f"Poisson residual {worst:.3e} exceeds {bound:.3e}")
    p[g.source - 1] = 0.0
    return (p, worst) if return_residual else p
