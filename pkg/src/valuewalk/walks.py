"""Biased random walks on the directed value graph.

The walk is biased by the per-node factor: leaving node u, the step to v
has probability proportional to delta_hat(v) * A(u, v).  Value
outlierness is the stationary distribution of the damped walk, found by
power iteration of the incoming-mass update

    pi[v] <- (1 - alpha) / |V| + alpha * sum_u pi[u] * W(u, v)

from a uniform start until the L1 change drops to ``tol``.  Mass flows
along edge direction (the update is the transpose product), which is the
orientation under which the stationary mass of a node tracks its
incoming weight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .factors import IntraFactor
from .graph import ValueGraph

DEFAULT_ALPHA = 0.95
DEFAULT_TOL = 1e-3
DEFAULT_MAX_ITER = 100


@dataclass
class TransitionMatrix:
    """Row-stochastic walk matrix with dangling rows repaired to uniform.

    Dangling rows (nodes without outgoing weight) are kept implicit: the
    ``dangling`` mask marks them and every consumer treats such a row as
    the uniform distribution.  ``dense(alpha)`` materializes the full
    teleport-augmented matrix, whose rows sum to 1 and whose entries are
    all at least (1 - alpha) / |V|.
    """

    matrix: sparse.csr_matrix
    dangling: np.ndarray
    damping: float | None = None

    @property
    def n_nodes(self) -> int:
        return self.matrix.shape[0]

    def dense(self, alpha: float = 0.0) -> np.ndarray:
        n = self.n_nodes
        w = self.matrix.toarray()
        w[self.dangling] = 1.0 / n
        return (1.0 - alpha) / n + alpha * w if alpha > 0 else w


@dataclass
class OutliernessVector:
    """A probability vector over values plus iteration diagnostics."""

    phi: np.ndarray
    iterations_used: int = 0
    converged: bool = True

    @property
    def n_values(self) -> int:
        return len(self.phi)

    def __getitem__(self, v: int) -> float:
        return float(self.phi[v])


def transition_matrix(graph: ValueGraph, delta: IntraFactor) -> TransitionMatrix:
    """Bias the graph's edges by the target node factor and row-normalize.

    W(u, v) = delta_hat(v) * A(u, v) / sum_w delta_hat(w) * A(u, w).
    Rows with zero out-weight become uniform rows.
    """
    if not graph.directed:
        raise ValueError("transition matrix is defined on the directed graph")
    if delta.n_values != graph.n_nodes:
        raise ValueError("factor and graph cover different value universes")
    biased = graph.adjacency.multiply(delta.delta_hat[None, :]).tocsr()
    row_sums = np.asarray(biased.sum(axis=1)).ravel()
    dangling = row_sums == 0.0
    inv = np.zeros_like(row_sums)
    inv[~dangling] = 1.0 / row_sums[~dangling]
    w = sparse.diags(inv) @ biased
    return TransitionMatrix(matrix=w.tocsr(), dangling=dangling)


def _iterate(
    w: TransitionMatrix,
    alpha: float,
    tol: float,
    max_iter: int,
    initial: np.ndarray | None,
):
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"damping factor must lie in [0, 1), got {alpha}")
    n = w.n_nodes
    if initial is None:
        pi = np.full(n, 1.0 / n)
    else:
        pi = np.asarray(initial, dtype=np.float64)
        if pi.shape != (n,) or np.any(pi < 0):
            raise ValueError("initial distribution must be a nonnegative vector of length |V|")
        pi = pi / pi.sum()
    wt = w.matrix.T.tocsr()
    dangling = w.dangling
    any_dangling = bool(dangling.any())

    trace = []
    converged = False
    iterations = 0
    for _ in range(max_iter):
        incoming = wt @ pi
        if any_dangling:
            incoming = incoming + pi[dangling].sum() / n
        new = (1.0 - alpha) / n + alpha * incoming
        change = float(np.abs(new - pi).sum())
        trace.append(change)
        pi = new
        iterations += 1
        if change <= tol:
            converged = True
            break
    return pi, iterations, converged, np.array(trace)


def stationary_distribution(
    w: TransitionMatrix,
    alpha: float = DEFAULT_ALPHA,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    initial: np.ndarray | None = None,
) -> OutliernessVector:
    """Damped power iteration to the stationary distribution.

    With alpha < 1 the damped walk is irreducible and aperiodic, so the
    limit is unique and independent of the initial distribution (exposed
    via ``initial`` for convergence checks only).
    """
    phi, iterations, converged, _ = _iterate(w, alpha, tol, max_iter, initial)
    w.damping = alpha
    return OutliernessVector(phi=phi, iterations_used=iterations, converged=converged)


def convergence_trace(
    w: TransitionMatrix,
    alpha: float = DEFAULT_ALPHA,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> np.ndarray:
    """Per-iteration L1 change of the damped iteration until it stops."""
    _, _, _, trace = _iterate(w, alpha, tol, max_iter, None)
    return trace
