"""Greedy dense-subgraph peeling and the subgraph-density outlier factor.

Peeling repeatedly deletes the node of minimal weighted degree (ties to
the lowest node id) until one node is left.  Before each deletion the
density of the current subgraph, total edge weight divided by node
count, is recorded; the recorded family therefore runs from the full
graph down to the last surviving pair.  The density factor of a node is
the accumulated density mass of the recorded subgraphs it was still part
of, so nodes that survive deep into the dense core collect the most
mass.  Normalizing that mass over all nodes gives the noise-tolerant
value outlierness; no iteration is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import ValueGraph
from .walks import OutliernessVector


@dataclass
class PeelingResult:
    """Removal order, per-step subgraph densities, and membership info.

    ``densities[t]`` is the density of the subgraph of size |V| - t as it
    stood before the (t + 1)-th removal; the array covers sizes |V| down
    to 2.  ``membership_count[v]`` is the number of recorded subgraphs
    containing node v (its removal step; |V| - 1 for the survivor).
    """

    removal_order: np.ndarray
    densities: np.ndarray
    membership_count: np.ndarray
    survivor: int

    @property
    def n_nodes(self) -> int:
        return len(self.membership_count)

    @property
    def initial_density(self) -> float:
        return float(self.densities[0])

    @property
    def subgraph_densities(self) -> np.ndarray:
        """Densities of the strict subgraphs, sizes |V| - 1 down to 2."""
        return self.densities[1:]

    def containing_sizes(self, v: int) -> range:
        """Sizes of recorded subgraphs containing v (largest to smallest)."""
        n = self.n_nodes
        return range(n, n - int(self.membership_count[v]), -1)


@dataclass
class GammaFactor:
    """Accumulated subgraph-density mass per value."""

    gamma: np.ndarray

    @property
    def n_values(self) -> int:
        return len(self.gamma)


def subgraph_density(graph: ValueGraph, node_subset) -> float:
    """Density of the induced subgraph: sum of edge weights / node count.

    Evaluated directly as the double sum over ordered pairs divided by
    2 |H| (the diagonal is zero, each edge counted twice).
    """
    nodes = np.asarray(sorted(set(int(v) for v in node_subset)), dtype=np.int64)
    if len(nodes) == 0:
        raise ValueError("empty node subset")
    sub = graph.adjacency[nodes][:, nodes]
    return float(sub.sum()) / (2.0 * len(nodes))


def peel_subgraphs(graph: ValueGraph) -> PeelingResult:
    """Greedy minimum-weighted-degree peeling with incremental updates.

    Each deleted node's incident weights are subtracted from its alive
    neighbours' degrees and from the running edge-weight sum (never
    recomputed), so update work totals O(|E|).  The minimum is taken over
    the dense degree array, a vectorized O(|V|) scan per step whose first
    hit realizes the lowest-node-id tie rule.
    """
    if graph.directed:
        raise ValueError("peeling is defined on the undirected graph")
    n = graph.n_nodes
    if n < 2:
        raise ValueError(f"peeling needs at least 2 nodes, got {n}")

    adj = graph.adjacency.tocsr()
    deg = np.asarray(adj.sum(axis=1)).ravel().astype(np.float64)
    edge_sum = float(deg.sum()) / 2.0
    alive = np.ones(n, dtype=bool)

    order = np.zeros(n - 1, dtype=np.int64)
    densities = np.zeros(n - 1, dtype=np.float64)
    membership = np.zeros(n, dtype=np.int64)

    for step, size in enumerate(range(n, 1, -1)):
        densities[step] = edge_sum / size
        v = int(np.argmin(deg))  # removed nodes sit at +inf
        alive[v] = False
        order[step] = v
        membership[v] = step + 1
        edge_sum -= deg[v]
        nbrs = adj.indices[adj.indptr[v] : adj.indptr[v + 1]]
        weights = adj.data[adj.indptr[v] : adj.indptr[v + 1]]
        live = alive[nbrs]
        deg[nbrs[live]] -= weights[live]
        deg[v] = np.inf

    survivor = int(np.flatnonzero(alive)[0])
    membership[survivor] = n - 1
    return PeelingResult(
        removal_order=order,
        densities=densities,
        membership_count=membership,
        survivor=survivor,
    )


def gamma_factor(peel: PeelingResult) -> GammaFactor:
    """Sum the recorded densities over the subgraphs containing each node.

    A node removed at step t accumulates the densities recorded at steps
    1..t (it was present when each of those subgraphs was recorded); the
    survivor accumulates the whole sequence.  The first-removed node thus
    keeps only the full graph's density, the smallest possible mass.
    """
    prefix = np.cumsum(peel.densities)
    return GammaFactor(gamma=prefix[peel.membership_count - 1])


def subgraph_outlierness(gamma: GammaFactor) -> OutliernessVector:
    """Closed-form value outlierness: density mass normalized to sum 1."""
    total = float(gamma.gamma.sum())
    if total <= 0.0:
        raise ValueError("degenerate graph: all density mass is zero")
    return OutliernessVector(phi=gamma.gamma / total, iterations_used=0, converged=True)


def degree_stationary(graph: ValueGraph) -> OutliernessVector:
    """Stationary distribution of the unbiased walk on an undirected graph.

    For symmetric weights the walk's stationary probability of a node is
    its weighted degree over the graph volume, no iteration needed.
    """
    if graph.directed:
        raise ValueError("degree closed form holds for undirected graphs only")
    d = np.asarray(graph.adjacency.sum(axis=0)).ravel()
    vol = float(d.sum())
    if vol <= 0.0:
        raise ValueError("degenerate graph: zero volume")
    return OutliernessVector(phi=d / vol, iterations_used=0, converged=True)
