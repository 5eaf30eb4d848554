"""Value-value graph assembly and structural statistics."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np
from scipy import sparse

from .factors import InfluenceMatrix, IntraFactor

GRAPH_STATS_NODE_CAP = 20_000


@dataclass
class ValueGraph:
    """Weighted graph over feature values.

    No self loops, no edges between values of the same feature.  For the
    undirected flavour the adjacency is exactly symmetric.  ``node_delta``
    carries the per-node intra-feature factor when one applies.
    """

    adjacency: sparse.csr_matrix
    directed: bool
    node_feature: np.ndarray
    node_delta: np.ndarray | None = None

    @property
    def n_nodes(self) -> int:
        return self.adjacency.shape[0]

    def weight(self, u: int, v: int) -> float:
        return float(self.adjacency[u, v])


def build_cbrw_graph(delta: IntraFactor, infl: InfluenceMatrix) -> ValueGraph:
    """Directed graph whose edge weights are the conditional influences."""
    if infl.kind != "conditional":
        raise ValueError("directed walk graph needs a conditional influence matrix")
    if delta.n_values != infl.n_values:
        raise ValueError("factor and influence matrix cover different value universes")
    return ValueGraph(
        adjacency=infl.matrix.copy(),
        directed=True,
        node_feature=infl.node_feature,
        node_delta=delta.delta_hat,
    )


def build_sdrw_graph(delta: IntraFactor, infl: InfluenceMatrix) -> ValueGraph:
    """Undirected graph with weights delta_hat(u) * lift(u, v) * delta_hat(v)."""
    if infl.kind != "lift":
        raise ValueError("undirected walk graph needs a lift influence matrix")
    if delta.n_values != infl.n_values:
        raise ValueError("factor and influence matrix cover different value universes")
    m = infl.matrix.tocoo()
    data = delta.delta_hat[m.row] * m.data * delta.delta_hat[m.col]
    adj = sparse.csr_matrix((data, (m.row, m.col)), shape=m.shape)
    return ValueGraph(
        adjacency=adj,
        directed=False,
        node_feature=infl.node_feature,
        node_delta=delta.delta_hat,
    )


def graph_stats(graph: ValueGraph, node_cap: int = GRAPH_STATS_NODE_CAP) -> dict:
    """Diameter and mean local clustering of the unweighted skeleton.

    The diameter is the longest shortest path over edge existence
    ("disconnected" when any pair is unreachable).  The clustering
    coefficient averages the local coefficient over all nodes, nodes of
    degree below 2 contributing 0.  Cost is quadratic in |V|, so graphs
    above ``node_cap`` nodes are refused.
    """
    n = graph.n_nodes
    if n == 0:
        raise ValueError("empty graph")
    if n > node_cap:
        raise ValueError(
            f"graph has {n} nodes, above the cap of {node_cap}; "
            "diameter/clustering are quadratic and refused at this size"
        )
    coo = graph.adjacency.tocoo()
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(zip(coo.row.tolist(), coo.col.tolist()))
    g.remove_edges_from(nx.selfloop_edges(g))

    clustering = nx.average_clustering(g, count_zeros=True)
    if n == 1:
        diameter: int | str = 0
    elif nx.is_connected(g):
        diameter = nx.diameter(g)
    else:
        diameter = "disconnected"
    return {"diameter": diameter, "clustering_coefficient": clustering}


def dump_edges(graph: ValueGraph, fh) -> int:
    """Write the adjacency as '<u_id> <v_id> <weight>' lines; returns count.

    Undirected graphs emit each edge once (u < v).
    """
    coo = graph.adjacency.tocoo()
    written = 0
    for u, v, w in zip(coo.row, coo.col, coo.data):
        if not graph.directed and u > v:
            continue
        fh.write(f"{u} {v} {w:.17g}\n")
        written += 1
    return written
