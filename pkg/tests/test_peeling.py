import itertools

import numpy as np
import pytest
from scipy import sparse

import valuewalk as vw
from conftest import random_connected_undirected
from reference_values import DENSITY_VALUE_OUTLIERNESS


def undirected_graph(a):
    a = np.asarray(a, dtype=float)
    return vw.ValueGraph(sparse.csr_matrix(a), directed=False, node_feature=np.arange(len(a)))


def brute_force_peel(a):
    """Recompute weighted degrees from scratch at every step (oracle)."""
    a = np.asarray(a, dtype=float)
    n = len(a)
    alive = list(range(n))
    order, densities = [], []
    while len(alive) > 1:
        sub = a[np.ix_(alive, alive)]
        densities.append(sub.sum() / (2 * len(alive)))
        deg = sub.sum(axis=1)
        # first argmin = lowest node id, since `alive` stays sorted
        v = alive[int(np.argmin(deg))]
        order.append(v)
        alive.remove(v)
    return order, densities


class TestPeelSubgraphs:
    def test_complete_equal_weight_graph_peels_in_id_order(self):
        n = 6
        a = np.ones((n, n)) - np.eye(n)
        peel = vw.peel_subgraphs(undirected_graph(a))
        assert peel.removal_order.tolist() == list(range(n - 1))
        assert peel.survivor == n - 1
        assert len(peel.densities) == n - 1
        assert len(peel.subgraph_densities) == n - 2

    def test_star_graph_peels_leaves_first(self):
        n = 7
        a = np.zeros((n, n))
        a[0, 1:] = a[1:, 0] = 5.0
        a[1, 2] = a[2, 1] = 0.5
        peel = vw.peel_subgraphs(undirected_graph(a))
        assert 0 not in peel.removal_order[:-1]

    def test_toy_graph_matches_brute_force_oracle(self, toy_sdrw_graph):
        # Re-evaluate weighted degrees from scratch at every step: each
        # removed node must hold the minimal recomputed degree (up to float
        # noise; the final surviving pair is always exactly tied), and the
        # recorded densities must match direct recomputation.
        a = toy_sdrw_graph.adjacency.toarray()
        peel = vw.peel_subgraphs(toy_sdrw_graph)
        _, densities = brute_force_peel(a)
        assert np.allclose(peel.densities, densities, atol=1e-12)
        alive = list(range(len(a)))
        for v in peel.removal_order:
            sub = a[np.ix_(alive, alive)]
            deg = {u: d for u, d in zip(alive, sub.sum(axis=1))}
            assert deg[v] <= min(deg.values()) + 1e-9
            alive.remove(v)

    def test_toy_removal_order_is_reproducible(self, toy_sdrw_graph):
        a = vw.peel_subgraphs(toy_sdrw_graph)
        b = vw.peel_subgraphs(toy_sdrw_graph)
        assert a.removal_order.tolist() == b.removal_order.tolist()
        assert a.densities.tolist() == b.densities.tolist()

    def test_random_graphs_match_brute_force_oracle(self):
        # Exact order agreement for all steps but the final one; the last
        # surviving pair always has exactly equal degrees (the one shared
        # edge), so that step is an intrinsic tie decided by rounding.
        rng = np.random.default_rng(19)
        for _ in range(25):
            n = int(rng.integers(3, 14))
            a = random_connected_undirected(rng, n)
            peel = vw.peel_subgraphs(undirected_graph(a))
            order, densities = brute_force_peel(a)
            assert peel.removal_order.tolist()[:-1] == order[:-1]
            assert {int(peel.removal_order[-1]), peel.survivor} == set(order[-1:]) | (
                set(range(n)) - set(order)
            )
            assert np.allclose(peel.densities, densities, atol=1e-9)

    def test_membership_counts(self, toy_sdrw_graph):
        peel = vw.peel_subgraphs(toy_sdrw_graph)
        n = toy_sdrw_graph.n_nodes
        for step, v in enumerate(peel.removal_order, start=1):
            assert peel.membership_count[v] == step
            sizes = peel.containing_sizes(int(v))
            assert sizes[0] == n and len(sizes) == step
        assert peel.membership_count[peel.survivor] == n - 1

    def test_removal_order_is_permutation_of_all_but_one(self, toy_sdrw_graph):
        peel = vw.peel_subgraphs(toy_sdrw_graph)
        touched = set(peel.removal_order.tolist()) | {peel.survivor}
        assert touched == set(range(toy_sdrw_graph.n_nodes))

    def test_too_small_graph_rejected(self):
        with pytest.raises(ValueError, match="at least 2"):
            vw.peel_subgraphs(undirected_graph(np.zeros((1, 1))))

    def test_directed_graph_rejected(self, toy_cbrw_graph):
        with pytest.raises(ValueError, match="undirected"):
            vw.peel_subgraphs(toy_cbrw_graph)


class TestSubgraphDensity:
    def test_two_node_subgraph(self):
        a = np.zeros((3, 3))
        a[0, 1] = a[1, 0] = 0.8
        g = undirected_graph(a)
        assert vw.subgraph_density(g, [0, 1]) == pytest.approx(0.4)

    def test_singleton_is_zero(self, toy_sdrw_graph):
        assert vw.subgraph_density(toy_sdrw_graph, [3]) == 0.0

    def test_empty_subset_rejected(self, toy_sdrw_graph):
        with pytest.raises(ValueError, match="empty"):
            vw.subgraph_density(toy_sdrw_graph, [])

    def test_full_graph_density_equals_edge_sum_over_nodes(self, toy_sdrw_graph):
        total = toy_sdrw_graph.adjacency.sum() / 2.0
        n = toy_sdrw_graph.n_nodes
        got = vw.subgraph_density(toy_sdrw_graph, range(n))
        assert got == pytest.approx(total / n, rel=1e-12)
        peel = vw.peel_subgraphs(toy_sdrw_graph)
        assert peel.initial_density == pytest.approx(got, rel=1e-12)

    def test_recorded_densities_match_direct_evaluation(self, toy_sdrw_graph):
        peel = vw.peel_subgraphs(toy_sdrw_graph)
        alive = set(range(toy_sdrw_graph.n_nodes))
        for step, v in enumerate(peel.removal_order):
            assert peel.densities[step] == pytest.approx(
                vw.subgraph_density(toy_sdrw_graph, alive), rel=1e-9
            )
            alive.discard(int(v))


class TestGammaFactor:
    def test_first_removed_keeps_only_full_graph_mass(self, toy_sdrw_graph):
        peel = vw.peel_subgraphs(toy_sdrw_graph)
        gamma = vw.gamma_factor(peel).gamma
        first = peel.removal_order[0]
        assert gamma[first] == pytest.approx(peel.initial_density, rel=1e-12)
        assert gamma[first] == min(gamma)

    def test_survivor_accumulates_every_density(self, toy_sdrw_graph):
        peel = vw.peel_subgraphs(toy_sdrw_graph)
        gamma = vw.gamma_factor(peel).gamma
        assert gamma[peel.survivor] == pytest.approx(peel.densities.sum(), rel=1e-12)
        assert gamma[peel.survivor] == max(gamma)

    def test_gamma_is_prefix_sum_of_densities(self, toy_sdrw_graph):
        peel = vw.peel_subgraphs(toy_sdrw_graph)
        gamma = vw.gamma_factor(peel).gamma
        for v in range(toy_sdrw_graph.n_nodes):
            member = peel.membership_count[v]
            assert gamma[v] == pytest.approx(peel.densities[:member].sum(), rel=1e-12)


class TestSubgraphOutlierness:
    def test_toy_values_match_reference(self, toy_sdrw_graph, toy_dataset):
        phi = vw.subgraph_outlierness(vw.gamma_factor(vw.peel_subgraphs(toy_sdrw_graph)))
        idx = {n.split("=", 1)[1]: i for i, n in enumerate(toy_dataset.value_names)}
        for name, want in DENSITY_VALUE_OUTLIERNESS.items():
            assert phi.phi[idx[name]] == pytest.approx(want, abs=5e-3), name

    def test_sums_to_one(self, toy_sdrw_graph):
        phi = vw.subgraph_outlierness(vw.gamma_factor(vw.peel_subgraphs(toy_sdrw_graph)))
        assert abs(phi.phi.sum() - 1.0) < 1e-12

    def test_uniform_gamma_gives_uniform_outlierness(self):
        phi = vw.subgraph_outlierness(vw.GammaFactor(np.full(8, 0.37)))
        assert np.allclose(phi.phi, 1 / 8)

    def test_all_zero_gamma_rejected(self):
        with pytest.raises(ValueError, match="degenerate"):
            vw.subgraph_outlierness(vw.GammaFactor(np.zeros(4)))

    def test_scaling_invariance(self, toy_stats, toy_delta):
        base = vw.build_sdrw_graph(toy_delta, vw.lift_influence(toy_stats, "support"))
        scaled = vw.build_sdrw_graph(toy_delta, vw.lift_influence(toy_stats, "frequency"))
        a = vw.subgraph_outlierness(vw.gamma_factor(vw.peel_subgraphs(base))).phi
        b = vw.subgraph_outlierness(vw.gamma_factor(vw.peel_subgraphs(scaled))).phi
        assert np.abs(a - b).max() < 1e-12


class TestDegreeStationary:
    def test_closed_form_equals_power_iteration(self):
        rng = np.random.default_rng(23)
        for _ in range(30):
            n = int(rng.integers(4, 14))
            a = random_connected_undirected(rng, n)
            g = undirected_graph(a)
            closed = vw.degree_stationary(g).phi
            w = a / a.sum(axis=1, keepdims=True)
            pi = np.full(n, 1.0 / n)
            for _ in range(40_000):
                nxt = w.T @ pi
                if np.abs(nxt - pi).sum() < 1e-15:
                    pi = nxt
                    break
                pi = nxt
            assert np.abs(closed - pi).sum() < 1e-6

    def test_zero_volume_rejected(self):
        with pytest.raises(ValueError, match="volume"):
            vw.degree_stationary(undirected_graph(np.zeros((3, 3))))

    def test_directed_rejected(self, toy_cbrw_graph):
        with pytest.raises(ValueError, match="undirected"):
            vw.degree_stationary(toy_cbrw_graph)


class TestHalfApproximation:
    def test_best_recorded_density_is_half_optimal(self):
        # exhaustive densest subgraph over all subsets on small graphs
        rng = np.random.default_rng(31)
        for _ in range(15):
            n = int(rng.integers(4, 11))
            a = random_connected_undirected(rng, n)
            peel = vw.peel_subgraphs(undirected_graph(a))
            best_greedy = peel.densities.max()
            best_exact = 0.0
            for r in range(1, n + 1):
                for subset in itertools.combinations(range(n), r):
                    idx = np.array(subset)
                    den = a[np.ix_(idx, idx)].sum() / (2 * len(idx))
                    best_exact = max(best_exact, den)
            assert best_greedy >= 0.5 * best_exact - 1e-12
