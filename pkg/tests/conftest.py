import numpy as np
import pytest

import valuewalk as vw

# 12-object worked example: 4 categorical features plus a binary tag on
# the one genuinely outlying object (row 0); row 9 is a noisy look-alike.
TOY_FEATURES = ["Gender", "Education", "Marriage", "Income"]
TOY_ROWS = [
    ("male", "master", "divorced", "low"),
    ("female", "master", "married", "medium"),
    ("male", "master", "single", "high"),
    ("male", "bachelor", "married", "medium"),
    ("female", "master", "divorced", "medium"),
    ("male", "PhD", "married", "high"),
    ("male", "master", "single", "high"),
    ("female", "PhD", "single", "medium"),
    ("male", "PhD", "married", "medium"),
    ("male", "bachelor", "single", "low"),
    ("female", "PhD", "married", "medium"),
    ("male", "master", "single", "low"),
]
TOY_LABELS = [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]


def make_toy_dataset() -> vw.CategoricalDataset:
    columns = [list(c) for c in zip(*TOY_ROWS)]
    return vw.from_columns(TOY_FEATURES, columns, labels=TOY_LABELS)


@pytest.fixture(scope="session")
def toy_dataset():
    return make_toy_dataset()


@pytest.fixture(scope="session")
def toy_stats(toy_dataset):
    return vw.compute_stats(toy_dataset)


@pytest.fixture(scope="session")
def toy_delta(toy_stats):
    return vw.intra_outlierness(toy_stats)


@pytest.fixture(scope="session")
def vid(toy_dataset):
    """Map a bare value string ('bachelor') to its global id in the toy data."""
    lookup = {name.split("=", 1)[1]: i for i, name in enumerate(toy_dataset.value_names)}
    return lambda name: lookup[name]


@pytest.fixture(scope="session")
def toy_cbrw_graph(toy_delta, toy_stats):
    return vw.build_cbrw_graph(toy_delta, vw.conditional_influence(toy_stats))


@pytest.fixture(scope="session")
def toy_sdrw_graph(toy_delta, toy_stats):
    return vw.build_sdrw_graph(toy_delta, vw.lift_influence(toy_stats))


def random_delta_hat(rng, n):
    return rng.uniform(0.05, 0.95, size=n)


def random_directed_graph(rng, n, density=0.5):
    """Random nonnegative directed adjacency with zero diagonal as CSR."""
    from scipy import sparse

    a = rng.random((n, n)) * (rng.random((n, n)) < density)
    np.fill_diagonal(a, 0.0)
    return sparse.csr_matrix(a)


def random_connected_undirected(rng, n, extra_density=0.3):
    """Random connected, non-bipartite weighted undirected adjacency (dense)."""
    a = np.triu(rng.random((n, n)) * (rng.random((n, n)) < extra_density), k=1)
    for i in range(n - 1):  # spanning path keeps it connected
        if a[i, i + 1] == 0:
            a[i, i + 1] = rng.uniform(0.1, 1.0)
    if n >= 3 and a[0, 2] == 0:  # a triangle breaks bipartiteness
        a[0, 2] = rng.uniform(0.1, 1.0)
    return a + a.T
