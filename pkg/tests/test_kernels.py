"""Backend equivalence: the compiled kernel and the numpy fallback must
produce identical arrays, in identical order, for any thread count."""

import os
import subprocess
import sys

import numpy as np
import pytest

from valuewalk import kernels


def random_cells(rng, n, d, max_dom=6):
    doms = rng.integers(2, max_dom + 1, size=d)
    offsets = np.zeros(d + 1, dtype=np.int64)
    offsets[1:] = np.cumsum(doms)
    cells = np.zeros((n, d), dtype=np.int32)
    for j in range(d):
        cells[:, j] = offsets[j] + rng.integers(0, doms[j], size=n)
    return cells, offsets


class TestBackends:
    def test_numpy_path_matches_compiled(self):
        if not kernels.HAVE_NATIVE:
            pytest.skip("extension not built; nothing to compare")
        rng = np.random.default_rng(1)
        for _ in range(10):
            n, d = int(rng.integers(5, 400)), int(rng.integers(2, 9))
            cells, offsets = random_cells(rng, n, d)
            cells_t = np.ascontiguousarray(cells.T)
            feat_a, feat_b = [np.asarray(x, np.int32) for x in np.triu_indices(d, k=1)]
            native = kernels._count_pairs_native(cells_t, offsets, feat_a, feat_b)
            pure = kernels._count_pairs_numpy(cells_t, offsets, feat_a, feat_b)
            for a, b in zip(native, pure):
                assert np.array_equal(a, b)

    def test_thread_partitioning_is_order_stable(self):
        rng = np.random.default_rng(2)
        cells, offsets = random_cells(rng, 300, 7)
        base = kernels.cooccurrence_counts(cells, offsets, threads=1)
        for threads in (2, 3, 8):
            out = kernels.cooccurrence_counts(cells, offsets, threads=threads)
            for a, b in zip(base, out):
                assert np.array_equal(a, b)

    def test_counts_match_brute_force(self):
        rng = np.random.default_rng(3)
        cells, offsets = random_cells(rng, 50, 4)
        u, v, c = kernels.cooccurrence_counts(cells, offsets)
        # brute-force dict oracle
        expected = {}
        d = len(offsets) - 1
        for row in cells:
            for j1 in range(d):
                for j2 in range(j1 + 1, d):
                    key = (int(row[j1]), int(row[j2]))
                    expected[key] = expected.get(key, 0) + 1
        got = {(int(a), int(b)): int(n) for a, b, n in zip(u, v, c)}
        assert got == expected

    def test_single_feature_has_no_pairs(self):
        cells = np.zeros((10, 1), dtype=np.int32)
        u, v, c = kernels.cooccurrence_counts(cells, np.array([0, 1], dtype=np.int64))
        assert len(u) == len(v) == len(c) == 0

    def test_env_var_forces_numpy_backend(self):
        code = (
            "import valuewalk.kernels as k; print(k.backend_name())"
        )
        env = dict(os.environ, VALUEWALK_NO_EXT="1")
        out = subprocess.run(
            [sys.executable, "-c", code], capture_output=True, text=True, env=env
        )
        assert out.stdout.strip() == "numpy"

    def test_value_supports(self):
        cells = np.array([[0, 2], [1, 2], [0, 3]], dtype=np.int32)
        assert kernels.value_supports(cells, 4).tolist() == [2, 1, 2, 1]
