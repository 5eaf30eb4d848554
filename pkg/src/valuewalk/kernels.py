"""Co-occurrence counting kernels with a compiled core and numpy fallback.

At import time the Cython extension is picked up when present; setting
the environment variable ``VALUEWALK_NO_EXT=1`` forces the pure numpy
path (used by the benchmark and the backend-equivalence tests).  Both
backends emit identical arrays in identical order, so downstream results
are bit-for-bit independent of the backend and of the thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

try:  # pragma: no cover  (absence only on builds without a compiler)
    from . import _speedups
except ImportError:
    _speedups = None

HAVE_NATIVE = _speedups is not None

# Above this domain-product size the dense count buffer is not worth it
# and the sort-based path is used instead, whatever the backend.
_DENSE_BUFFER_CAP = 1 << 22


def _use_native() -> bool:
    return HAVE_NATIVE and os.environ.get("VALUEWALK_NO_EXT", "") != "1"


def backend_name() -> str:
    return "compiled" if _use_native() else "numpy"


def value_supports(cells: np.ndarray, n_values: int) -> np.ndarray:
    """Per-value occurrence counts over all cells."""
    return np.bincount(cells.ravel(), minlength=n_values).astype(np.int64)


def _count_pair_sorted(cells_t, offsets, j1, j2):
    """Sort-based counting for one pair; domain-size independent."""
    o1, o2 = offsets[j1], offsets[j2]
    d2 = offsets[j2 + 1] - o2
    codes = (cells_t[j1].astype(np.int64) - o1) * d2 + (cells_t[j2] - o2)
    uniq, cnt = np.unique(codes, return_counts=True)
    return uniq // d2 + o1, uniq % d2 + o2, cnt.astype(np.int64)


def _count_pairs_numpy(cells_t, offsets, feat_a, feat_b):
    out_u, out_v, out_c = [], [], []
    for j1, j2 in zip(feat_a, feat_b):
        o1, o2 = offsets[j1], offsets[j2]
        d1 = offsets[j1 + 1] - o1
        d2 = offsets[j2 + 1] - o2
        if d1 * d2 > _DENSE_BUFFER_CAP:
            u, v, c = _count_pair_sorted(cells_t, offsets, j1, j2)
        else:
            codes = (cells_t[j1].astype(np.int64) - o1) * d2 + (cells_t[j2] - o2)
            counts = np.bincount(codes, minlength=d1 * d2)
            nz = np.flatnonzero(counts)
            u, v, c = nz // d2 + o1, nz % d2 + o2, counts[nz].astype(np.int64)
        out_u.append(u)
        out_v.append(v)
        out_c.append(c)
    if not out_u:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy()
    return np.concatenate(out_u), np.concatenate(out_v), np.concatenate(out_c)


def _count_pairs_native(cells_t, offsets, feat_a, feat_b):
    # Pairs with huge domain products bypass the dense buffer path.
    prod = (offsets[feat_a + 1] - offsets[feat_a]) * (offsets[feat_b + 1] - offsets[feat_b])
    small = prod <= _DENSE_BUFFER_CAP
    if small.all():
        return _speedups.count_pairs(cells_t, offsets, feat_a, feat_b)
    parts = []
    for k in range(len(feat_a)):
        fa = feat_a[k : k + 1]
        fb = feat_b[k : k + 1]
        if small[k]:
            parts.append(_speedups.count_pairs(cells_t, offsets, fa, fb))
        else:
            parts.append(_count_pair_sorted(cells_t, offsets, int(fa[0]), int(fb[0])))
    return tuple(np.concatenate([p[i] for p in parts]) for i in range(3))


def cooccurrence_counts(
    cells: np.ndarray,
    offsets: np.ndarray,
    threads: int = 1,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Co-occurrence counts for every cross-feature pair (j1 < j2).

    Returns COO arrays (u, v, count) with u from the lower-indexed feature,
    ordered by (j1, j2) pair then by (u, v).  The input is transposed once
    so every pair scan streams two contiguous columns.  The output is
    deterministic for any ``threads`` value: work is split into contiguous
    pair blocks and the per-block results concatenated in block order.
    """
    cells_t = np.ascontiguousarray(np.asarray(cells, dtype=np.int32).T)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    d = len(offsets) - 1
    feat_a, feat_b = [np.asarray(x, dtype=np.int32) for x in np.triu_indices(d, k=1)]
    count_fn = _count_pairs_native if _use_native() else _count_pairs_numpy

    n_pairs = len(feat_a)
    if threads <= 1 or n_pairs < 2 * threads:
        return count_fn(cells_t, offsets, feat_a, feat_b)

    bounds = np.linspace(0, n_pairs, threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(
            pool.map(
                lambda se: count_fn(cells_t, offsets, feat_a[se[0] : se[1]], feat_b[se[0] : se[1]]),
                zip(bounds[:-1], bounds[1:]),
            )
        )
    return tuple(np.concatenate([p[i] for p in parts]) for i in range(3))
