# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernel: cross-feature co-occurrence counting.

The count loop is the O(N * D^2) core of the whole library; everything
else downstream is linear in the number of distinct co-occurring pairs.
Cells arrive transposed (one contiguous row per feature) so each pair
scan streams two flat arrays.  The GIL is released inside the scan so
callers can overlap work across threads.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def count_pairs(const cnp.int32_t[:, ::1] cells_t,
                const cnp.int64_t[::1] offsets,
                const cnp.int32_t[::1] feat_a,
                const cnp.int32_t[::1] feat_b):
    """Count co-occurrences for the given feature pairs.

    ``cells_t`` is the (D, N) transposed id matrix; ``offsets[j]`` is the
    start of feature j's global id range.  Returns three int64 arrays
    (u, v, count) in (u, v) ascending order per pair, pairs concatenated
    in input order.
    """
    cdef Py_ssize_t n = cells_t.shape[1]
    cdef Py_ssize_t k, i
    cdef cnp.int64_t o1, o2, d2
    cdef cnp.int32_t j1, j2
    cdef cnp.int64_t[::1] buf
    cdef const cnp.int32_t[::1] col1, col2

    out_u = []
    out_v = []
    out_c = []
    for k in range(feat_a.shape[0]):
        j1 = feat_a[k]
        j2 = feat_b[k]
        o1 = offsets[j1]
        o2 = offsets[j2]
        d2 = offsets[j2 + 1] - o2
        col1 = cells_t[j1]
        col2 = cells_t[j2]
        buf_arr = np.zeros((offsets[j1 + 1] - o1) * d2, dtype=np.int64)
        buf = buf_arr
        with nogil:
            for i in range(n):
                buf[(<cnp.int64_t>col1[i] - o1) * d2 + (<cnp.int64_t>col2[i] - o2)] += 1
        nz = np.flatnonzero(buf_arr)
        out_u.append(nz // d2 + o1)
        out_v.append(nz % d2 + o2)
        out_c.append(buf_arr[nz])

    if not out_u:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy()
    return (np.concatenate(out_u), np.concatenate(out_v), np.concatenate(out_c))
