"""Compiled hot kernels: k-NN top-k selection, histogram building, tree apply.

Must stay semantically identical to ``fallback.py``; the test suite checks
the two backends element for element on random inputs.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

COMPILED = True


def topk_smallest(double[:, ::1] dist, int k):
    """Indices of the k smallest entries per row, ties to the lower index."""
    cdef Py_ssize_t rows = dist.shape[0]
    cdef Py_ssize_t n = dist.shape[1]
    out_arr = np.empty((rows, k), dtype=np.int64)
    cdef long long[:, ::1] out = out_arr
    heap_d_arr = np.empty(k, dtype=np.float64)
    heap_i_arr = np.empty(k, dtype=np.int64)
    cdef double[::1] heap_d = heap_d_arr
    cdef long long[::1] heap_i = heap_i_arr
    cdef Py_ssize_t r, j, pos, child, size
    cdef double dv, td
    cdef long long iv, ti

    for r in range(rows):
        size = 0
        for j in range(n):
            dv = dist[r, j]
            if size < k:
                # push (dv, j) onto the max-heap
                pos = size
                heap_d[pos] = dv
                heap_i[pos] = j
                size += 1
                while pos > 0:
                    child = (pos - 1) >> 1
                    if heap_d[child] < heap_d[pos] or (
                        heap_d[child] == heap_d[pos] and heap_i[child] < heap_i[pos]
                    ):
                        td = heap_d[child]; heap_d[child] = heap_d[pos]; heap_d[pos] = td
                        ti = heap_i[child]; heap_i[child] = heap_i[pos]; heap_i[pos] = ti
                        pos = child
                    else:
                        break
            elif dv < heap_d[0] or (dv == heap_d[0] and j < heap_i[0]):
                # replace the root and sift down
                heap_d[0] = dv
                heap_i[0] = j
                pos = 0
                while True:
                    child = 2 * pos + 1
                    if child >= k:
                        break
                    if child + 1 < k and (
                        heap_d[child + 1] > heap_d[child] or (
                            heap_d[child + 1] == heap_d[child]
                            and heap_i[child + 1] > heap_i[child]
                        )
                    ):
                        child += 1
                    if heap_d[pos] > heap_d[child] or (
                        heap_d[pos] == heap_d[child] and heap_i[pos] > heap_i[child]
                    ):
                        break
                    td = heap_d[child]; heap_d[child] = heap_d[pos]; heap_d[pos] = td
                    ti = heap_i[child]; heap_i[child] = heap_i[pos]; heap_i[pos] = ti
                    pos = child
        # pop everything; the heap yields largest first, fill back to front
        for j in range(k - 1, -1, -1):
            out[r, j] = heap_i[0]
            size -= 1
            heap_d[0] = heap_d[size]
            heap_i[0] = heap_i[size]
            pos = 0
            while True:
                child = 2 * pos + 1
                if child >= size:
                    break
                if child + 1 < size and (
                    heap_d[child + 1] > heap_d[child] or (
                        heap_d[child + 1] == heap_d[child]
                        and heap_i[child + 1] > heap_i[child]
                    )
                ):
                    child += 1
                if heap_d[pos] > heap_d[child] or (
                    heap_d[pos] == heap_d[child] and heap_i[pos] > heap_i[child]
                ):
                    break
                td = heap_d[child]; heap_d[child] = heap_d[pos]; heap_d[pos] = td
                ti = heap_i[child]; heap_i[child] = heap_i[pos]; heap_i[pos] = ti
                pos = child
    return out_arr


def hist_build(
    const unsigned char[:, ::1] binned,
    const long long[::1] idx,
    const double[::1] grad,
    const double[::1] hess,
    int n_bins,
):
    """Per-feature gradient/hessian/count histograms over the given rows."""
    cdef Py_ssize_t d = binned.shape[1]
    cdef Py_ssize_t m = idx.shape[0]
    g_arr = np.zeros((d, n_bins), dtype=np.float64)
    h_arr = np.zeros((d, n_bins), dtype=np.float64)
    c_arr = np.zeros((d, n_bins), dtype=np.float64)
    cdef double[:, ::1] hist_g = g_arr
    cdef double[:, ::1] hist_h = h_arr
    cdef double[:, ::1] hist_c = c_arr
    cdef Py_ssize_t s, f, row
    cdef int b
    cdef double g, h
    with nogil:
        for s in range(m):
            row = idx[s]
            g = grad[row]
            h = hess[row]
            for f in range(d):
                b = binned[row, f]
                hist_g[f, b] += g
                hist_h[f, b] += h
                hist_c[f, b] += 1.0
    return g_arr, h_arr, c_arr


def apply_tree(
    const double[:, ::1] X,
    const int[::1] feature,
    const double[::1] threshold,
    const int[::1] left,
    const int[::1] right,
    const double[::1] value,
    double[::1] out,
):
    """Add each row's leaf value into ``out`` (x[feature] <= threshold goes left)."""
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t i
    cdef int node
    with nogil:
        for i in range(n):
            node = 0
            while feature[node] >= 0:
                if X[i, feature[node]] <= threshold[node]:
                    node = left[node]
                else:
                    node = right[node]
            out[i] += value[node]
