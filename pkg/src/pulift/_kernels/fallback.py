"""Pure-numpy implementations of the hot kernels.

Semantics must match ``_core.pyx`` bit for bit: the compiled module is an
optimization, never a behavior change.  Parity is enforced by tests.
"""

from __future__ import annotations

import numpy as np

COMPILED = False


def topk_smallest(dist: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k smallest entries per row of ``dist``.

    Ordering key is (value, column index) ascending, so exact value ties
    resolve to the lower index.  Rows are independent.
    """
    rows, n = dist.shape
    out = np.empty((rows, k), dtype=np.int64)
    for r in range(rows):
        row = dist[r]
        kth = np.partition(row, k - 1)[k - 1]
        cand = np.flatnonzero(row <= kth)
        order = np.lexsort((cand, row[cand]))
        out[r] = cand[order[:k]]
    return out


def hist_build(
    binned: np.ndarray,
    idx: np.ndarray,
    grad: np.ndarray,
    hess: np.ndarray,
    n_bins: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-feature histograms of gradient, hessian, and count over ``idx`` rows."""
    d = binned.shape[1]
    hist_g = np.empty((d, n_bins), dtype=np.float64)
    hist_h = np.empty((d, n_bins), dtype=np.float64)
    hist_c = np.empty((d, n_bins), dtype=np.float64)
    sub = binned[idx]
    g = grad[idx]
    h = hess[idx]
    for f in range(d):
        col = sub[:, f]
        hist_g[f] = np.bincount(col, weights=g, minlength=n_bins)
        hist_h[f] = np.bincount(col, weights=h, minlength=n_bins)
        hist_c[f] = np.bincount(col, minlength=n_bins)
    return hist_g, hist_h, hist_c


def apply_tree(
    X: np.ndarray,
    feature: np.ndarray,
    threshold: np.ndarray,
    left: np.ndarray,
    right: np.ndarray,
    value: np.ndarray,
    out: np.ndarray,
) -> None:
    """Route every row of ``X`` to a leaf and add the leaf value into ``out``.

    Internal nodes have ``feature >= 0`` and send ``x[feature] <= threshold``
    left; leaves have ``feature == -1``.
    """
    n = X.shape[0]
    node = np.zeros(n, dtype=np.int64)
    active = np.flatnonzero(feature[node] >= 0)
    while active.size:
        cur = node[active]
        f = feature[cur]
        go_left = X[active, f] <= threshold[cur]
        node[active] = np.where(go_left, left[cur], right[cur])
        active = active[feature[node[active]] >= 0]
    out += value[node]
