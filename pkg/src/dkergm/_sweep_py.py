"""Vectorized numpy version of the mask sweep, used when the extension is absent."""

import numpy as np

from .graph import degree_pairs, slot_pairs


def _unique_rows(a):
    if a.shape[0] == 0:
        return a, np.zeros(0, dtype=np.int64)
    if a.shape[1] == 0:
        return a[:1], np.array([a.shape[0]], dtype=np.int64)
    a = np.ascontiguousarray(a)
    view = a.view(np.dtype((np.void, a.dtype.itemsize * a.shape[1]))).ravel()
    _, first, counts = np.unique(view, return_index=True, return_counts=True)
    rows = a[first]
    order = np.lexsort(rows.T[::-1])
    return rows[order], counts[order].astype(np.int64)


def tally(n, start, stop, bidegree=False, restricted=False):
    if n < 1:
        raise ValueError("n must be positive")
    slots = n * (n - 1) // 2
    if start < 0 or stop < start or stop > (1 << slots):
        raise ValueError("mask range out of bounds")

    masks = np.arange(start, stop, dtype=np.int64)
    N = masks.size
    bits = [((masks >> s) & 1).astype(np.uint8) for s in range(slots)]

    deg = np.zeros((N, n), dtype=np.uint8)
    for b, (i, j) in zip(bits, slot_pairs(n)):
        deg[:, i] += b
        deg[:, j] += b

    keep = (deg > 0).all(axis=1) if restricted else np.ones(N, dtype=bool)
    rows = np.arange(N)

    if not bidegree:
        hist = np.zeros((N, n), dtype=np.uint8)
        for v in range(n):
            # one increment per row, so buffered fancy-index add is safe
            hist[rows, deg[:, v]] += 1
        return _unique_rows(hist[keep])

    pidx = np.zeros((n, n), dtype=np.int64)
    for p, (k1, k2) in enumerate(degree_pairs(n)):
        pidx[k1, k2] = pidx[k2, k1] = p
    bideg = np.zeros((N, len(degree_pairs(n))), dtype=np.uint8)
    for b, (i, j) in zip(bits, slot_pairs(n)):
        on = b.astype(bool)
        bideg[rows[on], pidx[deg[on, i], deg[on, j]]] += 1
    return _unique_rows(bideg[keep])
