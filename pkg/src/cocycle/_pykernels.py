"""Pure numpy/scipy implementations of the hot lattice kernels.

These mirror ``_kernels.pyx`` exactly (same inputs, same outputs, same
in-place semantics) and are used whenever the compiled extension is not
available. Array conventions: ``h`` has shape ``(H+1, W)`` and ``v`` has
shape ``(H, W+1)``, both indexed ``[y, x]``.
"""
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


def fill_forward(h, v, start, coins):
    """Complete squares row by row, bottom-up, each row left to right.

    Row ``y`` is filled for squares ``x >= start[y]``. The left edge of the
    first square and every bottom edge must already be set. Writes the top
    and right edges in place.
    """
    H = v.shape[0]
    W = h.shape[1]
    for y in range(H):
        a = int(start[y])
        if a >= W:
            continue
        b = h[y, a:W]
        c = coins[y, a:W]
        n = W - a
        # right edge follows the left edge unless bottom != coin, which pins it to the coin
        pinned = np.where(b != c, np.arange(n), -1)
        last = np.maximum.accumulate(pinned)
        right = np.where(last >= 0, c[np.maximum(last, 0)], v[y, a]).astype(np.uint8)
        left = np.empty(n, dtype=np.uint8)
        left[0] = v[y, a]
        left[1:] = right[:-1]
        h[y + 1, a:W] = np.where(left != b, b, c)
        v[y, a + 1:W + 1] = right


def _canonical(labels):
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(first.size, dtype=np.int32)
    rank[np.argsort(first, kind="stable")] = np.arange(first.size, dtype=np.int32)
    return rank[inverse]


def zero_labels(h, v):
    """Label vertices by connectivity over 0-labelled edges.

    Ids are assigned in order of first appearance in a row-major scan.
    """
    Hp1, W = h.shape
    Wp1 = W + 1
    n = Hp1 * Wp1
    idx = np.arange(n).reshape(Hp1, Wp1)
    hy, hx = np.nonzero(h == 0)
    vy, vx = np.nonzero(v == 0)
    src = np.concatenate([idx[hy, hx], idx[vy, vx]])
    dst = np.concatenate([idx[hy, hx + 1], idx[vy + 1, vx]])
    graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    return _canonical(labels).reshape(Hp1, Wp1).astype(np.int32)


def directed_zero_depth(h, v, cap):
    """Length of the longest east/south 0-path from each vertex, capped at ``cap``."""
    Hp1, W = h.shape
    Wp1 = W + 1
    depth = np.zeros((Hp1, Wp1), dtype=np.int32)
    xs = np.arange(Wp1, dtype=np.int64)
    big = cap + Wp1 + 2
    for y in range(Hp1):
        if y > 0:
            south = np.where(v[y - 1] == 0, depth[y - 1].astype(np.int64) + 1, 0)
        else:
            south = np.zeros(Wp1, dtype=np.int64)
        # segments of vertices joined by east 0-edges; best[x] = max over the
        # reachable part of the segment of (south[j] + j - x)
        breaks = np.ones(Wp1, dtype=np.int64)
        breaks[1:] = (h[y] != 0)
        seg = np.cumsum(breaks) - 1
        offset = (seg[-1] - seg) * big
        val = south + xs + offset
        best = np.maximum.accumulate(val[::-1])[::-1] - offset - xs
        depth[y] = np.minimum(best, cap)
    return depth
