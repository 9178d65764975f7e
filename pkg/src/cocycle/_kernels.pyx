# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice kernels. Semantics match ``_pykernels`` exactly."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def fill_forward(cnp.uint8_t[:, ::1] h, cnp.uint8_t[:, ::1] v,
                 cnp.int64_t[::1] start, cnp.uint8_t[:, ::1] coins):
    cdef Py_ssize_t H = v.shape[0]
    cdef Py_ssize_t W = h.shape[1]
    cdef Py_ssize_t x, y
    cdef cnp.uint8_t left, bottom, coin
    for y in range(H):
        if start[y] >= W:
            continue
        left = v[y, start[y]]
        for x in range(start[y], W):
            bottom = h[y, x]
            coin = coins[y, x]
            if left != bottom:
                h[y + 1, x] = bottom
                # right == left
            else:
                h[y + 1, x] = coin
                left = coin
            v[y, x + 1] = left


cdef inline Py_ssize_t _find(cnp.int64_t* parent, Py_ssize_t i) noexcept nogil:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


cdef inline void _union(cnp.int64_t* parent, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    a = _find(parent, a)
    b = _find(parent, b)
    if a < b:
        parent[b] = a
    elif b < a:
        parent[a] = b


def zero_labels(const cnp.uint8_t[:, ::1] h, const cnp.uint8_t[:, ::1] v):
    cdef Py_ssize_t Hp1 = h.shape[0]
    cdef Py_ssize_t W = h.shape[1]
    cdef Py_ssize_t Wp1 = W + 1
    cdef Py_ssize_t n = Hp1 * Wp1
    cdef Py_ssize_t x, y, i, r
    parent_arr = np.arange(n, dtype=np.int64)
    cdef cnp.int64_t[::1] parent_mv = parent_arr
    cdef cnp.int64_t* parent = &parent_mv[0]
    with nogil:
        for y in range(Hp1):
            for x in range(W):
                if h[y, x] == 0:
                    _union(parent, y * Wp1 + x, y * Wp1 + x + 1)
        for y in range(Hp1 - 1):
            for x in range(Wp1):
                if v[y, x] == 0:
                    _union(parent, y * Wp1 + x, (y + 1) * Wp1 + x)
    out = np.empty((Hp1, Wp1), dtype=np.int32)
    cdef cnp.int32_t[:, ::1] labels = out
    remap_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] remap = remap_arr
    cdef cnp.int64_t count = 0
    with nogil:
        for y in range(Hp1):
            for x in range(Wp1):
                r = _find(parent, y * Wp1 + x)
                if remap[r] < 0:
                    remap[r] = count
                    count += 1
                labels[y, x] = <cnp.int32_t>remap[r]
    return out


def directed_zero_depth(const cnp.uint8_t[:, ::1] h, const cnp.uint8_t[:, ::1] v, int cap):
    cdef Py_ssize_t Hp1 = h.shape[0]
    cdef Py_ssize_t W = h.shape[1]
    cdef Py_ssize_t x, y
    cdef int best, cand
    out = np.zeros((Hp1, W + 1), dtype=np.int32)
    cdef cnp.int32_t[:, ::1] depth = out
    with nogil:
        for y in range(Hp1):
            for x in range(W, -1, -1):
                best = 0
                if x < W and h[y, x] == 0:
                    best = depth[y, x + 1] + 1
                if y > 0 and v[y - 1, x] == 0:
                    cand = depth[y - 1, x] + 1
                    if cand > best:
                        best = cand
                if best > cap:
                    best = cap
                depth[y, x] = best
    return out
