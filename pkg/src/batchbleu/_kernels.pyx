# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels: sort-based row deduplication and offset
bincounting. Heavy loops run with the GIL released so caller-side thread
pools get real parallelism on multi-core machines."""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t

cnp.import_array()

NAME = "compiled"

cdef extern from *:
    """
    #include <algorithm>
    #include <cstdint>

    static void bb_argsort_rows(const int64_t* data, int64_t n_cols,
                                int64_t* idx, int64_t n_rows) {
        std::sort(idx, idx + n_rows, [data, n_cols](int64_t a, int64_t b) {
            const int64_t* ra = data + a * n_cols;
            const int64_t* rb = data + b * n_cols;
            for (int64_t k = 0; k < n_cols; ++k) {
                if (ra[k] != rb[k]) return ra[k] < rb[k];
            }
            return false;
        });
    }
    """
    void bb_argsort_rows(const int64_t* data, int64_t n_cols,
                         int64_t* idx, int64_t n_rows) nogil


def unique_rows(rows):
    """Deduplicate the rows of a (T, n) int64 array.

    Returns (unique, inverse); unique rows come out in lexicographic order,
    matching the pure-python fallback exactly.
    """
    cdef cnp.ndarray[int64_t, ndim=2, mode="c"] r = \
        np.ascontiguousarray(rows, dtype=np.int64)
    cdef int64_t t = r.shape[0]
    cdef int64_t n = r.shape[1]
    if t == 0:
        return r.reshape(0, n), np.empty(0, dtype=np.int64)

    cdef cnp.ndarray[int64_t, ndim=1, mode="c"] order = \
        np.arange(t, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1, mode="c"] inverse = \
        np.empty(t, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1, mode="c"] first = \
        np.empty(t, dtype=np.int64)

    cdef int64_t* rp = &r[0, 0]
    cdef int64_t* op = &order[0]
    cdef int64_t* ip = &inverse[0]
    cdef int64_t* fp = &first[0]
    cdef int64_t u = 0, k, i, prev, col
    cdef bint differs

    with nogil:
        bb_argsort_rows(rp, n, op, t)
        for k in range(t):
            i = op[k]
            if k == 0:
                differs = True
            else:
                prev = op[k - 1]
                differs = False
                for col in range(n):
                    if rp[i * n + col] != rp[prev * n + col]:
                        differs = True
                        break
            if differs:
                fp[u] = i
                u += 1
            ip[i] = u - 1

    return np.ascontiguousarray(r[first[:u]]), inverse


def segment_bincount(ids, seg_lengths, num_unique):
    """Count compact IDs per segment; one flat histogram, reshaped (B, U).

    ``ids`` is the concatenation of all segments' IDs; segment i owns the
    next seg_lengths[i] entries and its counts land at offset i * U.
    """
    cdef cnp.ndarray[int64_t, ndim=1, mode="c"] flat = \
        np.ascontiguousarray(ids, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1, mode="c"] lens = \
        np.ascontiguousarray(seg_lengths, dtype=np.int64)
    cdef int64_t b = lens.shape[0]
    cdef int64_t u = num_unique
    if flat.shape[0] != np.sum(lens):
        raise ValueError("segment lengths do not sum to the number of IDs")
    cdef cnp.ndarray[int32_t, ndim=2, mode="c"] counts = \
        np.zeros((b, u), dtype=np.int32)

    cdef int64_t pos = 0, i, j, cid
    cdef int64_t bad = -1
    cdef int32_t* cp
    if u > 0:
        cp = &counts[0, 0]
    cdef int64_t* fl = NULL
    if flat.shape[0] > 0:
        fl = &flat[0]
    cdef int64_t* lp = NULL
    if b > 0:
        lp = &lens[0]

    with nogil:
        for i in range(b):
            for j in range(lp[i]):
                cid = fl[pos]
                pos += 1
                if cid < 0 or cid >= u:
                    bad = cid
                    break
                cp[i * u + cid] += 1
            if bad >= 0:
                break
    if bad >= 0:
        raise ValueError(f"compact ID out of range [0, {u})")
    return counts


def clipped_numerators(ids, seg_lengths, ref_max):
    """Per-segment sum of candidate counts clipped at the reference max.

    Builds the candidate count matrix (offset bincount) and accumulates the
    clipped sum in the same pass: an occurrence contributes while the running
    candidate count has not yet exceeded the reference maximum for its ID.
    """
    cdef cnp.ndarray[int64_t, ndim=1, mode="c"] flat = \
        np.ascontiguousarray(ids, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1, mode="c"] lens = \
        np.ascontiguousarray(seg_lengths, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=2, mode="c"] rmax = \
        np.ascontiguousarray(ref_max, dtype=np.int32)
    cdef int64_t b = lens.shape[0]
    cdef int64_t u = rmax.shape[1]
    if rmax.shape[0] != b:
        raise ValueError("ref_max row count does not match segment count")
    if flat.shape[0] != np.sum(lens):
        raise ValueError("segment lengths do not sum to the number of IDs")
    cdef cnp.ndarray[int32_t, ndim=2, mode="c"] counts = \
        np.zeros((b, u), dtype=np.int32)
    cdef cnp.ndarray[int64_t, ndim=1, mode="c"] num = \
        np.zeros(b, dtype=np.int64)

    cdef int64_t pos = 0, i, j, cid, bad = -1
    cdef int32_t c
    cdef int32_t* cp = NULL
    cdef int32_t* rp = NULL
    if u > 0 and b > 0:
        cp = &counts[0, 0]
        rp = &rmax[0, 0]
    cdef int64_t* fl = NULL
    if flat.shape[0] > 0:
        fl = &flat[0]

    with nogil:
        for i in range(b):
            for j in range(lens[i]):
                cid = fl[pos]
                pos += 1
                if cid < 0 or cid >= u:
                    bad = cid
                    break
                c = cp[i * u + cid] + 1
                cp[i * u + cid] = c
                if c <= rp[i * u + cid]:
                    num[i] += 1
            if bad >= 0:
                break
    if bad >= 0:
        raise ValueError(f"compact ID out of range [0, {u})")
    return num
