"""Pure-numpy fallback for the counting kernels.

Semantics are identical to the compiled extension: both deduplicate rows by
lexicographic sort, so the unique-row ordering and inverse indices agree
exactly across backends.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def unique_rows(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Deduplicate the rows of a (T, n) int64 array.

    Returns (unique, inverse) with unique of shape (U, n) in lexicographic
    order and inverse of shape (T,) mapping each input row to its unique ID.
    """
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    t, n = rows.shape
    if t == 0:
        return rows.reshape(0, n), np.empty(0, dtype=np.int64)
    order = np.lexsort(rows.T[::-1])
    sorted_rows = rows[order]
    is_new = np.empty(t, dtype=bool)
    is_new[0] = True
    np.any(sorted_rows[1:] != sorted_rows[:-1], axis=1, out=is_new[1:])
    group = np.cumsum(is_new) - 1
    inverse = np.empty(t, dtype=np.int64)
    inverse[order] = group
    return sorted_rows[is_new], inverse


def segment_bincount(ids: np.ndarray, seg_lengths: np.ndarray, num_unique: int) -> np.ndarray:
    """Count IDs per segment via one flat histogram over offset IDs.

    ``ids`` holds the concatenated compact IDs of all segments in order;
    ``seg_lengths[i]`` is segment i's share. Returns (B, U) int32 counts.
    """
    ids = np.ascontiguousarray(ids, dtype=np.int64)
    seg_lengths = np.asarray(seg_lengths, dtype=np.int64)
    b = len(seg_lengths)
    u = int(num_unique)
    if ids.shape[0] != int(seg_lengths.sum()):
        raise ValueError("segment lengths do not sum to the number of IDs")
    if ids.size and (ids.min() < 0 or ids.max() >= u):
        raise ValueError(f"compact ID out of range [0, {u})")
    if u == 0 or ids.size == 0:
        return np.zeros((b, u), dtype=np.int32)
    seg_ids = np.repeat(np.arange(b, dtype=np.int64), seg_lengths)
    flat = np.bincount(seg_ids * u + ids, minlength=b * u)
    return flat.reshape(b, u).astype(np.int32)


def clipped_numerators(ids: np.ndarray, seg_lengths: np.ndarray,
                       ref_max: np.ndarray) -> np.ndarray:
    """Per-segment sum of candidate counts clipped at the reference max.

    Builds the candidate count matrix via segment_bincount and reduces the
    elementwise minimum with ``ref_max`` row by row.
    """
    counts = segment_bincount(ids, seg_lengths, ref_max.shape[1])
    return np.minimum(counts, ref_max).sum(axis=1, dtype=np.int64)
