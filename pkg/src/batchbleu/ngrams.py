"""Batched n-gram extraction, compact dictionary construction, and
per-sentence counting via offset bincounting.

The counting index space is the set of n-grams actually present in the
batch (candidates plus all references), never the vocabulary: memory is
proportional to B * U + T * n for U unique and T total n-grams.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import _backend
from .batch import TokenBatch

_INT64_MAX = np.iinfo(np.int64).max


class CapacityError(RuntimeError):
    """B * U would overflow the 64-bit offset index space.

    Callers should shrink the batch (or chunk it) and retry.
    """


@dataclass(frozen=True)
class NGramSlices:
    """All order-n windows of a batch, plus how many are valid per row."""

    order: int
    slices: np.ndarray       # (B, S, n) with S = max(0, L - n + 1); view when possible
    valid_counts: np.ndarray  # (B,) = max(0, lengths - n + 1)

    @property
    def total_valid(self) -> int:
        return int(self.valid_counts.sum())


@dataclass(frozen=True)
class NGramDictionary:
    """Unique n-grams of one order and the map back from every occurrence."""

    order: int
    unique_ngrams: np.ndarray    # (U, n)
    inverse_indices: np.ndarray  # (T,) compact ID of each flattened n-gram

    @property
    def num_unique(self) -> int:
        return self.unique_ngrams.shape[0]


@dataclass(frozen=True)
class CountMatrix:
    """Per-sentence occurrence counts over compact IDs, shape (B, U)."""

    counts: np.ndarray


def extract_ngrams(batch: TokenBatch, n: int) -> NGramSlices:
    """Window every sentence of the batch into its order-n slices.

    Rows shorter than n contribute no valid slices; padding never does.
    """
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    b, l = batch.ids.shape
    if l >= n:
        slices = sliding_window_view(batch.ids, n, axis=1)
    else:
        slices = np.empty((b, 0, n), dtype=np.int64)
    valid = np.maximum(batch.lengths - n + 1, 0)
    return NGramSlices(order=n, slices=slices, valid_counts=valid)


def flatten_valid(slices: NGramSlices) -> np.ndarray:
    """Concatenate the valid windows of every row into a (T, n) array."""
    s = slices.slices
    mask = np.arange(s.shape[1]) < slices.valid_counts[:, None]
    return np.ascontiguousarray(s[mask].reshape(-1, slices.order))


def build_dictionary(candidate_slices: NGramSlices,
                     reference_slices: Sequence[NGramSlices]) -> NGramDictionary:
    """Deduplicate the batch's n-grams into a compact dictionary.

    Flattening order is fixed: all candidate n-grams first (row-major),
    then each reference set in argument order. inverse_indices follows it.
    """
    if not reference_slices:
        raise ValueError("at least one reference slice set is required")
    for ref in reference_slices:
        if ref.order != candidate_slices.order:
            raise ValueError(
                f"order mismatch: candidate order {candidate_slices.order}, "
                f"reference order {ref.order}"
            )
    parts = [flatten_valid(candidate_slices)]
    parts.extend(flatten_valid(r) for r in reference_slices)
    rows = np.concatenate(parts, axis=0)
    unique, inverse = _backend.unique_rows(rows)
    return NGramDictionary(order=candidate_slices.order,
                           unique_ngrams=unique, inverse_indices=inverse)


def _guard_capacity(batch_size: int, num_unique: int) -> None:
    if num_unique > 0 and batch_size > _INT64_MAX // max(num_unique, 1):
        raise CapacityError(
            f"offset index space B*U = {batch_size}*{num_unique} exceeds int64"
        )


def segmented_bincount(flat_ids: np.ndarray, seg_lengths: np.ndarray,
                       num_unique: int) -> np.ndarray:
    """Flat-array fast path behind batched_bincount; returns (B, U) int32."""
    _guard_capacity(len(seg_lengths), num_unique)
    return _backend.segment_bincount(flat_ids, seg_lengths, num_unique)


def batched_bincount(compact_ids: Sequence[np.ndarray], num_unique: int,
                     batch_size: int) -> CountMatrix:
    """Count each sentence's compact IDs with a single flat histogram.

    Sentence i's IDs are offset by i * num_unique so every sentence owns a
    non-overlapping range; one bincount then yields all rows at once.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    if len(compact_ids) != batch_size:
        raise ValueError(
            f"got {len(compact_ids)} ID lists for batch_size {batch_size}"
        )
    seg_lengths = np.array([len(s) for s in compact_ids], dtype=np.int64)
    if seg_lengths.sum():
        flat = np.concatenate([np.asarray(s, dtype=np.int64) for s in compact_ids])
    else:
        flat = np.empty(0, dtype=np.int64)
    return CountMatrix(counts=segmented_bincount(flat, seg_lengths, num_unique))


def packed_order_ids(ids: np.ndarray, lengths: np.ndarray, max_order: int):
    """Compact n-gram IDs for orders 1..max_order over one padded batch.

    Progressive packing: order-1 IDs come from deduplicating the valid
    tokens; an order-n gram is encoded exactly as (ID of its order-(n-1)
    prefix, compact last token), packed into one int64 key and deduplicated
    again. Collisions are impossible because the key determines the pair and
    the pair determines the n-gram by induction. IDs are not lexicographic,
    which the dictionary contract deliberately leaves open.

    Yields (inverse, valid_counts, num_unique) per order, where ``inverse``
    holds the compact ID of every valid n-gram in row-major order.
    """
    if max_order < 1:
        raise ValueError(f"max order must be >= 1, got {max_order}")
    b, l = ids.shape
    lengths = np.asarray(lengths, dtype=np.int64)

    valid = np.arange(l) < lengths[:, None]
    flat_tok = ids[valid]
    if flat_tok.size:
        uniq_tok, tok_inv = np.unique(flat_tok, return_inverse=True)
        tok_inv = tok_inv.astype(np.int64, copy=False)
    else:
        uniq_tok = np.empty(0, dtype=np.int64)
        tok_inv = np.empty(0, dtype=np.int64)
    u1 = len(uniq_tok)
    tok = np.zeros((b, l), dtype=np.int64)
    tok[valid] = tok_inv
    yield tok_inv, lengths.copy(), u1

    gram = tok.copy()
    u_prev = u1
    for n in range(2, max_order + 1):
        s = l - n + 1
        counts_n = np.maximum(lengths - n + 1, 0)
        if s <= 0 or u1 == 0 or u_prev == 0:
            yield np.empty(0, dtype=np.int64), counts_n, 0
            continue
        if u_prev > _INT64_MAX // u1:
            raise CapacityError(
                f"packed key space {u_prev}*{u1} exceeds int64 at order {n}"
            )
        valid_n = np.arange(s) < counts_n[:, None]
        keys = gram[:, :s] * u1 + tok[:, n - 1:]
        flat = keys[valid_n]
        if flat.size:
            uniq_k, inv = np.unique(flat, return_inverse=True)
            inv = inv.astype(np.int64, copy=False)
        else:
            uniq_k = np.empty(0, dtype=np.int64)
            inv = np.empty(0, dtype=np.int64)
        gram[:, :s][valid_n] = inv
        u_prev = len(uniq_k)
        yield inv, counts_n, u_prev


def clipped_row_sums(cand_ids: np.ndarray, cand_counts: np.ndarray,
                     ref_max: np.ndarray) -> np.ndarray:
    """Per-sentence clipped numerators from flat candidate compact IDs."""
    _guard_capacity(len(cand_counts), ref_max.shape[1])
    return _backend.clipped_numerators(cand_ids, cand_counts, ref_max)


def max_reference_counts(ref_counts: Sequence[CountMatrix]) -> CountMatrix:
    """Elementwise maximum across reference count matrices."""
    if not ref_counts:
        raise ValueError("at least one reference count matrix is required")
    shape = ref_counts[0].counts.shape
    out = ref_counts[0].counts.copy()
    for m in ref_counts[1:]:
        if m.counts.shape != shape:
            raise ValueError(f"shape mismatch: {m.counts.shape} vs {shape}")
        np.maximum(out, m.counts, out=out)
    return CountMatrix(counts=out)


def clip_counts(candidate: CountMatrix, reference_max: CountMatrix) -> CountMatrix:
    """Clip candidate counts at the per-n-gram reference maximum."""
    if candidate.counts.shape != reference_max.counts.shape:
        raise ValueError(
            f"shape mismatch: {candidate.counts.shape} vs {reference_max.counts.shape}"
        )
    return CountMatrix(counts=np.minimum(candidate.counts, reference_max.counts))
