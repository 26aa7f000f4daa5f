# cython: language_level=3
"""Buffer-level entry points for batched BLEU.

Accepts contiguous 32- or 64-bit integer buffers for token IDs and lengths,
views them zero-copy when the layout already matches the core's (C-contiguous
int64), and dispatches to the core scoring engine. Every layout conversion is
tallied in a module-level counter so callers can verify the zero-copy path.
"""

import numpy as np

from batchbleu import BleuConfig, TokenBatch, corpus_bleu, sentence_bleu

__version__ = "0.1.0"

_INT_DTYPES = (np.dtype(np.int32), np.dtype(np.int64))

_copy_count = 0


def copy_count():
    """Number of buffer copies made since import (or the last reset)."""
    return _copy_count


def reset_copy_count():
    global _copy_count
    _copy_count = 0


def _as_int64(name, buf, expected_ndim):
    """View ``buf`` as C-contiguous int64, copying (and counting) if needed."""
    global _copy_count
    arr = np.asarray(buf)
    if arr.dtype not in _INT_DTYPES:
        raise TypeError(
            f"{name} must be int32 or int64, got {arr.dtype}"
        )
    if arr.ndim != expected_ndim:
        raise ValueError(
            f"{name} must have {expected_ndim} dimensions, got {arr.ndim}"
        )
    out = np.ascontiguousarray(arr, dtype=np.int64)
    if out is not arr:
        _copy_count += 1
    return out


def _check_dim(name, axis, actual, expected):
    if actual != expected:
        raise ValueError(
            f"{name} dimension {axis} is {actual}, expected {expected}"
        )


def _build_batches(candidates, cand_lengths, references, ref_lengths):
    cand = _as_int64("candidates", candidates, 2)
    b, l = cand.shape

    clens = _as_int64("cand_lengths", cand_lengths, 1)
    _check_dim("cand_lengths", 0, clens.shape[0], b)

    refs = np.asarray(references)
    if refs.ndim == 2:
        refs = _as_int64("references", references, 2)[None, :, :]
        rlens = _as_int64("ref_lengths", ref_lengths, 1)[None, :]
    else:
        refs = _as_int64("references", references, 3)
        rlens = _as_int64("ref_lengths", ref_lengths, 2)
    _check_dim("references", 1, refs.shape[1], b)
    _check_dim("references", 2, refs.shape[2], l)
    _check_dim("ref_lengths", 0, rlens.shape[0], refs.shape[0])
    _check_dim("ref_lengths", 1, rlens.shape[1], b)

    cand_batch = TokenBatch(ids=cand, lengths=clens)
    ref_batches = [
        TokenBatch(ids=refs[r], lengths=rlens[r]) for r in range(refs.shape[0])
    ]
    return cand_batch, ref_batches


def _make_config(max_order, weights, smoothing, eps, k):
    return BleuConfig(max_order=max_order, weights=weights,
                      smoothing=smoothing, eps=eps, k=k)


def score_sentences(candidates, cand_lengths, references, ref_lengths, *,
                    max_order=4, weights=None, smoothing="none",
                    eps=0.1, k=1.0):
    """Per-sentence BLEU over token-ID buffers; returns a float64 (B,) array.

    ``candidates`` is (B, L); ``references`` is (R, B, L) or (B, L) for a
    single reference set, with lengths shaped to match.
    """
    cand, refs = _build_batches(candidates, cand_lengths,
                                references, ref_lengths)
    if cand.batch_size == 0:
        return np.empty(0, dtype=np.float64)
    config = _make_config(max_order, weights, smoothing, eps, k)
    return sentence_bleu(cand, refs, config).scores


def score_corpus(candidates, cand_lengths, references, ref_lengths, *,
                 max_order=4, weights=None, smoothing="none",
                 eps=0.1, k=1.0):
    """Corpus BLEU over the same buffer layout; returns a float."""
    cand, refs = _build_batches(candidates, cand_lengths,
                                references, ref_lengths)
    config = _make_config(max_order, weights, smoothing, eps, k)
    return float(corpus_bleu(cand, refs, config).scores)
