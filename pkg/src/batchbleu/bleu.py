"""Per-sentence and corpus BLEU assembled from batched counting statistics."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import ngrams
from .batch import TokenBatch

SMOOTHING_METHODS = ("none", "floor", "add-k", "exp")

# Soft ceiling (bytes) for one per-order count matrix; batches whose B * U
# would exceed it are split into independently counted chunks. Kept small so
# the matrices stay cache-resident during counting. Chunking is
# score-neutral: per-sentence statistics never depend on batch composition.
_COUNT_BYTES_BUDGET = 512 * 1024


@dataclass(frozen=True)
class BleuConfig:
    """Max n-gram order, per-order weights, and smoothing selection."""

    max_order: int = 4
    weights: Optional[Sequence[float]] = None
    smoothing: str = "none"
    eps: float = 0.1      # floor smoothing
    k: float = 1.0        # add-k smoothing, orders >= 2

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError("max_order must be >= 1")
        if self.smoothing not in SMOOTHING_METHODS:
            raise ValueError(
                f"unknown smoothing {self.smoothing!r}; expected one of {SMOOTHING_METHODS}"
            )
        if self.eps <= 0:
            raise ValueError("eps must be > 0")
        if self.k <= 0:
            raise ValueError("k must be > 0")
        if self.weights is None:
            w = np.full(self.max_order, 1.0 / self.max_order)
        else:
            w = np.asarray(self.weights, dtype=np.float64)
            if w.shape != (self.max_order,):
                raise ValueError(
                    f"expected {self.max_order} weights, got shape {w.shape}"
                )
            if np.any(w < 0) or w.sum() <= 0:
                raise ValueError("weights must be non-negative with positive sum")
            w = w / w.sum()
        object.__setattr__(self, "weights", tuple(float(x) for x in w))


@dataclass(frozen=True)
class SentenceStats:
    """Per-sentence clipped numerators/denominators for orders 1..N, plus
    candidate and effective reference lengths."""

    numerators: np.ndarray     # (B, N) int64
    denominators: np.ndarray   # (B, N) int64
    cand_lens: np.ndarray      # (B,) int64
    eff_ref_lens: np.ndarray   # (B,) int64


@dataclass(frozen=True)
class BleuResult:
    """Scores in [0, 1]; per-order precisions and BP kept for diagnostics."""

    scores: Union[np.ndarray, float]
    precisions: np.ndarray
    brevity_penalty: Union[np.ndarray, float]


def effective_ref_len(cand_len: int, ref_lens: Sequence[int]) -> int:
    """Reference length closest to the candidate's; ties go to the shorter."""
    if len(ref_lens) == 0:
        raise ValueError("at least one reference length is required")
    return min(ref_lens, key=lambda r: (abs(r - cand_len), r))


def brevity_penalty(cand_len: int, eff_ref_len: int) -> float:
    """exp(1 - r/c) for short candidates, 1.0 otherwise; empty candidate -> 0."""
    if cand_len < 0:
        raise ValueError("candidate length must be >= 0")
    if cand_len == 0:
        return 0.0
    if cand_len > eff_ref_len:
        return 1.0
    return math.exp(1.0 - eff_ref_len / cand_len)


def _check_batches(candidates: TokenBatch, references: Sequence[TokenBatch]) -> None:
    if not references:
        raise ValueError("at least one reference batch is required")
    for ref in references:
        if ref.batch_size != candidates.batch_size:
            raise ValueError(
                f"reference batch size {ref.batch_size} does not match "
                f"candidate batch size {candidates.batch_size}"
            )


def _effective_ref_lens(cand_lens: np.ndarray,
                        references: Sequence[TokenBatch]) -> np.ndarray:
    ref_lens = np.stack([r.lengths for r in references])        # (R, B)
    diffs = np.abs(ref_lens - cand_lens[None, :])
    # lexsort minor-to-major: closest |r - c| first, shorter r on ties
    pick = np.lexsort((ref_lens, diffs), axis=0)[0]
    return np.take_along_axis(ref_lens, pick[None, :], axis=0)[0]


def _chunk_stats(cand_ids: np.ndarray, cand_lens: np.ndarray,
                 refs: Sequence[tuple[np.ndarray, np.ndarray]],
                 config: BleuConfig) -> tuple[np.ndarray, np.ndarray]:
    """Numerators/denominators for one chunk.

    Candidate and reference rows are stacked into one padded batch so each
    order gets a single joint compact dictionary; per-sentence counts come
    from one offset bincount per batch, reference maxima folded in place.
    """
    bc = cand_ids.shape[0]
    r = len(refs)
    lmax = max([cand_ids.shape[1]] + [ri.shape[1] for ri, _ in refs])
    stacked = np.zeros((bc * (1 + r), lmax), dtype=np.int64)
    lens_all = np.empty(bc * (1 + r), dtype=np.int64)
    stacked[:bc, : cand_ids.shape[1]] = cand_ids
    lens_all[:bc] = cand_lens
    for i, (rids, rlens) in enumerate(refs):
        lo = bc * (1 + i)
        stacked[lo: lo + bc, : rids.shape[1]] = rids
        lens_all[lo: lo + bc] = rlens

    num = np.zeros((bc, config.max_order), dtype=np.int64)
    den = np.zeros((bc, config.max_order), dtype=np.int64)
    order_ids = ngrams.packed_order_ids(stacked, lens_all, config.max_order)
    for n_idx, (inv, counts_all, u) in enumerate(order_ids):
        cand_counts = counts_all[:bc]
        den[:, n_idx] = cand_counts
        if u == 0:
            continue
        tc = int(cand_counts.sum())
        pos = tc
        ref_max = None
        for i in range(r):
            seg = counts_all[bc * (1 + i): bc * (2 + i)]
            tr = int(seg.sum())
            rc = ngrams.segmented_bincount(inv[pos: pos + tr], seg, u)
            pos += tr
            if ref_max is None:
                ref_max = rc
            else:
                np.maximum(ref_max, rc, out=ref_max)
        num[:, n_idx] = ngrams.clipped_row_sums(inv[:tc], cand_counts, ref_max)
    return num, den


def _chunk_bounds(candidates: TokenBatch, references: Sequence[TokenBatch],
                  chunk_size: Optional[int]) -> list[tuple[int, int]]:
    b = candidates.batch_size
    if chunk_size is None:
        # worst case U grows with the chunk itself: B_c * U ~ B_c^2 * L * (1+R)
        per_row = max(int(candidates.max_len) * (1 + len(references)), 1)
        chunk_size = max(int(math.sqrt(_COUNT_BYTES_BUDGET / (4 * per_row))), 4)
    chunk_size = max(int(chunk_size), 1)
    return [(lo, min(lo + chunk_size, b)) for lo in range(0, b, chunk_size)]


def compute_stats(candidates: TokenBatch, references: Sequence[TokenBatch],
                  config: BleuConfig, *, threads: int = 1,
                  chunk_size: Optional[int] = None) -> SentenceStats:
    """Run the counting pipeline for every order and reduce to per-sentence
    numerators and denominators.

    Large batches are counted in independent chunks (bounding the B * U
    count matrices); chunking and threading never change any statistic.
    """
    _check_batches(candidates, references)
    b = candidates.batch_size
    n_orders = config.max_order
    num = np.zeros((b, n_orders), dtype=np.int64)
    den = np.zeros((b, n_orders), dtype=np.int64)
    if b > 0:
        bounds = _chunk_bounds(candidates, references, chunk_size)

        def work(span):
            lo, hi = span
            return lo, hi, _chunk_stats(
                candidates.ids[lo:hi], candidates.lengths[lo:hi],
                [(r.ids[lo:hi], r.lengths[lo:hi]) for r in references],
                config,
            )

        if threads > 1 and len(bounds) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(work, bounds))
        else:
            results = [work(s) for s in bounds]
        for lo, hi, (cn, cd) in results:
            num[lo:hi] = cn
            den[lo:hi] = cd

    eff = (np.zeros(0, dtype=np.int64) if b == 0
           else _effective_ref_lens(candidates.lengths, references))
    return SentenceStats(numerators=num, denominators=den,
                         cand_lens=candidates.lengths.copy(), eff_ref_lens=eff)


def apply_smoothing(stats: SentenceStats, config: BleuConfig) -> np.ndarray:
    """Per-sentence per-order precisions, shape (B, N) float64.

    Orders with an empty denominator stay at 0 under every method.
    """
    num = stats.numerators.astype(np.float64)
    den = stats.denominators.astype(np.float64)
    has_den = den > 0
    p = np.zeros_like(num)
    np.divide(num, den, out=p, where=has_den)
    zero_num = (stats.numerators == 0) & has_den

    if config.smoothing == "none":
        pass
    elif config.smoothing == "floor":
        p[zero_num] = config.eps / den[zero_num]
    elif config.smoothing == "add-k":
        hi = np.zeros_like(has_den)
        hi[:, 1:] = has_den[:, 1:]
        p[hi] = (num[hi] + config.k) / (den[hi] + config.k)
    elif config.smoothing == "exp":
        counter = np.ones(num.shape[0], dtype=np.float64)
        for n in range(num.shape[1]):
            col = zero_num[:, n]
            p[col, n] = 1.0 / (np.exp2(counter[col]) * den[col, n])
            counter[col] += 1.0
    return p


def _geo_mean_scores(precisions: np.ndarray, bp: np.ndarray,
                     weights: Sequence[float]) -> np.ndarray:
    w = np.asarray(weights, dtype=np.float64)
    active = w > 0
    pa = precisions[:, active]
    ok = np.all(pa > 0, axis=1)
    logs = np.zeros_like(pa)
    np.log(pa, out=logs, where=pa > 0)
    # Per-row reduction, not a matmul: keeps each sentence's rounding
    # independent of how many other sentences share the batch.
    scores = np.where(ok, bp * np.exp((logs * w[active]).sum(axis=1)), 0.0)
    return np.clip(scores, 0.0, 1.0)


def _bp_vector(cand_lens: np.ndarray, eff_ref_lens: np.ndarray) -> np.ndarray:
    c = cand_lens.astype(np.float64)
    r = eff_ref_lens.astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        bp = np.where(c > r, 1.0, np.exp(1.0 - r / np.where(c > 0, c, 1.0)))
    return np.where(c > 0, bp, 0.0)


def sentence_bleu(candidates: TokenBatch, references: Sequence[TokenBatch],
                  config: Optional[BleuConfig] = None, *, threads: int = 1,
                  chunk_size: Optional[int] = None) -> BleuResult:
    """One BLEU score per sentence of the batch."""
    config = config or BleuConfig()
    stats = compute_stats(candidates, references, config,
                          threads=threads, chunk_size=chunk_size)
    return score_sentences_from_stats(stats, config)


def score_sentences_from_stats(stats: SentenceStats,
                               config: BleuConfig) -> BleuResult:
    precisions = apply_smoothing(stats, config)
    bp = _bp_vector(stats.cand_lens, stats.eff_ref_lens)
    scores = _geo_mean_scores(precisions, bp, config.weights)
    return BleuResult(scores=scores, precisions=precisions, brevity_penalty=bp)


def corpus_bleu(candidates: TokenBatch, references: Sequence[TokenBatch],
                config: Optional[BleuConfig] = None, *, threads: int = 1,
                chunk_size: Optional[int] = None) -> BleuResult:
    """One score for the whole batch: statistics are aggregated over
    sentences before precisions, BP, and the geometric mean."""
    config = config or BleuConfig()
    stats = compute_stats(candidates, references, config,
                          threads=threads, chunk_size=chunk_size)
    return score_corpus_from_stats(stats, config)


def score_corpus_from_stats(stats: SentenceStats,
                            config: BleuConfig) -> BleuResult:
    agg = SentenceStats(
        numerators=stats.numerators.sum(axis=0, keepdims=True),
        denominators=stats.denominators.sum(axis=0, keepdims=True),
        cand_lens=stats.cand_lens.sum(keepdims=True),
        eff_ref_lens=stats.eff_ref_lens.sum(keepdims=True),
    )
    precisions = apply_smoothing(agg, config)
    bp = _bp_vector(agg.cand_lens, agg.eff_ref_lens)
    scores = _geo_mean_scores(precisions, bp, config.weights)
    return BleuResult(scores=float(scores[0]), precisions=precisions[0],
                      brevity_penalty=float(bp[0]))
