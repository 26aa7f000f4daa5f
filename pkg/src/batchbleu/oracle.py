"""Serial per-sentence Token-ID BLEU used as correctness oracle and CPU
baseline.

Deliberately naive: explicit n-gram multisets per sentence, a Python loop
over the batch, no shared dictionaries. Keep it auditable by eye; the
batched implementation must agree with it to 1e-6.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

from .bleu import BleuConfig


def oracle_ngram_counts(sentence: Sequence[int], n: int) -> Counter:
    """Multiset of the contiguous order-n n-grams of one sentence."""
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    return Counter(tuple(sentence[i:i + n]) for i in range(len(sentence) - n + 1))


def _closest_ref_len(cand_len: int, references: Sequence[Sequence[int]]) -> int:
    return min((len(r) for r in references), key=lambda r: (abs(r - cand_len), r))


def _clipped_stats(candidate: Sequence[int], references: Sequence[Sequence[int]],
                   n: int) -> tuple[int, int]:
    cand_counts = oracle_ngram_counts(candidate, n)
    max_ref: Counter = Counter()
    for ref in references:
        for gram, count in oracle_ngram_counts(ref, n).items():
            if count > max_ref[gram]:
                max_ref[gram] = count
    numerator = sum(min(count, max_ref[gram]) for gram, count in cand_counts.items())
    denominator = max(len(candidate) - n + 1, 0)
    return numerator, denominator


def _smooth(numerators: list, denominators: list, config: BleuConfig) -> list:
    precisions = []
    exp_counter = 1
    for n, (num, den) in enumerate(zip(numerators, denominators), start=1):
        if den == 0:
            precisions.append(0.0)
            continue
        if config.smoothing == "add-k" and n >= 2:
            precisions.append((num + config.k) / (den + config.k))
        elif num > 0:
            precisions.append(num / den)
        elif config.smoothing == "floor":
            precisions.append(config.eps / den)
        elif config.smoothing == "exp":
            precisions.append(1.0 / (2 ** exp_counter * den))
            exp_counter += 1
        else:
            precisions.append(0.0)
    return precisions


def _finish(precisions: list, cand_len: int, eff_ref_len: int,
            weights: Sequence[float]) -> float:
    if cand_len == 0:
        return 0.0
    bp = 1.0 if cand_len > eff_ref_len else math.exp(1.0 - eff_ref_len / cand_len)
    log_sum = 0.0
    for w, p in zip(weights, precisions):
        if w == 0.0:
            continue
        if p <= 0.0:
            return 0.0
        log_sum += w * math.log(p)
    return min(bp * math.exp(log_sum), 1.0)


def oracle_sentence_bleu(candidate: Sequence[int],
                         references: Sequence[Sequence[int]],
                         config: BleuConfig | None = None) -> float:
    """Textbook BLEU for one sentence of token IDs."""
    config = config or BleuConfig()
    if not references:
        raise ValueError("at least one reference is required")
    numerators, denominators = [], []
    for n in range(1, config.max_order + 1):
        num, den = _clipped_stats(candidate, references, n)
        numerators.append(num)
        denominators.append(den)
    precisions = _smooth(numerators, denominators, config)
    eff = _closest_ref_len(len(candidate), references)
    return _finish(precisions, len(candidate), eff, config.weights)


def oracle_corpus_bleu(candidates: Sequence[Sequence[int]],
                       references: Sequence[Sequence[Sequence[int]]],
                       config: BleuConfig | None = None) -> float:
    """Textbook corpus BLEU: statistics aggregated over sentences first.

    ``references[r][i]`` is reference r for sentence i.
    """
    config = config or BleuConfig()
    if not references:
        raise ValueError("at least one reference set is required")
    numerators = [0] * config.max_order
    denominators = [0] * config.max_order
    cand_len_total = 0
    ref_len_total = 0
    for i, candidate in enumerate(candidates):
        refs_i = [refs[i] for refs in references]
        for n in range(1, config.max_order + 1):
            num, den = _clipped_stats(candidate, refs_i, n)
            numerators[n - 1] += num
            denominators[n - 1] += den
        cand_len_total += len(candidate)
        ref_len_total += _closest_ref_len(len(candidate), refs_i)
    precisions = _smooth(numerators, denominators, config)
    return _finish(precisions, cand_len_total, ref_len_total, config.weights)
