"""Batched per-sentence and corpus BLEU over integer token IDs."""

from ._backend import available_backends, backend_name, use_backend
from .batch import TokenBatch
from .bleu import (
    BleuConfig,
    BleuResult,
    SentenceStats,
    apply_smoothing,
    brevity_penalty,
    compute_stats,
    corpus_bleu,
    effective_ref_len,
    sentence_bleu,
)
from .ngrams import (
    CapacityError,
    CountMatrix,
    NGramDictionary,
    NGramSlices,
    batched_bincount,
    build_dictionary,
    clip_counts,
    extract_ngrams,
    max_reference_counts,
)
from .oracle import oracle_corpus_bleu, oracle_ngram_counts, oracle_sentence_bleu

__version__ = "0.1.0"

__all__ = [
    "TokenBatch",
    "BleuConfig",
    "BleuResult",
    "SentenceStats",
    "CapacityError",
    "CountMatrix",
    "NGramDictionary",
    "NGramSlices",
    "apply_smoothing",
    "available_backends",
    "backend_name",
    "batched_bincount",
    "brevity_penalty",
    "build_dictionary",
    "clip_counts",
    "compute_stats",
    "corpus_bleu",
    "effective_ref_len",
    "extract_ngrams",
    "max_reference_counts",
    "oracle_corpus_bleu",
    "oracle_ngram_counts",
    "oracle_sentence_bleu",
    "sentence_bleu",
    "use_backend",
    "__version__",
]
