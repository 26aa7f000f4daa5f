"""Native-extension bindings for batched token-ID BLEU.

Exposes ``score_sentences`` and ``score_corpus`` over contiguous integer
buffers; see ``_ext`` for the buffer contract.
"""

from ._ext import (
    __version__,
    copy_count,
    reset_copy_count,
    score_corpus,
    score_sentences,
)

__all__ = [
    "__version__",
    "copy_count",
    "reset_copy_count",
    "score_corpus",
    "score_sentences",
]
