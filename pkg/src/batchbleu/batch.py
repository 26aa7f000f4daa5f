"""Padded batches of integer token IDs with explicit per-sequence lengths."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class TokenBatch:
    """A (B, L) array of token IDs plus a (B,) array of valid lengths.

    Positions at or beyond ``lengths[i]`` in row ``i`` are padding and may
    hold any fill value; nothing downstream may depend on them.
    """

    ids: np.ndarray
    lengths: np.ndarray

    def __post_init__(self):
        ids = np.ascontiguousarray(self.ids, dtype=np.int64)
        lengths = np.ascontiguousarray(self.lengths, dtype=np.int64)
        if ids.ndim != 2:
            raise ValueError(f"ids must be 2-D, got shape {ids.shape}")
        if lengths.shape != (ids.shape[0],):
            raise ValueError(
                f"lengths shape {lengths.shape} does not match batch size {ids.shape[0]}"
            )
        if np.any(lengths < 0) or np.any(lengths > ids.shape[1]):
            raise ValueError("lengths must lie in [0, max_len]")
        valid = np.arange(ids.shape[1]) < lengths[:, None]
        if ids.size and np.any(ids[valid] < 0):
            raise ValueError("token IDs within valid positions must be non-negative")
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "lengths", lengths)

    @property
    def batch_size(self) -> int:
        return self.ids.shape[0]

    @property
    def max_len(self) -> int:
        return self.ids.shape[1]

    @classmethod
    def from_lists(cls, sentences: Sequence[Sequence[int]], pad_value: int = 0,
                   min_width: int = 0) -> "TokenBatch":
        """Pack variable-length ID lists into a padded batch."""
        lengths = np.array([len(s) for s in sentences], dtype=np.int64)
        width = max(int(lengths.max(initial=0)), min_width)
        ids = np.full((len(sentences), width), pad_value, dtype=np.int64)
        for i, s in enumerate(sentences):
            ids[i, : len(s)] = s
        return cls(ids=ids, lengths=lengths)

    def rows(self) -> list[list[int]]:
        """Valid tokens per sentence, as plain lists."""
        return [self.ids[i, : self.lengths[i]].tolist() for i in range(self.batch_size)]
