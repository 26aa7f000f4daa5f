import numpy as np
import pytest

from batchbleu import TokenBatch


def random_instance(rng, max_b=8, max_len=32, max_vocab=16, max_refs=3):
    """One random (candidates, references) pair with ragged lengths."""
    b = int(rng.integers(1, max_b + 1))
    l = int(rng.integers(1, max_len + 1))
    v = int(rng.integers(1, max_vocab + 1))
    r = int(rng.integers(1, max_refs + 1))

    def mk():
        ids = rng.integers(0, v, size=(b, l))
        lengths = rng.integers(0, l + 1, size=b)
        return TokenBatch(ids=ids, lengths=lengths)

    return mk(), [mk() for _ in range(r)]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
