"""Property-based checks for the counting pipeline and score invariants."""

import numpy as np
from hypothesis import given, settings, strategies as st

from batchbleu import (
    BleuConfig,
    TokenBatch,
    batched_bincount,
    oracle_sentence_bleu,
    sentence_bleu,
)


@st.composite
def bincount_case(draw):
    b = draw(st.integers(1, 16))
    u = draw(st.integers(1, 64))
    ids = [
        draw(st.lists(st.integers(0, u - 1), max_size=30))
        for _ in range(b)
    ]
    return [np.array(s, dtype=np.int64) for s in ids], u, b


@given(bincount_case())
@settings(max_examples=150, deadline=None)
def test_offset_bincount_equals_per_sentence_histogram(case):
    ids, u, b = case
    got = batched_bincount(ids, u, b).counts
    expected = np.stack([np.bincount(s, minlength=u) for s in ids])
    np.testing.assert_array_equal(got, expected)


@st.composite
def batch_case(draw):
    b = draw(st.integers(1, 6))
    l = draw(st.integers(1, 16))
    v = draw(st.integers(1, 10))
    r = draw(st.integers(1, 2))
    seed = draw(st.integers(0, 2**31))
    smoothing = draw(st.sampled_from(["none", "floor", "add-k", "exp"]))
    rng = np.random.default_rng(seed)

    def mk():
        return TokenBatch(ids=rng.integers(0, v, size=(b, l)),
                          lengths=rng.integers(0, l + 1, size=b))

    return mk(), [mk() for _ in range(r)], BleuConfig(smoothing=smoothing)


@given(batch_case())
@settings(max_examples=60, deadline=None)
def test_batched_matches_oracle(case):
    cand, refs, cfg = case
    batched = sentence_bleu(cand, refs, cfg).scores
    serial = [oracle_sentence_bleu(c, [r.rows()[i] for r in refs], cfg)
              for i, c in enumerate(cand.rows())]
    np.testing.assert_allclose(batched, serial, atol=1e-6)
    assert np.all(batched >= 0.0) and np.all(batched <= 1.0)


@given(batch_case(), st.integers(0, 2**31))
@settings(max_examples=40, deadline=None)
def test_padding_invariance(case, fill_seed):
    cand, refs, cfg = case
    base = sentence_bleu(cand, refs, cfg).scores
    rng = np.random.default_rng(fill_seed)

    def scramble(batch):
        ids = batch.ids.copy()
        pad = np.arange(batch.max_len) >= batch.lengths[:, None]
        ids[pad] = rng.integers(0, 1000, size=int(pad.sum()))
        return TokenBatch(ids=ids, lengths=batch.lengths)

    mutated = sentence_bleu(scramble(cand), [scramble(r) for r in refs], cfg).scores
    np.testing.assert_array_equal(base, mutated)
