import math

import numpy as np
import pytest

from batchbleu import (
    BleuConfig,
    SentenceStats,
    TokenBatch,
    apply_smoothing,
    brevity_penalty,
    compute_stats,
    corpus_bleu,
    effective_ref_len,
    sentence_bleu,
)

# "the cat is on the mat" / "there is a cat on the mat" with
# the=0 cat=1 is=2 on=3 mat=4 there=5 a=6
THE = 0
REF_A = [THE, 1, 2, 3, THE, 4]
REF_B = [5, 2, 6, 1, 3, THE, 4]
CAND_THE7 = [THE] * 7


class TestConfig:
    def test_defaults(self):
        cfg = BleuConfig()
        assert cfg.max_order == 4
        assert cfg.weights == (0.25, 0.25, 0.25, 0.25)

    def test_weights_normalized(self):
        cfg = BleuConfig(max_order=2, weights=[2.0, 2.0])
        assert cfg.weights == (0.5, 0.5)

    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            BleuConfig(max_order=0)
        with pytest.raises(ValueError):
            BleuConfig(smoothing="bogus")
        with pytest.raises(ValueError):
            BleuConfig(eps=0.0)
        with pytest.raises(ValueError):
            BleuConfig(max_order=2, weights=[1.0, 2.0, 3.0])


class TestEffectiveRefLen:
    def test_tie_goes_to_shorter(self):
        assert effective_ref_len(7, [5, 9]) == 5

    def test_single_reference(self):
        assert effective_ref_len(7, [8]) == 8

    def test_closest_by_enumeration(self):
        assert effective_ref_len(10, [7, 12, 20]) == 12

    def test_empty(self):
        with pytest.raises(ValueError):
            effective_ref_len(3, [])


class TestBrevityPenalty:
    def test_equal_lengths(self):
        assert brevity_penalty(10, 10) == 1.0

    def test_short_candidate(self):
        assert brevity_penalty(5, 10) == pytest.approx(math.exp(-1.0))

    def test_long_candidate(self):
        assert brevity_penalty(12, 10) == 1.0

    def test_empty_candidate(self):
        assert brevity_penalty(0, 10) == 0.0


def _stats(num, den, cand_lens=None, ref_lens=None):
    num = np.asarray(num, dtype=np.int64)
    den = np.asarray(den, dtype=np.int64)
    b = num.shape[0]
    return SentenceStats(
        numerators=num,
        denominators=den,
        cand_lens=np.asarray(cand_lens if cand_lens is not None else [5] * b),
        eff_ref_lens=np.asarray(ref_lens if ref_lens is not None else [5] * b),
    )


class TestSmoothing:
    def test_nonzero_counts_unaffected(self):
        for method in ("none", "floor", "exp"):
            p = apply_smoothing(_stats([[2]], [[7]]),
                                BleuConfig(max_order=1, smoothing=method))
            assert p[0, 0] == pytest.approx(2 / 7)

    def test_floor(self):
        p = apply_smoothing(_stats([[0]], [[4]]),
                            BleuConfig(max_order=1, smoothing="floor", eps=0.1))
        assert p[0, 0] == pytest.approx(0.025)

    def test_exp_counter_doubles(self):
        p = apply_smoothing(_stats([[1, 0, 0]], [[3, 2, 1]]),
                            BleuConfig(max_order=3, smoothing="exp"))
        np.testing.assert_allclose(p[0], [1 / 3, 1 / (2 * 2), 1 / (4 * 1)])

    def test_add_k_orders_two_and_up(self):
        p = apply_smoothing(_stats([[0, 0]], [[4, 3]]),
                            BleuConfig(max_order=2, smoothing="add-k", k=1.0))
        assert p[0, 0] == 0.0          # order 1 keeps the unsmoothed rule
        assert p[0, 1] == pytest.approx(1 / 4)

    def test_zero_denominator_stays_zero(self):
        for method in ("none", "floor", "add-k", "exp"):
            p = apply_smoothing(_stats([[0]], [[0]]),
                                BleuConfig(max_order=1, smoothing=method))
            assert p[0, 0] == 0.0


class TestComputeStats:
    def test_identity_candidate(self):
        batch = TokenBatch.from_lists([[3, 1, 4, 1, 5]])
        stats = compute_stats(batch, [batch], BleuConfig())
        np.testing.assert_array_equal(stats.numerators, stats.denominators)

    def test_the_seven_times(self):
        cand = TokenBatch.from_lists([CAND_THE7])
        refs = [TokenBatch.from_lists([REF_A], min_width=7),
                TokenBatch.from_lists([REF_B])]
        stats = compute_stats(cand, refs, BleuConfig())
        assert stats.numerators[0, 0] == 2
        assert stats.denominators[0, 0] == 7

    def test_candidate_shorter_than_order(self):
        cand = TokenBatch.from_lists([[1, 2]], min_width=4)
        ref = TokenBatch.from_lists([[1, 2, 3, 4]])
        stats = compute_stats(cand, [ref], BleuConfig())
        assert stats.denominators[0, 2] == 0 and stats.numerators[0, 2] == 0
        assert stats.denominators[0, 3] == 0 and stats.numerators[0, 3] == 0

    def test_batch_size_mismatch(self):
        cand = TokenBatch.from_lists([[1], [2]])
        ref = TokenBatch.from_lists([[1]])
        with pytest.raises(ValueError):
            compute_stats(cand, [ref], BleuConfig())


class TestSentenceBleu:
    def test_perfect_match(self):
        batch = TokenBatch.from_lists([[1, 2, 3, 4, 5, 6]])
        res = sentence_bleu(batch, [batch])
        assert res.scores[0] == pytest.approx(1.0)

    def test_no_overlap_is_zero(self):
        cand = TokenBatch.from_lists([[1, 1, 1, 1, 1]])
        ref = TokenBatch.from_lists([[2, 2, 2, 2, 2]])
        res = sentence_bleu(cand, [ref])
        assert res.scores[0] == 0.0

    def test_the_seven_unigram_score(self):
        cand = TokenBatch.from_lists([CAND_THE7])
        refs = [TokenBatch.from_lists([REF_A], min_width=7),
                TokenBatch.from_lists([REF_B])]
        cfg = BleuConfig(max_order=1)
        res = sentence_bleu(cand, refs, cfg)
        # c=7 > r=7? effective ref len is 7 (closest to 7); BP = 1
        assert res.scores[0] == pytest.approx(2 / 7)

    def test_scores_within_unit_interval(self, rng):
        from conftest import random_instance
        for _ in range(30):
            cand, refs = random_instance(rng)
            scores = sentence_bleu(cand, refs, BleuConfig(smoothing="floor")).scores
            assert np.all(scores >= 0.0) and np.all(scores <= 1.0)

    def test_permutation_equivariance(self, rng):
        from conftest import random_instance
        cand, refs = random_instance(rng, max_b=8)
        perm = rng.permutation(cand.batch_size)
        base = sentence_bleu(cand, refs).scores
        permuted = sentence_bleu(
            TokenBatch(ids=cand.ids[perm], lengths=cand.lengths[perm]),
            [TokenBatch(ids=r.ids[perm], lengths=r.lengths[perm]) for r in refs],
        ).scores
        np.testing.assert_allclose(permuted, base[perm])

    def test_batch_composition_independence(self):
        cand = TokenBatch.from_lists([[1, 2, 3, 4, 5]])
        ref = TokenBatch.from_lists([[1, 2, 3, 9, 5]])
        solo = sentence_bleu(cand, [ref], BleuConfig(smoothing="floor")).scores[0]
        cand2 = TokenBatch.from_lists([[1, 2, 3, 4, 5], [7, 7, 8, 8, 9]])
        ref2 = TokenBatch.from_lists([[1, 2, 3, 9, 5], [8, 7, 7, 9, 9]])
        joint = sentence_bleu(cand2, [ref2], BleuConfig(smoothing="floor")).scores[0]
        assert joint == pytest.approx(solo, abs=1e-12)

    def test_monotone_clipping(self):
        # growing a reference's n-gram counts never lowers the score
        cand = TokenBatch.from_lists([[1, 1, 2, 3]])
        weak_ref = TokenBatch.from_lists([[1, 2, 3, 4]])
        strong_ref = TokenBatch.from_lists([[1, 1, 2, 3]])
        for method in ("none", "floor"):
            cfg = BleuConfig(smoothing=method)
            low = sentence_bleu(cand, [weak_ref], cfg).scores[0]
            high = sentence_bleu(cand, [strong_ref], cfg).scores[0]
            assert high >= low

    def test_empty_candidate_scores_zero(self):
        cand = TokenBatch(ids=[[9, 9, 9]], lengths=[0])
        ref = TokenBatch.from_lists([[1, 2, 3]])
        res = sentence_bleu(cand, [ref], BleuConfig(smoothing="floor"))
        assert res.scores[0] == 0.0
        assert res.brevity_penalty[0] == 0.0


class TestCorpusBleu:
    def test_single_sentence_matches_sentence_mode(self):
        cand = TokenBatch.from_lists([[1, 2, 3, 4, 2, 1]])
        ref = TokenBatch.from_lists([[1, 2, 3, 5, 2, 1, 0]])
        cfg = BleuConfig(smoothing="exp")
        assert corpus_bleu(cand, [ref], cfg).scores == pytest.approx(
            sentence_bleu(cand, [ref], cfg).scores[0])

    def test_perfect_corpus(self):
        batch = TokenBatch.from_lists([[1, 2, 3, 4, 5], [6, 7, 8, 9, 1, 2]])
        assert corpus_bleu(batch, [batch]).scores == pytest.approx(1.0)

    def test_permutation_invariance(self, rng):
        from conftest import random_instance
        cand, refs = random_instance(rng, max_b=8)
        perm = rng.permutation(cand.batch_size)
        base = corpus_bleu(cand, refs).scores
        permuted = corpus_bleu(
            TokenBatch(ids=cand.ids[perm], lengths=cand.lengths[perm]),
            [TokenBatch(ids=r.ids[perm], lengths=r.lengths[perm]) for r in refs],
        ).scores
        assert permuted == pytest.approx(base, abs=1e-12)


class TestExecutionKnobs:
    def test_threads_and_chunks_do_not_change_scores(self, rng):
        from conftest import random_instance
        for _ in range(10):
            cand, refs = random_instance(rng, max_b=10)
            base = sentence_bleu(cand, refs).scores
            chunked = sentence_bleu(cand, refs, chunk_size=3).scores
            threaded = sentence_bleu(cand, refs, threads=4, chunk_size=2).scores
            np.testing.assert_array_equal(base, chunked)
            np.testing.assert_array_equal(base, threaded)

    def test_backends_agree_exactly(self, rng):
        import batchbleu
        from conftest import random_instance
        if "compiled" not in batchbleu.available_backends():
            pytest.skip("compiled backend not built")
        cand, refs = random_instance(rng)
        try:
            batchbleu.use_backend("compiled")
            a = sentence_bleu(cand, refs).scores
            batchbleu.use_backend("python")
            b = sentence_bleu(cand, refs).scores
        finally:
            batchbleu.use_backend("auto")
        np.testing.assert_array_equal(a, b)
