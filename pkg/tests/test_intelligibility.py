from functools import lru_cache

import editdistance
import numpy as np
import pytest

from features.intelligibility import align, intelligibility_features, wer_mer_wil
from features.transcripts import SessionTranscripts, tokenize


def _session(small, large, conf_small=None, conf_large=None):
    return SessionTranscripts(
        session_id="S1",
        small=tuple(tokenize(" ".join(small), confidence=conf_small)),
        large=tuple(tokenize(" ".join(large), confidence=conf_large)),
    )


def _oracle_distance(ref, hyp):
    """모든 편집 스크립트를 재귀로 탐색한 최소 비용"""

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(ref):
            return len(hyp) - j
        if j == len(hyp):
            return len(ref) - i
        return min(
            go(i + 1, j + 1) + (ref[i] != hyp[j]),
            go(i + 1, j) + 1,
            go(i, j + 1) + 1,
        )

    return go(0, 0)


def test_identity_alignment():
    a = align(["the", "boy", "is", "looking"], ["the", "boy", "is", "looking"])
    assert (a.hits, a.substitutions, a.deletions, a.insertions) == (4, 0, 0, 0)


def test_single_deletion():
    a = align(["the", "boy", "is", "looking"], ["the", "boy", "looking"])
    assert (a.hits, a.substitutions, a.deletions, a.insertions) == (3, 0, 1, 0)


def test_empty_reference_is_all_insertions():
    a = align([], ["a", "b"])
    assert (a.hits, a.substitutions, a.deletions, a.insertions) == (0, 0, 0, 2)


def test_alignment_matches_exhaustive_oracle():
    rng = np.random.default_rng(2024)
    vocab = ["a", "b", "c", "d"]
    for _ in range(500):
        ref = tuple(rng.choice(vocab, size=rng.integers(0, 7)).tolist())
        hyp = tuple(rng.choice(vocab, size=rng.integers(0, 7)).tolist())
        a = align(ref, hyp)
        assert a.errors == _oracle_distance(ref, hyp)
        assert a.errors == editdistance.eval(list(ref), list(hyp))
        assert a.hits + a.substitutions + a.deletions == len(ref)
        assert a.hits + a.substitutions + a.insertions == len(hyp)
        swapped = align(hyp, ref)
        assert (swapped.hits, swapped.substitutions, swapped.deletions, swapped.insertions) == (
            a.hits, a.substitutions, a.insertions, a.deletions
        )


def test_rates_from_hand_evaluation():
    wer, mer, wil = wer_mer_wil(align(["the", "boy", "is", "looking"], ["the", "boy", "looking"]))
    assert wer == pytest.approx(0.25)
    assert mer == pytest.approx(0.25)
    assert wil == pytest.approx(0.25)


def test_perfect_match_rates_are_zero():
    assert wer_mer_wil(align(list("abcd"), list("abcd"))) == (0.0, 0.0, 0.0)


def test_disjoint_sequences_rates_are_one():
    assert wer_mer_wil(align(["a", "b"], ["c", "d"])) == (1.0, 1.0, 1.0)


def test_both_empty_rates_are_undefined():
    assert wer_mer_wil(align([], [])) == (None, None, None)


def test_rates_stay_in_unit_interval():
    rng = np.random.default_rng(5)
    for _ in range(200):
        ref = rng.choice(list("abc"), size=rng.integers(1, 6)).tolist()
        hyp = rng.choice(list("abc"), size=rng.integers(1, 6)).tolist()
        wer, mer, wil = wer_mer_wil(align(ref, hyp))
        assert wer >= 0.0
        assert 0.0 <= mer <= 1.0
        assert 0.0 <= wil <= 1.0


def test_identical_transcripts_features():
    words = ["the", "boy", "is", "looking"]
    f = intelligibility_features(_session(words, words, 0.9, 0.9))
    assert f["intel_wer"] == 0.0
    assert f["intel_conf_diff_mean"] == pytest.approx(0.0)
    assert f["intel_conf_small_sd"] == pytest.approx(0.0)
    assert f["intel_length_ratio"] == 1.0


def test_shorter_small_transcript():
    f = intelligibility_features(_session(["the", "boy"], ["the", "boy", "is", "looking"]))
    assert f["intel_wer"] == pytest.approx(0.5)
    assert f["intel_length_ratio"] == pytest.approx(0.5)
    assert f["intel_conf_small_mean"] is None
    assert f["intel_conf_diff_mean"] is None


def test_empty_small_transcript():
    f = intelligibility_features(_session([], [f"w{i}" for i in range(10)]))
    assert f["intel_wer"] == 1.0
    assert f["intel_length_ratio"] == 0.0
    assert f["intel_wil"] == 1.0


def test_both_empty_features_are_undefined():
    f = intelligibility_features(_session([], []))
    assert f["intel_wer"] is None
    assert f["intel_mer"] is None
    assert f["intel_wil"] is None
    assert f["intel_length_ratio"] is None
