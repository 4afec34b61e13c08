import logging

import numpy as np
import pytest

from features.semantics import (
    DESCRIPTORS, action_word_features, describe_distribution, load_embeddings,
    seed_descriptors, similarity_distribution, validate_seeds,
)
from utils.config import SEED_WORDS
from utils.errors import EmbeddingFormatError, SeedVocabularyError

from conftest import seed_table, write_embeddings


def _linear_percentile(values, q):
    """정렬 후 (n-1)·q 위치 선형 보간"""
    s = sorted(values)
    h = (len(s) - 1) * q
    lo = int(np.floor(h))
    hi = min(lo + 1, len(s) - 1)
    return s[lo] + (h - lo) * (s[hi] - s[lo])


def test_load_small_table(tmp_path):
    path = write_embeddings(tmp_path / "v.txt", {"a": [1, 0, 0, 0], "b": [0, 1, 0, 0], "C": [0, 0, 1, 0]})
    table = load_embeddings(str(path))
    assert len(table) == 3
    assert table.dimension == 4
    assert "c" in table


def test_ragged_row_names_line(tmp_path):
    path = tmp_path / "v.txt"
    path.write_text("a 1 2 3 4 5\nb 1 2 3 4\n", encoding="utf-8")
    with pytest.raises(EmbeddingFormatError, match=":2:"):
        load_embeddings(str(path))


@pytest.mark.parametrize("content", ["a 1 x 3\n", "a 1 nan 3\n", "a\n", "\n\n"])
def test_malformed_tables(tmp_path, content):
    path = tmp_path / "v.txt"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(EmbeddingFormatError):
        load_embeddings(str(path))


def test_duplicate_word_last_wins_with_warning(tmp_path, caplog):
    path = tmp_path / "v.txt"
    path.write_text("a 1 0\nb 0 1\na 2 2\n", encoding="utf-8")
    with caplog.at_level(logging.WARNING):
        table = load_embeddings(str(path))
    assert len(table) == 2
    np.testing.assert_array_equal(table.vector("a"), [2.0, 2.0])
    assert any("a" in r.getMessage() for r in caplog.records if r.levelno == logging.WARNING)


def _unit_table(tmp_path):
    table = seed_table({
        "sleep": [1.0] + [0.0] * 11,
        "same": [3.0] + [0.0] * 11,
        "ortho": [0.0, 2.0] + [0.0] * 10,
        "anti": [-1.0] + [0.0] * 11,
        "zero": [0.0] * 12,
    })
    return load_embeddings(str(write_embeddings(tmp_path / "v.txt", table)))


def test_cosine_identity_orthogonal_antipodal(tmp_path):
    table = _unit_table(tmp_path)
    assert similarity_distribution(["sleep"], "sleep", table) == [pytest.approx(1.0)]
    assert similarity_distribution(["same"], "sleep", table) == [pytest.approx(1.0)]
    assert similarity_distribution(["ortho"], "sleep", table) == [pytest.approx(0.0)]
    assert similarity_distribution(["anti"], "sleep", table) == [pytest.approx(-1.0)]


def test_out_of_vocabulary_and_zero_vectors_are_skipped(tmp_path):
    table = _unit_table(tmp_path)
    sims = similarity_distribution(["anti", "qwzx", "zero", "sleep"], "sleep", table)
    assert sims == [pytest.approx(-1.0), pytest.approx(1.0)]


def test_similarities_are_bounded(tmp_path, embeddings_file):
    table = load_embeddings(str(embeddings_file))
    words = list(table.words)
    for seed in SEED_WORDS:
        sims = similarity_distribution(words, seed, table)
        assert all(-1.0 <= s <= 1.0 for s in sims)


def test_single_value_distribution():
    d = describe_distribution([0.3])
    assert d["min"] == d["p5"] == d["p50"] == d["p95"] == d["max"] == 0.3
    assert d["iqr"] == 0.0
    assert d["skewness"] is None and d["kurtosis"] is None


def test_percentiles_follow_linear_rule():
    values = [0.0, 0.0, 0.0, 1.0]
    d = describe_distribution(values)
    assert d["p50"] == 0.0
    assert d["p5"] == pytest.approx(_linear_percentile(values, 0.05))
    assert d["p95"] == pytest.approx(_linear_percentile(values, 0.95))
    assert d["iqr"] == pytest.approx(_linear_percentile(values, 0.75) - _linear_percentile(values, 0.25))
    assert d["iqr"] == pytest.approx(0.25)


def test_symmetric_distribution_has_zero_skew():
    assert describe_distribution([-2.0, -1.0, 0.0, 1.0, 2.0])["skewness"] == pytest.approx(0.0, abs=1e-9)


def test_normal_sample_has_zero_excess_kurtosis():
    x = np.random.default_rng(1).standard_normal(100_000)
    assert describe_distribution(x)["kurtosis"] == pytest.approx(0.0, abs=0.05)


def test_constant_distribution_leaves_shape_undefined():
    d = describe_distribution([0.5, 0.5, 0.5])
    assert d["iqr"] == 0.0
    assert d["skewness"] is None


def test_empty_distribution_is_undefined():
    assert all(v is None for v in describe_distribution([]).values())


def test_missing_seed_is_a_configuration_error(tmp_path):
    table = seed_table()
    del table["energetic"]
    loaded = load_embeddings(str(write_embeddings(tmp_path / "v.txt", table)))
    with pytest.raises(SeedVocabularyError, match="energetic"):
        validate_seeds(loaded)
    with pytest.raises(SeedVocabularyError):
        action_word_features(["the"], loaded)


def test_feature_map_layout(embeddings_file):
    table = load_embeddings(str(embeddings_file))
    f = action_word_features(["the", "boy", "qwzx", "is"], table)
    assert len(f) == len(SEED_WORDS) * len(DESCRIPTORS) + 1
    assert f["sem_coverage"] == pytest.approx(0.75)
    assert f["sem_play_min"] <= f["sem_play_p50"] <= f["sem_play_max"]


def test_empty_tokens_give_undefined_descriptors(embeddings_file):
    described = seed_descriptors([], load_embeddings(str(embeddings_file)))
    assert described.coverage is None
    assert all(v is None for d in described.per_seed.values() for v in d.values())


def test_cosine_ignores_vector_scale(tmp_path):
    table = seed_table()
    plain = load_embeddings(str(write_embeddings(tmp_path / "plain.txt", table)))
    doubled = load_embeddings(str(write_embeddings(
        tmp_path / "doubled.txt", {w: [2.0 * v for v in vec] for w, vec in table.items()}
    )))
    words = list(plain.words)
    for seed in SEED_WORDS:
        expected = similarity_distribution(words, seed, plain)
        assert similarity_distribution(words, seed, doubled) == pytest.approx(expected, abs=1e-12)


def test_descriptors_ignore_token_order():
    rng = np.random.default_rng(8)
    values = rng.uniform(-1.0, 1.0, size=40)
    expected = describe_distribution(values)
    for _ in range(5):
        assert describe_distribution(rng.permutation(values)) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("size", [1, 2, 3, 7, 50])
def test_quantile_descriptors_are_ordered(size):
    rng = np.random.default_rng(size)
    for _ in range(20):
        d = describe_distribution(rng.uniform(-1.0, 1.0, size=size))
        assert d["min"] <= d["p5"] <= d["p50"] <= d["p95"] <= d["max"]
