import pytest

from features.transcripts import load_session_transcripts, read_transcript, tokenize
from utils.errors import ConfidenceRangeError, SessionMismatchError, TranscriptSchemaError

from conftest import write_transcript


def _norm(text):
    return [t.normalized for t in tokenize(text)]


@pytest.mark.parametrize("raw, expected", [
    ("The boy, is looking.", ["the", "boy", "is", "looking"]),
    ("", []),
    ("uh... uh the the", ["uh", "uh", "the", "the"]),
    ("well-known jar", ["well", "known", "jar"]),
    ("Don't “stop”!", ["don't", "stop"]),
    ("-- ... !!", []),
])
def test_tokenize(raw, expected):
    assert _norm(raw) == expected


def test_tokenize_is_idempotent_on_its_output():
    raw = "The Mother's water -- overflowing, (sink) isn't it?"
    once = _norm(raw)
    assert _norm(" ".join(once)) == once


def test_tokenize_keeps_surface_and_confidence():
    tokens = tokenize("Boy,", confidence=0.7)
    assert tokens[0].surface == "Boy,"
    assert tokens[0].normalized == "boy"
    assert tokens[0].confidence == 0.7


def test_identical_files_give_equal_sequences(tmp_path):
    words = ["The", "boy", "is", "looking"]
    small = write_transcript(tmp_path / "s.txt", "S1", "small", words, [0.9] * 4)
    large = write_transcript(tmp_path / "l.txt", "S1", "large", words, [0.9] * 4)
    st = load_session_transcripts(str(small), str(large))
    assert st.session_id == "S1"
    assert st.normalized("small") == st.normalized("large") == ["the", "boy", "is", "looking"]
    assert st.model_small_name == "small"


def test_missing_confidence_is_absent_not_an_error(tmp_path):
    path = write_transcript(tmp_path / "s.txt", "S1", "small", ["the", "boy"])
    _, _, tokens = read_transcript(str(path))
    assert [t.confidence for t in tokens] == [None, None]


def test_out_of_range_confidence_names_token_index(tmp_path):
    path = write_transcript(tmp_path / "s.txt", "S1", "small", ["the", "boy", "is"], [0.9, 1.3, 0.8])
    with pytest.raises(ConfidenceRangeError) as info:
        read_transcript(str(path))
    assert info.value.token_index == 1


def test_session_id_mismatch(tmp_path):
    small = write_transcript(tmp_path / "s.txt", "S1", "small", ["a"])
    large = write_transcript(tmp_path / "l.txt", "S2", "large", ["a"])
    with pytest.raises(SessionMismatchError):
        load_session_transcripts(str(small), str(large))


@pytest.mark.parametrize("content", [
    "",
    "session=S1 model=small\nthe\n",
    "#session=S1 model=small\nthe\t0.9\textra\n",
    "#session=S1 model=small\nthe\tabc\n",
])
def test_malformed_transcripts(tmp_path, content):
    path = tmp_path / "bad.txt"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(TranscriptSchemaError):
        read_transcript(str(path))


def test_hyphenated_record_shares_its_confidence(tmp_path):
    path = write_transcript(tmp_path / "s.txt", "S1", "large", ["cookie-jar"], [0.6])
    _, _, tokens = read_transcript(str(path))
    assert [(t.normalized, t.confidence) for t in tokens] == [("cookie", 0.6), ("jar", 0.6)]


@pytest.mark.parametrize("raw", [
    "well-known",
    "the boy -- is -- looking",
    "a-b-c d-e",
    "--- well--known ---",
    "Don't “stop”! ... uh-huh",
    "  spaced\tout\nlines  ",
])
def test_tokenize_never_exceeds_hyphen_split_pieces(raw):
    pieces = [p for chunk in raw.split() for p in chunk.split("-")]
    assert len(tokenize(raw)) <= len(pieces)


def test_hyphenated_word_gives_two_tokens():
    assert len(tokenize("well-known")) == 2
