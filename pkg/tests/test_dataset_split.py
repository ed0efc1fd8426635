"""High-OOV test split with speaker-disjoint training data."""

import pytest

from oovkit.dataset_split import (
    make_split,
    normalize_text,
    oov_report,
    read_manifest,
    read_vocabulary,
    write_manifest,
)
from oovkit.errors import SplitError


def manifest_text():
    lines = []
    for i in range(50):
        if i % 10 == 0:
            text = "a firefox b c"
        elif i in (7, 32):
            text = "website nudism"
        else:
            text = "a b c"
        lines.append(f"u{i:02d}\ts{i // 5}\t1.8\t{text}")
    return "\n".join(lines) + "\n"


@pytest.fixture
def split():
    return make_split(read_manifest(manifest_text()), {"a", "b", "c"})


def test_split_sizes(split):
    s = split.stats
    assert (s.test_utterances, s.train_utterances, s.excluded_utterances) == (7, 20, 23)
    assert (s.test_tokens, s.oov_tokens) == (24, 9)
    assert split.oov_token_ratio == pytest.approx(0.375)
    assert s.oov_type_ratio == pytest.approx(0.5)
    assert s.test_speakers == 6 and s.train_speakers == 4
    assert s.test_hours == pytest.approx(7 * 1.8 / 3600)


def test_split_invariants(split):
    vocab = {"a", "b", "c"}
    assert all(any(w not in vocab for w in u.text) for u in split.test)
    assert all(all(w in vocab for w in u.text) for u in split.train)
    assert not {u.speaker for u in split.train} & {u.speaker for u in split.test}
    ids = [u.id for u in split.train + split.test + split.excluded]
    assert sorted(ids) == [f"u{i:02d}" for i in range(50)]
    assert [u.id for u in split.test] == sorted(u.id for u in split.test)


def test_split_is_order_independent():
    utts = read_manifest(manifest_text())
    forward = make_split(utts, {"a", "b", "c"})
    backward = make_split(list(reversed(utts)), {"a", "b", "c"})
    assert forward.test == backward.test
    assert forward.train == backward.train


def test_resplitting_train_and_test_is_a_fixed_point(split):
    again = make_split(split.train + split.test, {"a", "b", "c"})
    assert again.test == split.test
    assert again.train == split.train
    assert again.excluded == []


def test_oov_report(split):
    lines = oov_report(split).splitlines()
    assert lines[:3] == ["firefox 5", "nudism 2", "website 2"]
    assert "oov_token_ratio 0.375 (OOV tokens / test tokens)" in lines
    assert "test_utterances 7" in lines


def test_small_report():
    split = make_split(read_manifest("u1\tx\t\ta b\nu2\ty\t\ta c\n"), {"a", "b"})
    report = oov_report(split)
    assert report.startswith("c 1\n")
    assert "oov_token_ratio 0.500 (OOV tokens / test tokens)" in report
    assert "test_hours" not in report


def test_normalized_manifest():
    assert normalize_text("Hello, World! «Ça» -") == ["hello", "world", "ça"]
    utts = read_manifest("u1\ts1\t2.5\tThe Fox.\n", normalize=True)
    assert utts[0].text == ("the", "fox")
    assert write_manifest(utts) == "u1\ts1\t2.5\tthe fox\n"


def test_vocabulary_reads_lexicon_files():
    assert read_vocabulary("a ah\nb b iy\n\nc\n") == {"a", "b", "c"}


@pytest.mark.parametrize("text", ["u1\ts1\ta b\n", "u1\ts1\t\ta\nu1\ts2\t\tb\n", "u1\ts1\tlong\ta\n",
                                  "\ts1\t\ta\n"])
def test_manifest_errors(text):
    with pytest.raises(SplitError):
        read_manifest(text)


def test_empty_inputs_rejected():
    with pytest.raises(SplitError):
        make_split([], {"a"})
    with pytest.raises(SplitError):
        make_split(read_manifest("u1\ts1\t\ta\n"), set())
