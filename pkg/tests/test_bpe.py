"""BPE merge training, tokenization and the merge-file format."""

import random
import string

import pytest

from oovkit.bpe import (
    BpeModel,
    detokenize,
    read_bpe,
    read_corpus,
    subword_lexicon,
    tokenize,
    train_bpe,
    write_bpe,
)
from oovkit.errors import BpeError


def test_train_ties_take_smallest_pair():
    model = train_bpe({"low": 5, "lower": 2}, 2)
    assert model.merges == (("l", "o"), ("lo", "w"))


def test_train_stops_when_no_pair_repeats():
    assert train_bpe({"abab": 1}, 10).merges == (("a", "b"),)


def test_train_merges_end_marker():
    model = train_bpe({"ab": 3, "abc": 2}, 10)
    assert model.merges == (("a", "b"), ("ab", "</w>"), ("ab", "c"), ("abc", "</w>"))
    assert tokenize(model, "cab") == ["c", "ab</w>"]
    assert tokenize(model, "abc") == ["abc</w>"]


def test_tokenize_without_merges_attaches_marker():
    assert tokenize(BpeModel(()), "fox") == ["f", "o", "x</w>"]
    assert tokenize(BpeModel(()), "x") == ["x</w>"]


def test_tokenize_subword_fixture(subword_bpe):
    assert tokenize(subword_bpe, "firefox") == ["fire", "fox</w>"]
    assert tokenize(subword_bpe, "thefirefox") == ["the", "fire", "fox</w>"]
    assert tokenize(subword_bpe.truncated(3), "firefox") == ["fire", "f", "o", "x</w>"]


@pytest.mark.parametrize("word", ["", "a b", "fox</w>"])
def test_tokenize_rejects(word, subword_bpe):
    with pytest.raises(BpeError):
        tokenize(subword_bpe, word)


def test_detokenize_round_trip():
    rng = random.Random(7)
    corpus = {"".join(rng.choice("abcde") for _ in range(rng.randint(1, 8))): rng.randint(1, 5)
              for _ in range(200)}
    model = train_bpe(corpus, 60)
    for _ in range(1000):
        words = ["".join(rng.choice(string.ascii_lowercase[:8]) for _ in range(rng.randint(1, 10)))
                 for _ in range(rng.randint(1, 4))]
        tokens = [t for w in words for t in tokenize(model, w)]
        assert detokenize(tokens) == " ".join(words)


def test_token_count_never_grows_with_more_merges():
    rng = random.Random(23)
    corpus = {"".join(rng.choice("abcd") for _ in range(rng.randint(1, 7))): rng.randint(1, 4)
              for _ in range(150)}
    model = train_bpe(corpus, 40)
    words = ["".join(rng.choice("abcde") for _ in range(rng.randint(1, 9))) for _ in range(200)]
    for word in words:
        counts = [len(tokenize(model.truncated(k), word)) for k in range(len(model.merges) + 1)]
        assert all(later <= earlier for earlier, later in zip(counts, counts[1:]))


def test_merge_file_format():
    model = BpeModel((("f", "i"), ("fi", "re")), marker="@@")
    text = write_bpe(model)
    assert text.splitlines()[0] == "#oovkit-bpe suffix @@"
    assert read_bpe(text) == model
    with pytest.raises(BpeError, match="expected </w>"):
        read_bpe(text, marker="</w>")


@pytest.mark.parametrize("text", ["", "f i\n", "#oovkit-bpe prefix @@\n", "#oovkit-bpe suffix </w>\nf\n",
                                  "#oovkit-bpe suffix </w>\nf i\nf i\n"])
def test_read_bpe_errors(text):
    with pytest.raises(BpeError):
        read_bpe(text)


def test_read_corpus_counts():
    counts = read_corpus("the fox the\nfire\t3\n")
    assert counts == {"the": 2, "fox": 1, "fire": 3}


def test_subword_lexicon():
    lex = subword_lexicon(["fox</w>", "fi", "fox</w>", "</w>"])
    assert list(lex) == [("fox</w>", ("f", "o", "x")), ("fi", ("f", "i"))]
