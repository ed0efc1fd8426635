"""Shared fixtures: toy lexicons, ARPA models and a subword BPE model small enough to check by hand."""

import pytest

from oovkit.arpa import parse_arpa
from oovkit.bpe import BpeModel
from oovkit.g_graph import arpa_to_g
from oovkit.lexicon import build_l, parse_lexicon

LEXICON = """\
a ah
b b iy
"""

OOV_LEXICON = """\
ba b ah
ib iy b
"""

# Trigram over a, b, [unk]; every stored n-gram beats its backoff route.
TRIGRAM_ARPA = """\
\\data\\
ngram 1=5
ngram 2=5
ngram 3=2

\\1-grams:
-1.0 </s>
-99 <s> -0.5
-0.7 a -0.3
-0.8 b -0.3
-1.2 [unk] -0.2

\\2-grams:
-0.2 <s> a -0.2
-0.3 a b -0.2
-0.4 b </s>
-0.5 a [unk]
-0.3 [unk] </s>

\\3-grams:
-0.1 <s> a b
-0.1 a b </s>

\\end\\
"""

# Bigram where [unk] only ever ends an n-gram (trained with limit-unk-history).
BIGRAM_ARPA = """\
\\data\\
ngram 1=5
ngram 2=4

\\1-grams:
-1.0 </s>
-99 <s> -0.5
-0.6 a -0.3
-0.7 b -0.3
-1.0 [unk]

\\2-grams:
-0.2 <s> a
-0.3 a b
-0.4 b </s>
-0.6 a [unk]

\\end\\
"""

UNIGRAM_ARPA = """\
\\data\\
ngram 1=5

\\1-grams:
-1.0 </s>
-99 <s>
-0.5 a
-0.6 b
-1.5 [unk]

\\end\\
"""

# Subword LM: "fire" and "fox</w>" are both unigrams but never follow each other.
SUBWORD_ARPA = """\
\\data\\
ngram 1=6
ngram 2=3

\\1-grams:
-1.0 </s>
-99 <s> -0.3
-0.5 the</w> -0.2
-0.9 the -0.2
-1.0 fire -0.2
-1.2 fox</w> -0.2

\\2-grams:
-0.2 <s> the</w>
-0.4 the</w> fire
-0.5 fox</w> </s>

\\end\\
"""

SUBWORD_MERGES = (
    ("f", "i"), ("fi", "r"), ("fir", "e"),
    ("o", "x"), ("ox", "</w>"), ("f", "ox</w>"),
    ("t", "h"), ("th", "e"),
)


@pytest.fixture(autouse=True)
def oovkit_home(tmp_path, monkeypatch):
    """Keep logs, run records and config lookups inside the test's tmp dir."""
    home = tmp_path / ".oovkit"
    monkeypatch.setenv("OOVKIT_HOME", str(home))
    monkeypatch.delenv("OOVKIT_LOG_LEVEL", raising=False)
    return home


@pytest.fixture
def lexicon():
    return parse_lexicon(LEXICON)


@pytest.fixture
def oov_lexicon():
    return parse_lexicon(OOV_LEXICON)


@pytest.fixture
def lang(lexicon):
    return build_l(lexicon)


@pytest.fixture
def trigram():
    return parse_arpa(TRIGRAM_ARPA)


@pytest.fixture
def bigram():
    return parse_arpa(BIGRAM_ARPA)


@pytest.fixture
def bigram_g(bigram, lang):
    return arpa_to_g(bigram, lang.word_syms)


@pytest.fixture
def unigram_g(lang):
    return arpa_to_g(parse_arpa(UNIGRAM_ARPA), lang.word_syms)


@pytest.fixture
def subword_g():
    return arpa_to_g(parse_arpa(SUBWORD_ARPA))


@pytest.fixture
def subword_bpe():
    return BpeModel(SUBWORD_MERGES)

