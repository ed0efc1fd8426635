"""Lexicon transducer: construction, OOV insertion and the [unk] phone-LM splice."""

import math

import pytest

from oovkit.errors import LexiconError
from oovkit.fst import Arc, Fst
from oovkit.fst_ops import compose, extract_unk_spans, input_path, spans_to_strings
from oovkit.lexicon import (
    JUNK_PHONE,
    UNK_WORD,
    Lexicon,
    add_words_to_l,
    build_l,
    char_lexicon,
    parse_lexicon,
    splice_unk_lm,
    write_lexicon,
)
from oovkit.symbols import SymbolTable

from conftest import LEXICON

LN10 = math.log(10.0)


def phone_ids(l, phones):
    return [l.phone_syms.find(p) for p in phones]


def words_of(l, path):
    return [l.word_syms.symbol(o) for o in path.olabels]


def test_parse_lexicon_errors():
    with pytest.raises(LexiconError, match="line 2: blank pronunciation for b"):
        parse_lexicon("a ah\nb\n")
    with pytest.raises(LexiconError):
        parse_lexicon("a ah\na ah\n")


def test_lexicon_keeps_homophones_and_variants():
    lex = parse_lexicon("c s iy\nsea s iy\nc k\n")
    assert lex.words() == ["c", "sea"]
    assert lex.phones() == ["iy", "k", "s"]
    assert ("c", ("k",)) in lex
    assert write_lexicon(lex) == "c s iy\nsea s iy\nc k\n"


def test_char_lexicon():
    lex = char_lexicon(["fox", "fox", "ab"])
    assert list(lex) == [("fox", ("f", "o", "x")), ("ab", ("a", "b"))]


def test_build_l_symbol_tables(lang):
    assert list(lang.phone_syms) == ["<eps>", "ah", "b", "iy", JUNK_PHONE, "#0"]
    assert list(lang.word_syms) == ["<eps>", "[unk]", "a", "b", "#0"]
    assert lang.fst.start == 0
    assert lang.fst.is_final(0)


def test_build_l_accepts_word_phones(lang):
    path = input_path(lang.fst, lang.phone_syms, phone_ids(lang, ["ah", "b", "iy"]))
    assert words_of(lang, path) == ["a", "b"]
    assert path.total_weight == 0.0
    path = input_path(lang.fst, lang.phone_syms, phone_ids(lang, [JUNK_PHONE]))
    assert words_of(lang, path) == [UNK_WORD]


def test_build_l_backoff_loop(lang):
    loop = Arc(lang.phone_syms.find("#0"), lang.word_syms.find("#0"), 0.0, 0)
    assert loop in lang.fst.arcs(0)


def test_homophones_get_disambiguation_symbols():
    l = build_l(parse_lexicon("c s iy\nsea s iy\nsi s\n"), add_unk=False)
    # "s iy" is shared, "s" is a prefix of it.
    assert {c.word: c.disambig for c in l.chains.values()} == {"c": 1, "sea": 2, "si": 1}
    assert "#2" in l.phone_syms
    assert UNK_WORD not in l.word_syms


def test_empty_lexicon_rejected():
    with pytest.raises(LexiconError):
        build_l(Lexicon())


def test_add_words_to_l(lang, oov_lexicon):
    new = add_words_to_l(lang, oov_lexicon)
    assert "ba" in new.word_syms and "ib" in new.word_syms
    assert "ba" not in lang.word_syms
    path = input_path(new.fst, new.phone_syms, phone_ids(new, ["b", "ah", "ah"]))
    assert words_of(new, path) == ["ba", "a"]
    # Word ids of existing words never move.
    for word, label in lang.word_syms.items():
        assert new.word_syms.find(word) == label


def test_add_words_assigns_next_free_disambiguation():
    l = build_l(parse_lexicon("c s iy\nsea s iy\n"), add_unk=False)
    new = add_words_to_l(l, parse_lexicon("cee s iy\n"))
    numbers = {c.word: c.disambig for c in new.chains.values()}
    assert numbers == {"c": 1, "sea": 2, "cee": 3}


def test_add_words_retargets_unmarked_homophone():
    l = build_l(parse_lexicon("c s iy\nb b\n"), add_unk=False)
    assert l.chains[("c", ("s", "iy"))].disambig is None
    new = add_words_to_l(l, parse_lexicon("sea s iy\n"))
    assert {c.word: c.disambig for c in new.chains.values()} == {"c": 1, "b": None, "sea": 2}
    path = input_path(new.fst, new.phone_syms, phone_ids(new, ["s", "iy"]))
    assert words_of(new, path) in (["c"], ["sea"])


def test_add_words_skips_duplicates_and_rejects_unknown_phones(lang):
    same = add_words_to_l(lang, parse_lexicon("a ah\n"))
    assert same.fst.num_arcs == lang.fst.num_arcs
    with pytest.raises(LexiconError, match="unknown phone zz in c"):
        add_words_to_l(lang, parse_lexicon("c zz\n"))


def cyclic_phone_lm(l):
    """0 -ah/0.5-> 1 -b/0.2-> 0, final 0 at 0.1."""
    p = Fst()
    s0, s1 = p.add_states(2)
    p.set_start(s0)
    p.add_arc(s0, Arc(l.phone_syms.find("ah"), 0, 0.5, s1))
    p.add_arc(s1, Arc(l.phone_syms.find("b"), 0, 0.2, s0))
    p.set_final(s0, 0.1)
    return p


def test_splice_unk_lm_replaces_junk(lang):
    spliced = splice_unk_lm(lang, cyclic_phone_lm(lang))
    junk = lang.phone_syms.find(JUNK_PHONE)
    assert all(a.ilabel != junk for s in spliced.fst.states() for a in spliced.fst.arcs(s))
    assert spliced.unk_lm["entry_symbol"] == "#1"
    assert spliced.unk_lm["exit_symbol"] == "#2"
    assert spliced.unk_lm["num_states"] == 2
    assert (UNK_WORD, (JUNK_PHONE,)) not in spliced.chains
    # The input L is untouched.
    assert (UNK_WORD, (JUNK_PHONE,)) in lang.chains


def test_spliced_l_with_unigram_g(lang, unigram_g):
    spliced = splice_unk_lm(lang, cyclic_phone_lm(lang))
    lg = compose(spliced.fst, unigram_g.fst)
    phones = ["ah", "b", "ah", "b"]
    path = input_path(lg, spliced.phone_syms, phone_ids(spliced, phones))
    assert words_of(spliced, path) == [UNK_WORD]
    phone_lm_cost = 0.5 + 0.2 + 0.5 + 0.2 + 0.1
    g_cost = (1.5 + 1.0) * LN10
    assert math.isclose(path.total_weight, phone_lm_cost + g_cost, abs_tol=1e-6)

    spans = extract_unk_spans(path, spliced.phone_syms, spliced.word_syms)
    assert spans == [phone_ids(spliced, phones)]
    assert spans_to_strings(spans, spliced.phone_syms) == ["ah b ah b"]
    assert spans_to_strings(spans, spliced.phone_syms, joiner="") == ["ahbahb"]


def test_splice_maps_phone_lm_symbols_by_name(lang):
    p_syms = SymbolTable(["b", "ah"])
    p = Fst()
    s0, s1 = p.add_states(2)
    p.set_start(s0)
    p.add_arc(s0, Arc(p_syms.find("ah"), 0, 0.0, s1))
    p.set_final(s1)
    spliced = splice_unk_lm(lang, p, p_syms)
    first = spliced.unk_lm["first_state"]
    assert spliced.fst.arcs(first)[0].ilabel == lang.phone_syms.find("ah")

    bad = Fst()
    bad.add_states(2)
    bad.set_start(0)
    bad.add_arc(0, Arc(SymbolTable(["zz"]).find("zz"), 0, 0.0, 1))
    with pytest.raises(LexiconError):
        splice_unk_lm(lang, bad, SymbolTable(["zz"]))


def test_custom_junk_phone():
    l = build_l(parse_lexicon(LEXICON), junk_phone="spn")
    assert "spn" in l.phone_syms and JUNK_PHONE not in l.phone_syms
    assert (UNK_WORD, ("spn",)) in l.chains
    spliced = splice_unk_lm(l, cyclic_phone_lm(l), junk_phone="spn")
    assert (UNK_WORD, ("spn",)) not in spliced.chains
    with pytest.raises(LexiconError):
        splice_unk_lm(l, cyclic_phone_lm(l))
    with pytest.raises(LexiconError):
        build_l(parse_lexicon(LEXICON), junk_phone="#9")


@pytest.mark.parametrize("name", ["#0", JUNK_PHONE])
def test_splice_rejects_disambiguation_and_junk_labels(lang, name):
    p = Fst()
    s0, s1 = p.add_states(2)
    p.set_start(s0)
    p.add_arc(s0, Arc(lang.phone_syms.find(name), 0, 0.0, s1))
    p.set_final(s1)
    with pytest.raises(LexiconError, match=name):
        splice_unk_lm(lang, p)
    p_syms = SymbolTable(["ah", name])
    by_name = Fst()
    by_name.add_states(2)
    by_name.set_start(0)
    by_name.add_arc(0, Arc(p_syms.find(name), 0, 0.0, 1))
    by_name.set_final(1)
    with pytest.raises(LexiconError, match=name):
        splice_unk_lm(lang, by_name, p_syms)


def test_splice_needs_junk_pronunciation():
    l = build_l(parse_lexicon("a ah\n"), add_unk=False)
    p = Fst()
    p.add_state()
    p.set_start(0)
    with pytest.raises(LexiconError):
        splice_unk_lm(l, p)
