"""Decoding graph construction and the [unk] → OOV-HCL surgery."""

import math

import pytest

from oovkit.config import BiasConfig
from oovkit.errors import HclgError
from oovkit.fst import Arc
from oovkit.fst_ops import input_path, weighted_relation
from oovkit.g_graph import arpa_to_g, mod_lg
from oovkit.hclg import (
    DecodingGraph,
    TransitionModel,
    build_hclg,
    mod_hclg,
    read_transition_model,
    write_transition_model,
)
from oovkit.lexicon import parse_lexicon

BIAS = BiasConfig(penalty=2.3)


@pytest.fixture
def tm(lang):
    return TransitionModel.from_phones(list(lang.phone_syms))


@pytest.fixture
def graph(lang, bigram_g, tm):
    return build_hclg(lang, bigram_g, tm)


def best(dg, tids):
    path = input_path(dg.fst, dg.tid_syms, tids)
    return [dg.word_syms.symbol(o) for o in path.olabels], path.total_weight


def word_relation(dg, max_input=4, max_output=3):
    relation = weighted_relation(dg.fst, max_input, max_output)
    return {(ins, tuple(dg.word_syms.symbol(o) for o in outs)): cost
            for (ins, outs), cost in relation.items()}


def unk_sites(dg):
    unk = dg.word_syms.find("[unk]")
    return [(s, i, a) for s in dg.fst.states() for i, a in enumerate(dg.fst.arcs(s)) if a.olabel == unk]


def test_transition_ids_from_phones(tm):
    assert tm.phone_to_tid == {"ah": 1, "b": 2, "iy": 3, "jnk": 4}
    assert not tm.loops_enabled
    assert tm.max_tid == 4


def test_transition_model_text():
    tm = TransitionModel({"ah": 1, "b": 2}, 0.5)
    assert read_transition_model(write_transition_model(tm)) == tm
    assert tm.loops_enabled and tm.max_tid == 4 and tm.loop_tid(2) == 4


@pytest.mark.parametrize("text", ["ah\t1\nb\t3\n", "ah\t1\nah\t2\n", "ah one\n",
                                  "# self_loop_prob=1.5\nah\t1\n", "# self_loop_prob=x\n"])
def test_transition_model_errors(text):
    with pytest.raises(HclgError):
        read_transition_model(text)


def test_build_hclg_paths(graph, bigram_g):
    words, cost = best(graph, [1, 2, 3])
    assert words == ["a", "b"]
    assert cost == pytest.approx(bigram_g.sentence_cost(["a", "b"]))
    words, cost = best(graph, [1, 4])
    assert words == ["a", "[unk]"]
    assert cost == pytest.approx(bigram_g.sentence_cost(["a", "[unk]"]))
    assert graph.tid_syms.find("4") == 4


def test_build_hclg_checks_inputs(lang, bigram_g, subword_g):
    with pytest.raises(HclgError, match="no transition-id"):
        build_hclg(lang, bigram_g, TransitionModel.from_phones(["ah", "b"]))
    with pytest.raises(HclgError, match="word symbol table"):
        build_hclg(lang, subword_g, TransitionModel.from_phones(list(lang.phone_syms)))


def test_self_loops(lang, bigram_g, graph):
    looped = build_hclg(lang, bigram_g, TransitionModel.from_phones(list(lang.phone_syms), 0.5))
    _, base = best(graph, [1, 2, 3])
    words, cost = best(looped, [1, 2, 3])
    assert words == ["a", "b"]
    assert cost == pytest.approx(base + 3 * math.log(2))
    words, cost = best(looped, [1, 5, 5, 2, 3])
    assert words == ["a", "b"]
    assert cost == pytest.approx(base + 5 * math.log(2))


def test_mod_hclg_matches_word_level_surgery(lang, bigram_g, oov_lexicon, tm, graph):
    modified = mod_hclg(graph, oov_lexicon, BIAS)
    reference = build_hclg(*mod_lg(lang, bigram_g, oov_lexicon, BIAS), tm)
    got, want = word_relation(modified), word_relation(reference)
    assert set(got) == set(want)
    for key, cost in want.items():
        assert got[key] == pytest.approx(cost, abs=1e-6), key
    assert best(modified, [1, 2, 1])[0] == ["a", "ba"]
    assert best(modified, [1, 3, 2])[0] == ["a", "ib"]


def test_mod_hclg_redirects_unk_arcs(graph, oov_lexicon):
    sites = unk_sites(graph)
    assert sites
    modified = mod_hclg(graph, oov_lexicon, BIAS)
    entry = modified.hcl_entries[0]["entry"]
    for state, index, arc in sites:
        assert modified.fst.arcs(state)[index] == Arc(0, 0, arc.weight + 2.3, entry)
    assert not unk_sites(modified)
    # Existing states keep their ids; the HCL is appended.
    assert modified.fst.num_states > graph.fst.num_states
    assert entry >= graph.fst.num_states
    assert unk_sites(graph) == sites


def test_mod_hclg_keeps_in_vocabulary_costs(graph, oov_lexicon):
    modified = mod_hclg(graph, oov_lexicon, BIAS)
    assert best(modified, [1, 2, 3]) == best(graph, [1, 2, 3])
    _, unk_cost = best(graph, [1, 4])
    words, cost = best(modified, [1, 2, 1])
    assert cost == pytest.approx(unk_cost + 2.3)
    _, free = best(mod_hclg(graph, oov_lexicon, BiasConfig(penalty=0.0)), [1, 2, 1])
    assert free == pytest.approx(unk_cost)


def test_mod_hclg_with_self_loops(lang, bigram_g, oov_lexicon):
    looped = build_hclg(lang, bigram_g, TransitionModel.from_phones(list(lang.phone_syms), 0.5))
    modified = mod_hclg(looped, oov_lexicon, BIAS)
    assert best(modified, [1, 2, 6, 1, 5])[0] == ["a", "ba"]


def test_mod_hclg_needs_limited_unk_history(lang, trigram, tm, oov_lexicon):
    graph = build_hclg(lang, arpa_to_g(trigram, lang.word_syms), tm)
    with pytest.raises(HclgError, match="limit-unk-history"):
        mod_hclg(graph, oov_lexicon, BIAS)


def test_mod_hclg_errors(graph, oov_lexicon):
    with pytest.raises(HclgError, match="no transition-id"):
        mod_hclg(graph, parse_lexicon("zz zz\n"), BIAS)
    with pytest.raises(HclgError, match="empty"):
        mod_hclg(graph, parse_lexicon(""), BIAS)
    with pytest.raises(HclgError, match="monophone"):
        mod_hclg(DecodingGraph(graph.fst, graph.tm, graph.word_syms, context_width=3), oov_lexicon)
    with pytest.raises(HclgError, match="not in the word symbol table"):
        mod_hclg(graph, oov_lexicon, unk="<unk>")
