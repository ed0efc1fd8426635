"""Composition, trimming, shortest path and [unk] span extraction."""

import math
import random

import pytest

from oovkit.errors import EmptyLanguageError, OovkitError
from oovkit.fst import Arc, Fst
from oovkit.fst_ops import (
    compose,
    connect,
    connect_with_map,
    extract_unk_spans,
    input_path,
    linear_chain,
    remove_disambiguation,
    shortest_path,
    spans_to_strings,
    weighted_relation,
)
from oovkit.fst_text import read_fst_text
from oovkit.symbols import SymbolTable

SYMS = SymbolTable(["a", "b", "c", "#0"])


def fst_of(text):
    return read_fst_text(text, SYMS, SYMS)


def test_compose_one_arc_each():
    left = fst_of("0\t1\ta\tb\t0.5\n1\n")
    right = fst_of("0\t1\tb\tc\t0.25\n1\n")
    path = shortest_path(compose(left, right))
    assert path.ilabels == [SYMS.find("a")]
    assert path.olabels == [SYMS.find("c")]
    assert path.total_weight == pytest.approx(0.75)


def test_compose_epsilons_do_not_duplicate_paths():
    # a:<eps> then <eps>:b on the left, <eps>:c on the right.
    left = fst_of("0\t1\ta\t<eps>\t1.0\n1\t2\t<eps>\tb\t0.0\n2\n")
    right = fst_of("0\t0\t<eps>\tc\t2.0\n0\t1\tb\tb\t0.5\n1\n")
    relation = weighted_relation(compose(left, right), 2, 3)
    a, b, c = (SYMS.find(s) for s in "abc")
    assert relation[((a,), (b,))] == pytest.approx(1.5)
    assert relation[((a,), (c, b))] == pytest.approx(3.5)
    assert relation[((a,), (c, c, b))] == pytest.approx(5.5)


def test_compose_empty_when_nothing_matches():
    left = fst_of("0\t1\ta\ta\n1\n")
    right = fst_of("0\t1\tb\tb\n1\n")
    result = compose(left, right)
    assert result.num_states == 0
    with pytest.raises(EmptyLanguageError):
        shortest_path(result)


def test_diamond_shortest_path():
    fst = fst_of(
        "0\t1\ta\ta\t0.5\n1\t3\tb\tb\t0.5\n"
        "0\t2\tc\tc\t0.4\n2\t3\tb\tb\t0.7\n3\n"
    )
    path = shortest_path(fst)
    assert path.total_weight == pytest.approx(1.0)
    assert path.states == (0, 1, 3)


def test_shortest_path_ties_take_smallest_states():
    fst = fst_of("0\t2\ta\ta\t1.0\n0\t1\tb\tb\t1.0\n1\n2\n")
    assert shortest_path(fst).states == (0, 1)


def test_shortest_path_includes_final_weight():
    fst = fst_of("0\t1\ta\ta\t0.5\n0\t2\tb\tb\t0.1\n1\t0.0\n2\t1.0\n")
    path = shortest_path(fst)
    assert path.total_weight == pytest.approx(0.5)
    assert path.ilabels == [SYMS.find("a")]


def test_negative_cycle_detected():
    fst = fst_of("0\t1\ta\ta\t-1.0\n1\t0\tb\tb\t-1.0\n1\n")
    with pytest.raises(OovkitError):
        shortest_path(fst)


def test_no_start_is_empty_language():
    with pytest.raises(EmptyLanguageError):
        shortest_path(Fst())


def test_connect_drops_dead_states():
    fst = fst_of("0\t1\ta\ta\n0\t2\tb\tb\n2\t3\tc\tc\n1\n4\n")
    trimmed, mapping = connect_with_map(fst)
    assert trimmed.num_states == 2
    assert set(mapping) == {0, 1}
    assert connect(trimmed).num_states == 2


def test_linear_chain_pads_shorter_side():
    chain = linear_chain([1, 2], [3])
    assert chain.num_states == 3
    assert chain.arcs(1) == [Arc(2, 0, 0.0, 2)]
    assert chain.is_final(2)


def test_remove_disambiguation_and_input_path():
    fst = fst_of("0\t1\t#0\t<eps>\t0.3\n1\t2\ta\ta\t0.2\n2\n")
    stripped = remove_disambiguation(fst, SYMS)
    assert stripped.arcs(0)[0].ilabel == 0
    path = input_path(fst, SYMS, [SYMS.find("a")])
    assert path.total_weight == pytest.approx(0.5)


def test_extract_unk_spans():
    phones = SymbolTable(["ah", "b", "iy", "#1", "#2"])
    words = SymbolTable(["a", "[unk]"])
    unk = words.find("[unk]")
    ah, b, iy, d1, d2 = (phones.find(s) for s in ["ah", "b", "iy", "#1", "#2"])
    fst = Fst()
    states = fst.add_states(7)
    fst.set_start(0)
    fst.add_arc(0, Arc(ah, words.find("a"), 0.0, 1))
    fst.add_arc(1, Arc(d1, unk, 0.0, 2))
    fst.add_arc(2, Arc(b, 0, 0.5, 3))
    fst.add_arc(3, Arc(iy, 0, 0.5, 4))
    fst.add_arc(4, Arc(d2, 0, 0.0, 5))
    fst.add_arc(5, Arc(0, 0, 0.0, 6))
    fst.set_final(states[-1])
    spans = extract_unk_spans(shortest_path(fst), phones, words)
    assert spans == [[b, iy]]
    assert spans_to_strings(spans, phones) == ["b iy"]
    assert spans_to_strings(spans, phones, joiner="") == ["biy"]


def test_extract_unk_spans_none_without_unk():
    fst = fst_of("0\t1\ta\ta\n1\n")
    words = SymbolTable(["a", "b", "c", "#0", "[unk]"])
    assert extract_unk_spans(shortest_path(fst), SYMS, words) == []


def test_weighted_relation_respects_bounds():
    fst = fst_of("0\t0\ta\ta\t1.0\n0\n")
    relation = weighted_relation(fst, 2, 2)
    a = SYMS.find("a")
    assert relation == {((), ()): 0.0, ((a,), (a,)): 1.0, ((a, a), (a, a)): 2.0}
    assert math.isclose(min(relation.values()), 0.0)


def random_dag(rng, num_states, labels=3, density=0.5):
    """Acyclic machine: arcs only go to higher-numbered states."""
    fst = Fst()
    fst.add_states(num_states)
    fst.set_start(0)
    for s in range(num_states):
        for t in range(s + 1, num_states):
            if rng.random() < density:
                fst.add_arc(s, Arc(rng.randint(0, labels), rng.randint(0, labels),
                                   round(rng.uniform(0.0, 3.0), 2), t))
        if rng.random() < 0.3:
            fst.set_final(s, round(rng.uniform(0.0, 1.0), 2))
    fst.set_final(num_states - 1)
    return fst


def test_compose_is_associative_on_random_machines():
    rng = random.Random(3)
    for _ in range(60):
        a, b, c = (random_dag(rng, rng.randint(1, 4)) for _ in range(3))
        left = weighted_relation(compose(compose(a, b), c), 6, 6)
        right = weighted_relation(compose(a, compose(b, c)), 6, 6)
        assert left.keys() == right.keys()
        for key, cost in left.items():
            assert right[key] == pytest.approx(cost)


def test_shortest_path_matches_enumerated_minimum():
    rng = random.Random(17)
    for _ in range(300):
        fst = random_dag(rng, rng.randint(1, 10), density=0.4)
        relation = weighted_relation(fst, 10, 10)
        if not relation:
            with pytest.raises(EmptyLanguageError):
                shortest_path(fst)
            continue
        best = min(relation.values())
        path = shortest_path(fst)
        assert path.total_weight == pytest.approx(best)
        assert path.states[0] == 0
        walked = sum(arc.weight for arc in path.arcs) + fst.final(path.states[-1])
        assert walked == pytest.approx(best)
        for src, arc, dst in zip(path.states, path.arcs, path.states[1:]):
            assert arc in fst.arcs(src) and arc.nextstate == dst
