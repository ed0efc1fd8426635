"""AT&T text format."""

import random

import pytest

from oovkit.errors import FstFormatError, SymbolError
from oovkit.fst import Arc, Fst
from oovkit.fst_text import format_weight, read_fst_text, write_fst_text
from oovkit.symbols import SymbolTable

SYMS = SymbolTable(["a", "b", "c"])


def test_read_arcs_and_finals():
    fst = read_fst_text("0\t1\ta\tb\t0.5\n1\t2\tb\tc\n2\t0.25\n", SYMS, SYMS)
    assert fst.start == 0
    assert fst.num_states == 3
    assert fst.arcs(0) == [Arc(1, 2, 0.5, 1)]
    assert fst.arcs(1) == [Arc(2, 3, 0.0, 2)]
    assert fst.final(2) == 0.25


def test_first_line_sets_start():
    fst = read_fst_text("3\t1\ta\ta\n1\n", SYMS, SYMS)
    assert fst.start == 3
    assert fst.num_states == 4


def test_empty_text_is_empty_fst():
    fst = read_fst_text("", SYMS, SYMS)
    assert fst.start is None
    assert write_fst_text(fst, SYMS, SYMS) == ""


@pytest.mark.parametrize("line", ["0\t1\ta\n", "0\tx\ta\ta\n", "0\t1\ta\ta\tnope\n"])
def test_malformed_lines(line):
    with pytest.raises(FstFormatError):
        read_fst_text(line, SYMS, SYMS)


def test_unknown_symbol():
    with pytest.raises(SymbolError):
        read_fst_text("0\t1\tzz\ta\n", SYMS, SYMS)


def test_write_formats_six_decimals():
    fst = Fst()
    a, b = fst.add_states(2)
    fst.set_start(a)
    fst.add_arc(a, Arc(1, 0, 1.0 / 3.0, b))
    fst.set_final(b)
    assert write_fst_text(fst, SYMS, SYMS) == "0\t1\ta\t<eps>\t0.333333\n1\t0.000000\n"
    assert format_weight(-0.0) == "0.000000"


def test_start_state_written_first():
    fst = Fst()
    a, b = fst.add_states(2)
    fst.set_start(b)
    fst.add_arc(a, Arc(1, 1, 0.0, b))
    fst.add_arc(b, Arc(2, 2, 0.0, a))
    fst.set_final(a)
    text = write_fst_text(fst, SYMS, SYMS)
    assert text.splitlines()[0].startswith("1\t0\tb")
    assert read_fst_text(text, SYMS, SYMS).start == 1


def test_arcless_non_final_start_survives_text():
    fst = Fst()
    a, b, c = fst.add_states(3)
    fst.set_start(c)
    fst.add_arc(a, Arc(1, 1, 0.5, b))
    fst.set_final(b)
    text = write_fst_text(fst, SYMS, SYMS)
    assert text.splitlines()[0] == "2\tInfinity"
    back = read_fst_text(text, SYMS, SYMS)
    assert back.start == 2
    assert not back.is_final(2)
    assert back.arc_multiset() == fst.arc_multiset()
    assert back.finals == {1: 0.0}


def test_random_fst_survives_text():
    rng = random.Random(7)
    fst = Fst()
    fst.add_states(20)
    fst.set_start(0)
    for _ in range(60):
        fst.add_arc(rng.randrange(20), Arc(rng.randrange(4), rng.randrange(4),
                                           round(rng.uniform(0, 5), 6), rng.randrange(20)))
    for s in rng.sample(range(20), 4):
        fst.set_final(s, round(rng.uniform(0, 2), 6))
    # State 19 must be mentioned for the count to match.
    fst.add_arc(19, Arc(1, 1, 0.0, 0))
    back = read_fst_text(write_fst_text(fst, SYMS, SYMS), SYMS, SYMS)
    assert back.arc_multiset() == fst.arc_multiset()
    assert back.finals == fst.finals
