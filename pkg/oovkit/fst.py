"""
Purpose: Mutable weighted FST over the tropical semiring - the substrate for L, G, P, HCL and HCLG
LLM-Note:
  Dependencies: imports from [math, collections, dataclasses, typing] | imported by [every graph module] | tested by [tests/test_fst.py]
  Data flow: builders call add_state()/add_arc()/set_final() → surgery code reads arcs(state) and rewrites them with set_arc()/delete_arcs() → fst_ops/fst_text consume the finished machine
  State/Effects: state ids are dense integers; nothing here renumbers states (only fst_ops.connect does, and it returns a new Fst) so external state maps stay valid
  Integration: exposes ZERO, ONE, plus(), times(), Arc, Fst, LinearPath
  Performance: arc lists per state, finals in a dict | copy() is shallow per arc (Arc is frozen)
  Errors: IndexError-style misuse raises FstFormatError with the offending state id
"""

import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import FstFormatError

# Tropical semiring: weights are costs in nats (-ln p).
ZERO = math.inf
ONE = 0.0


def plus(a: float, b: float) -> float:
    return min(a, b)


def times(a: float, b: float) -> float:
    return a + b


@dataclass(frozen=True)
class Arc:
    """A transition; label 0 is epsilon."""
    ilabel: int
    olabel: int
    weight: float
    nextstate: int


ArcKey = Tuple[int, int, int, float, int]


class Fst:
    """Weighted transducer with one start state and per-state final weights."""

    def __init__(self) -> None:
        self._arcs: List[List[Arc]] = []
        self._finals: Dict[int, float] = {}
        self.start: Optional[int] = None

    # --- construction -------------------------------------------------------

    def add_state(self) -> int:
        self._arcs.append([])
        return len(self._arcs) - 1

    def add_states(self, count: int) -> List[int]:
        return [self.add_state() for _ in range(count)]

    def set_start(self, state: int) -> None:
        self._check(state)
        self.start = state

    def set_final(self, state: int, weight: float = ONE) -> None:
        self._check(state)
        if weight == ZERO:
            self._finals.pop(state, None)
        else:
            self._finals[state] = weight

    def add_arc(self, state: int, arc: Arc) -> None:
        self._check(state)
        self._check(arc.nextstate)
        self._arcs[state].append(arc)

    def set_arc(self, state: int, index: int, arc: Arc) -> None:
        self._check(arc.nextstate)
        self._arcs[state][index] = arc

    def set_arcs(self, state: int, arcs: Iterable[Arc]) -> None:
        arcs = list(arcs)
        for arc in arcs:
            self._check(arc.nextstate)
        self._arcs[state] = arcs

    def delete_arcs(self, state: int) -> None:
        self._arcs[state] = []

    # --- inspection ---------------------------------------------------------

    def arcs(self, state: int) -> List[Arc]:
        """Arcs leaving a state. Treat the returned list as read-only."""
        return self._arcs[state]

    def final(self, state: int) -> float:
        return self._finals.get(state, ZERO)

    def is_final(self, state: int) -> bool:
        return state in self._finals

    @property
    def finals(self) -> Dict[int, float]:
        return dict(self._finals)

    def states(self) -> range:
        return range(len(self._arcs))

    @property
    def num_states(self) -> int:
        return len(self._arcs)

    @property
    def num_arcs(self) -> int:
        return sum(len(arcs) for arcs in self._arcs)

    def arc_multiset(self) -> Counter:
        """Counter of (src, ilabel, olabel, weight, dst) tuples, for isomorphism checks."""
        return Counter(
            (s, a.ilabel, a.olabel, a.weight, a.nextstate)
            for s in self.states() for a in self._arcs[s]
        )

    def copy(self) -> "Fst":
        fst = Fst()
        fst._arcs = [list(arcs) for arcs in self._arcs]
        fst._finals = dict(self._finals)
        fst.start = self.start
        return fst

    def _check(self, state: int) -> None:
        if not 0 <= state < len(self._arcs):
            raise FstFormatError(f"state {state} does not exist ({len(self._arcs)} states)")

    def __repr__(self) -> str:
        return f"Fst(states={self.num_states}, arcs={self.num_arcs}, start={self.start})"


@dataclass(frozen=True)
class LinearPath:
    """A start→final path: states[i] is the source of arcs[i]; states[-1] is final."""
    states: Tuple[int, ...]
    arcs: Tuple[Arc, ...]
    total_weight: float

    @property
    def ilabels(self) -> List[int]:
        return [a.ilabel for a in self.arcs if a.ilabel != 0]

    @property
    def olabels(self) -> List[int]:
        return [a.olabel for a in self.arcs if a.olabel != 0]
