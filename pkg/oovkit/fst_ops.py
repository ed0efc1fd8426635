"""
Purpose: Algebraic FST operations - composition, shortest path, trimming - plus the small relabeling helpers graph surgery needs
LLM-Note:
  Dependencies: imports from [collections, typing, fst.py, symbols.py, errors.py] | imported by [lexicon.py, g_graph.py, hclg.py, cli/commands/fst_commands.py] | tested by [tests/test_fst_ops.py]
  Data flow: compose(a, b) explores (state_a, state_b, filter) triples breadth-first → connect() trims → new Fst | shortest_path(fst) computes costs-to-final (label-correcting, negative arcs allowed) → walks tight arcs picking the smallest next state → LinearPath | extract_unk_spans(path, isyms, osyms, unk) slices the path's input labels per [unk] output
  State/Effects: never mutates its inputs; every operation returns a new Fst
  Integration: exposes compose(), shortest_path(), connect(), connect_with_map(), extract_unk_spans(), spans_to_strings(), linear_chain(), input_path(), relabel_inputs(), remove_disambiguation(), weighted_relation()
  Performance: composition is O(|Q_a|·|Q_b|·3) states worst case - correctness at desk scale, not speed | shortest_path is Bellman-Ford style, O(|Q|·|E|) worst case
  Errors: EmptyLanguageError when no accepting path exists | OovkitError on a negative-weight cycle
"""

from collections import defaultdict, deque
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .errors import EmptyLanguageError, OovkitError
from .fst import ONE, ZERO, Arc, Fst, LinearPath
from .symbols import SymbolTable

# Composition filter states: 0 after a matched (or paired-epsilon) move, 1 after the left
# machine moved alone on an output epsilon, 2 after the right machine moved alone on an input
# epsilon. Moving alone on the "other" side from 1 or 2 is blocked, so each interleaving of
# epsilon moves is counted once.
_FILTER_ANY = 0
_FILTER_LEFT = 1
_FILTER_RIGHT = 2

_TIGHT_TOL = 1e-9


def compose(a: Fst, b: Fst) -> Fst:
    """Weighted composition of a (x:y) with b (y:z), trimmed."""
    result = Fst()
    if a.start is None or b.start is None:
        return result

    by_ilabel: List[Dict[int, List[Arc]]] = []
    for state in b.states():
        index: Dict[int, List[Arc]] = defaultdict(list)
        for arc in b.arcs(state):
            index[arc.ilabel].append(arc)
        by_ilabel.append(index)

    ids: Dict[Tuple[int, int, int], int] = {}
    queue: deque = deque()

    def state_of(triple: Tuple[int, int, int]) -> int:
        sid = ids.get(triple)
        if sid is None:
            sid = result.add_state()
            ids[triple] = sid
            queue.append(triple)
        return sid

    result.set_start(state_of((a.start, b.start, _FILTER_ANY)))
    while queue:
        triple = queue.popleft()
        sa, sb, filt = triple
        src = ids[triple]
        if a.is_final(sa) and b.is_final(sb):
            result.set_final(src, a.final(sa) + b.final(sb))

        for arc_a in a.arcs(sa):
            if arc_a.olabel != 0:
                for arc_b in by_ilabel[sb].get(arc_a.olabel, ()):
                    dst = state_of((arc_a.nextstate, arc_b.nextstate, _FILTER_ANY))
                    result.add_arc(src, Arc(arc_a.ilabel, arc_b.olabel,
                                            arc_a.weight + arc_b.weight, dst))
                continue
            if filt != _FILTER_RIGHT:
                dst = state_of((arc_a.nextstate, sb, _FILTER_LEFT))
                result.add_arc(src, Arc(arc_a.ilabel, 0, arc_a.weight, dst))
            if filt == _FILTER_ANY:
                for arc_b in by_ilabel[sb].get(0, ()):
                    dst = state_of((arc_a.nextstate, arc_b.nextstate, _FILTER_ANY))
                    result.add_arc(src, Arc(arc_a.ilabel, arc_b.olabel,
                                            arc_a.weight + arc_b.weight, dst))
        if filt != _FILTER_LEFT:
            for arc_b in by_ilabel[sb].get(0, ()):
                dst = state_of((sa, arc_b.nextstate, _FILTER_RIGHT))
                result.add_arc(src, Arc(0, arc_b.olabel, arc_b.weight, dst))

    return connect(result)


def _accessible(fst: Fst) -> Set[int]:
    if fst.start is None:
        return set()
    seen = {fst.start}
    stack = [fst.start]
    while stack:
        for arc in fst.arcs(stack.pop()):
            if arc.nextstate not in seen:
                seen.add(arc.nextstate)
                stack.append(arc.nextstate)
    return seen


def _reverse_adjacency(fst: Fst) -> List[List[Tuple[int, Arc]]]:
    reverse: List[List[Tuple[int, Arc]]] = [[] for _ in fst.states()]
    for state in fst.states():
        for arc in fst.arcs(state):
            reverse[arc.nextstate].append((state, arc))
    return reverse


def _coaccessible(fst: Fst) -> Set[int]:
    reverse = _reverse_adjacency(fst)
    seen = set(fst.finals)
    stack = list(seen)
    while stack:
        for src, _ in reverse[stack.pop()]:
            if src not in seen:
                seen.add(src)
                stack.append(src)
    return seen


def connect_with_map(fst: Fst) -> Tuple[Fst, Dict[int, int]]:
    """Trim to states on some start→final path; returns the old→new state map."""
    keep = sorted(_accessible(fst) & _coaccessible(fst))
    mapping = {old: new for new, old in enumerate(keep)}
    result = Fst()
    result.add_states(len(keep))
    for old in keep:
        for arc in fst.arcs(old):
            if arc.nextstate in mapping:
                result.add_arc(mapping[old], Arc(arc.ilabel, arc.olabel, arc.weight,
                                                 mapping[arc.nextstate]))
        if fst.is_final(old):
            result.set_final(mapping[old], fst.final(old))
    if fst.start in mapping:
        result.set_start(mapping[fst.start])
    return result, mapping


def connect(fst: Fst) -> Fst:
    return connect_with_map(fst)[0]


def _costs_to_final(fst: Fst) -> List[float]:
    """Cheapest cost from each state to acceptance; arcs may carry negative weights."""
    reverse = _reverse_adjacency(fst)
    dist = [ZERO] * fst.num_states
    queue: deque = deque()
    queued = [False] * fst.num_states
    for state, weight in sorted(fst.finals.items()):
        dist[state] = weight
        queue.append(state)
        queued[state] = True
    relaxations = [0] * fst.num_states
    while queue:
        state = queue.popleft()
        queued[state] = False
        for src, arc in reverse[state]:
            candidate = arc.weight + dist[state]
            if candidate < dist[src] - _TIGHT_TOL:
                dist[src] = candidate
                relaxations[src] += 1
                if relaxations[src] > fst.num_states + 1:
                    raise OovkitError(f"negative-weight cycle through state {src}")
                if not queued[src]:
                    queue.append(src)
                    queued[src] = True
    return dist


def _tight(weight: float, rest: float, target: float) -> bool:
    return rest != ZERO and abs(weight + rest - target) <= _TIGHT_TOL * max(1.0, abs(target))


def shortest_path(fst: Fst) -> LinearPath:
    """Minimum-cost accepting path; ties go to the lexicographically smallest state sequence."""
    if fst.start is None:
        raise EmptyLanguageError("empty language: FST has no start state")
    dist = _costs_to_final(fst)
    if dist[fst.start] == ZERO:
        raise EmptyLanguageError("empty language: no accepting path from the start state")

    def can_finish(state: int, blocked: Set[int]) -> bool:
        # Reachability of a tight acceptance through tight arcs, avoiding states on the path.
        seen = {state}
        stack = [state]
        while stack:
            s = stack.pop()
            if fst.is_final(s) and _tight(fst.final(s), 0.0, dist[s]):
                return True
            for arc in fst.arcs(s):
                n = arc.nextstate
                if n not in seen and n not in blocked and _tight(arc.weight, dist[n], dist[s]):
                    seen.add(n)
                    stack.append(n)
        return False

    states = [fst.start]
    arcs: List[Arc] = []
    on_path = {fst.start}
    total = ONE
    state = fst.start
    while True:
        if fst.is_final(state) and _tight(fst.final(state), 0.0, dist[state]):
            total += fst.final(state)
            break
        candidates = sorted(
            (a for a in fst.arcs(state)
             if a.nextstate not in on_path and _tight(a.weight, dist[a.nextstate], dist[state])),
            key=lambda a: (a.nextstate, a.ilabel, a.olabel),
        )
        chosen = next((a for a in candidates if can_finish(a.nextstate, on_path)), None)
        if chosen is None:
            raise OovkitError(f"shortest path walk stuck at state {state}")
        arcs.append(chosen)
        total += chosen.weight
        state = chosen.nextstate
        states.append(state)
        on_path.add(state)
    return LinearPath(tuple(states), tuple(arcs), total)


def extract_unk_spans(
    path: LinearPath,
    isyms: SymbolTable,
    osyms: SymbolTable,
    unk: Union[int, str] = "[unk]",
) -> List[List[int]]:
    """Input labels consumed under each [unk] output, in path order.

    A span starts at the arc emitting [unk] and runs up to (not including) the next arc with a
    non-epsilon output label. Epsilons and disambiguation inputs are dropped.
    """
    unk_label = osyms.find(unk) if isinstance(unk, str) else unk
    spans: List[List[int]] = []
    current: Optional[List[int]] = None
    for arc in path.arcs:
        if arc.olabel != 0:
            if current is not None:
                spans.append(current)
                current = None
            if arc.olabel == unk_label:
                current = []
        if current is not None and arc.ilabel != 0 and not isyms.is_disambiguation_id(arc.ilabel):
            current.append(arc.ilabel)
    if current is not None:
        spans.append(current)
    return spans


def spans_to_strings(spans: Iterable[Sequence[int]], isyms: SymbolTable, joiner: str = " ") -> List[str]:
    """Render spans; joiner="" over a character lexicon yields the recovered word."""
    return [joiner.join(isyms.symbol(label) for label in span) for span in spans]


def linear_chain(
    ilabels: Sequence[int],
    olabels: Optional[Sequence[int]] = None,
    weight: float = ONE,
) -> Fst:
    """String FST; olabels default to ilabels (an acceptor). Shorter side is padded with epsilon."""
    olabels = list(ilabels) if olabels is None else list(olabels)
    length = max(len(ilabels), len(olabels))
    fst = Fst()
    states = fst.add_states(length + 1)
    fst.set_start(states[0])
    for i in range(length):
        il = ilabels[i] if i < len(ilabels) else 0
        ol = olabels[i] if i < len(olabels) else 0
        fst.add_arc(states[i], Arc(il, ol, weight if i == 0 else ONE, states[i + 1]))
    fst.set_final(states[-1], weight if length == 0 else ONE)
    return fst


def relabel_inputs(fst: Fst, mapping: Dict[int, int]) -> Fst:
    result = fst.copy()
    for state in result.states():
        result.set_arcs(state, [
            Arc(mapping.get(a.ilabel, a.ilabel), a.olabel, a.weight, a.nextstate)
            for a in result.arcs(state)
        ])
    return result


def remove_disambiguation(fst: Fst, isyms: SymbolTable) -> Fst:
    """Map every '#...' input label to epsilon."""
    return relabel_inputs(fst, {label: 0 for label in isyms.disambiguation_ids()})


def input_path(fst: Fst, isyms: SymbolTable, ilabels: Sequence[int]) -> LinearPath:
    """Best path of fst restricted to one input string (disambiguation inputs read as epsilon)."""
    return shortest_path(compose(linear_chain(ilabels), remove_disambiguation(fst, isyms)))


RelationKey = Tuple[Tuple[int, ...], Tuple[int, ...]]


def weighted_relation(
    fst: Fst,
    max_input: int,
    max_output: int,
    max_arcs: int = 64,
) -> Dict[RelationKey, float]:
    """Every (input string, output string) pair within the bounds, with its best cost.

    Exhaustive depth-first enumeration; meant as an oracle on small machines.
    """
    relation: Dict[RelationKey, float] = {}
    if fst.start is None:
        return relation

    def visit(state: int, ins: Tuple[int, ...], outs: Tuple[int, ...], cost: float, depth: int) -> None:
        if fst.is_final(state):
            key = (ins, outs)
            total = cost + fst.final(state)
            if total < relation.get(key, ZERO):
                relation[key] = total
        if depth == max_arcs:
            return
        for arc in fst.arcs(state):
            n_ins = ins + (arc.ilabel,) if arc.ilabel else ins
            n_outs = outs + (arc.olabel,) if arc.olabel else outs
            if len(n_ins) <= max_input and len(n_outs) <= max_output:
                visit(arc.nextstate, n_ins, n_outs, cost + arc.weight, depth + 1)

    visit(fst.start, (), (), ONE, 0)
    return relation
