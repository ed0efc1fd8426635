"""
Purpose: Monophone single-state-HMM decoding graph (HCLG) and the in-place OOV surgery that points every [unk] arc at one shared HCL
LLM-Note:
  Dependencies: imports from [math, dataclasses, typing, config.py, fst.py, fst_ops.py, g_graph.py, lexicon.py, symbols.py, errors.py] | imported by [storage.py, cli/commands/graph_commands.py] | tested by [tests/test_hclg.py]
  Data flow: build_hclg(l, g, tm) → L's phone inputs mapped to transition-ids (disambiguation inputs to temporary labels) → compose with G → temporary labels to epsilon → connect → optional self-loop expansion → DecodingGraph | mod_hclg(dg, oov_lex, cfg) → HCL chains appended once between a new entry and exit state → each [unk] arc becomes <eps>:<eps>/(w + penalty) into the entry → exit joins the shared former [unk] destination
  State/Effects: mod_hclg copies the graph and only appends states; the dropped [unk] arcs' private self-loop states stay behind unreachable so no state is renumbered
  Integration: exposes TransitionModel, DecodingGraph, build_hclg(), mod_hclg(), read_transition_model(), write_transition_model()
  Performance: one composition; mod_hclg is linear in graph size plus the OOV lexicon
  Errors: HclgError for phones without a transition-id, mismatched word tables, context-dependent graphs, missing [unk] arcs, [unk] arcs with different destinations (needs an LM trained with limit-unk-history)
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, TextIO, Union

from .config import BiasConfig
from .errors import HclgError
from .fst import ONE, Arc, Fst
from .fst_ops import compose, connect
from .g_graph import GGraph
from .lexicon import UNK_WORD, Lexicon, LGraph
from .symbols import SymbolTable


@dataclass
class TransitionModel:
    """One forward transition-id per phone (dense from 1); loop ids follow when loops are on."""
    phone_to_tid: Dict[str, int]
    self_loop_prob: float = 1.0

    def __post_init__(self):
        tids = sorted(self.phone_to_tid.values())
        if tids != list(range(1, len(tids) + 1)):
            raise HclgError("transition-ids must be distinct and dense from 1")
        if not 0.0 <= self.self_loop_prob <= 1.0:
            raise HclgError(f"self-loop probability {self.self_loop_prob} outside [0, 1]")

    @classmethod
    def from_phones(cls, phones: Sequence[str], self_loop_prob: float = 1.0) -> "TransitionModel":
        ordered = [p for p in dict.fromkeys(phones) if p != "<eps>" and not p.startswith("#")]
        return cls({p: i for i, p in enumerate(ordered, 1)}, self_loop_prob)

    @property
    def num_phones(self) -> int:
        return len(self.phone_to_tid)

    @property
    def loops_enabled(self) -> bool:
        # p = 1.0 would be a state that never exits; treated as "no loop".
        return 0.0 < self.self_loop_prob < 1.0

    @property
    def max_tid(self) -> int:
        return self.num_phones * (2 if self.loops_enabled else 1)

    def tid(self, phone: str) -> int:
        try:
            return self.phone_to_tid[phone]
        except KeyError:
            raise HclgError(f"phone {phone} has no transition-id") from None

    def loop_tid(self, tid: int) -> int:
        return tid + self.num_phones

    def enter_cost(self) -> float:
        return -math.log1p(-self.self_loop_prob) if self.loops_enabled else ONE

    def loop_cost(self) -> float:
        return -math.log(self.self_loop_prob)

    def symbol_table(self) -> SymbolTable:
        table = SymbolTable()
        for t in range(1, self.max_tid + 1):
            table.add_symbol(str(t), t)
        return table


def read_transition_model(text: Union[str, TextIO]) -> TransitionModel:
    """'phone<TAB>tid' lines; an optional '# self_loop_prob=P' line sets the loop probability."""
    if not isinstance(text, str):
        text = text.read()
    mapping: Dict[str, int] = {}
    prob = 1.0
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if line.startswith("# self_loop_prob="):
            try:
                prob = float(line.split("=", 1)[1])
            except ValueError:
                raise HclgError(f"line {lineno}: bad self-loop probability") from None
            continue
        parts = line.split()
        if len(parts) != 2 or not parts[1].isdigit():
            raise HclgError(f"line {lineno}: expected 'phone<TAB>tid', got {line!r}")
        if parts[0] in mapping:
            raise HclgError(f"line {lineno}: duplicate phone {parts[0]}")
        mapping[parts[0]] = int(parts[1])
    return TransitionModel(mapping, prob)


def write_transition_model(tm: TransitionModel) -> str:
    lines = [f"# self_loop_prob={tm.self_loop_prob}"]
    lines += [f"{p}\t{t}" for p, t in sorted(tm.phone_to_tid.items(), key=lambda kv: kv[1])]
    return "\n".join(lines) + "\n"


@dataclass
class DecodingGraph:
    fst: Fst
    tm: TransitionModel
    word_syms: SymbolTable
    context_width: int = 1
    hcl_entries: List[Dict[str, int]] = field(default_factory=list)

    @property
    def tid_syms(self) -> SymbolTable:
        return self.tm.symbol_table()

    def copy(self) -> "DecodingGraph":
        return DecodingGraph(self.fst.copy(), self.tm, self.word_syms.copy(),
                             self.context_width, [dict(e) for e in self.hcl_entries])


def _expand_phone_arc(fst: Fst, tm: TransitionModel, arc: Arc) -> Arc:
    """Forward arc of a one-state HMM; adds the looping state when loops are on."""
    if not tm.loops_enabled:
        return arc
    mid = fst.add_state()
    fst.add_arc(mid, Arc(tm.loop_tid(arc.ilabel), 0, tm.loop_cost(), mid))
    fst.add_arc(mid, Arc(0, 0, ONE, arc.nextstate))
    return Arc(arc.ilabel, arc.olabel, arc.weight + tm.enter_cost(), mid)


def _add_self_loops(fst: Fst, tm: TransitionModel) -> Fst:
    out = fst.copy()
    forward = set(tm.phone_to_tid.values())
    for state in range(fst.num_states):
        out.set_arcs(state, [
            _expand_phone_arc(out, tm, a) if a.ilabel in forward else a
            for a in fst.arcs(state)
        ])
    return out


def build_hclg(l: LGraph, g: GGraph, tm: TransitionModel, logger=None) -> DecodingGraph:
    """compose(L over transition-ids, G) with disambiguation removed, then HMM self-loops."""
    if l.word_syms != g.word_syms:
        raise HclgError("L and G do not share a word symbol table")
    disambig_base = tm.max_tid + 1
    labels: Dict[int, int] = {0: 0}
    for phone, pid in l.phone_syms.items():
        if pid == 0:
            continue
        labels[pid] = disambig_base + pid if l.phone_syms.is_disambiguation_id(pid) else tm.tid(phone)

    hcl = Fst()
    hcl.add_states(l.fst.num_states)
    hcl.set_start(l.fst.start)
    for state in l.fst.states():
        for arc in l.fst.arcs(state):
            hcl.add_arc(state, Arc(labels[arc.ilabel], arc.olabel, arc.weight, arc.nextstate))
        if l.fst.is_final(state):
            hcl.set_final(state, l.fst.final(state))

    composed = compose(hcl, g.fst)
    for state in composed.states():
        composed.set_arcs(state, [
            Arc(0 if a.ilabel >= disambig_base else a.ilabel, a.olabel, a.weight, a.nextstate)
            for a in composed.arcs(state)
        ])
    fst = _add_self_loops(connect(composed), tm)
    if logger:
        logger.record_step("build_hclg", {"states": fst.num_states, "arcs": fst.num_arcs,
                                          "self_loops": tm.loops_enabled})
    return DecodingGraph(fst, tm, g.word_syms.copy())


def _unk_destination(dg: DecodingGraph, arc: Arc) -> int:
    """Where an [unk] arc's word ends, past the junk phone's own looping state."""
    if not dg.tm.loops_enabled or arc.ilabel == 0:
        return arc.nextstate
    exits = [a for a in dg.fst.arcs(arc.nextstate) if a.ilabel == 0 and a.nextstate != arc.nextstate]
    return exits[0].nextstate if len(exits) == 1 else arc.nextstate


def mod_hclg(
    dg: DecodingGraph,
    oov_lex: Lexicon,
    cfg: Optional[BiasConfig] = None,
    unk: str = UNK_WORD,
    logger=None,
) -> DecodingGraph:
    """Insert one HCL for the OOV lexicon and redirect every [unk] arc into it."""
    cfg = cfg or BiasConfig()
    if dg.context_width > 1:
        raise HclgError(f"graph has context width {dg.context_width}; [unk] surgery needs a "
                        "monophone graph")
    if unk not in dg.word_syms:
        raise HclgError(f"{unk} is not in the word symbol table")
    if not len(oov_lex):
        raise HclgError("empty OOV lexicon")
    unk_id = dg.word_syms.find(unk)
    sites = [(s, i, a) for s in dg.fst.states() for i, a in enumerate(dg.fst.arcs(s))
             if a.olabel == unk_id]
    if not sites:
        raise HclgError(f"graph has no {unk} arcs")
    destinations = sorted({_unk_destination(dg, a) for _, _, a in sites})
    if len(destinations) > 1:
        raise HclgError(
            f"{unk} arcs lead to {len(destinations)} different states; the LM must be "
            f"trained with limit-unk-history so {unk} only ends n-grams"
        )
    for _, pron in oov_lex:
        for phone in pron:
            dg.tm.tid(phone)

    out = dg.copy()
    fst = out.fst
    entry, exit_ = fst.add_states(2)
    fst.add_arc(exit_, Arc(0, 0, ONE, destinations[0]))
    for word, pron in oov_lex:
        word_id = out.word_syms.add_symbol(word)
        src = entry
        for i, phone in enumerate(pron):
            dst = exit_ if i == len(pron) - 1 else fst.add_state()
            arc = Arc(out.tm.tid(phone), word_id if i == 0 else 0, ONE, dst)
            fst.add_arc(src, _expand_phone_arc(fst, out.tm, arc))
            src = dst

    for state, index, arc in sites:
        fst.set_arc(state, index, Arc(0, 0, arc.weight + cfg.penalty, entry))
    out.hcl_entries.append({"entry": entry, "exit": exit_, "destination": destinations[0]})
    if logger:
        logger.record_step("mod_hclg", {"unk_arcs": len(sites), "oov_entries": len(oov_lex),
                                        "states_added": fst.num_states - dg.fst.num_states})
    return out
