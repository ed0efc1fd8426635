"""
Purpose: Grammar FST (G) from an ARPA model, with a state↔history map, plus the two G-level biasing surgeries
LLM-Note:
  Dependencies: imports from [dataclasses, typing, pydantic, arpa.py, bpe.py, config.py, fst.py, fst_ops.py, lexicon.py, symbols.py, errors.py] | imported by [hclg.py, storage.py, cli/commands/lm_commands.py] | tested by [tests/test_g_graph.py]
  Data flow: arpa_to_g(model, syms) → one state per stored history (backoff state 0 = empty history), word arcs to the longest stored suffix, "#0" backoff arcs, </s> costs as final weights → GGraph | replace_unk_in_g(g, words, cfg) → every [unk] arc fanned out to one arc per OOV word G does not already know, at +penalty | mod_g_subwords(g, words, bpe, cfg) → walk each word's subwords from the backoff state, discount existing arcs, add cheap arcs and states where missing → (GGraph, SubwordBiasReport) | mod_lg(l, g, lex, cfg) → add_words_to_l + replace_unk_in_g over one word table
  State/Effects: surgeries copy the graph first; the history maps are updated together with the FST | existing state ids never change
  Integration: exposes GGraph, arpa_to_g(), replace_unk_in_g(), tokenized_sequence_state_walk(), mod_g_subwords(), mod_lg(), WordBias, SubwordBiasReport
  Performance: arpa_to_g is linear in the number of n-grams | sentence_cost composes with a linear acceptor, fine for tests and CLI checks
  Errors: ArpaError for tokens missing from a supplied word table | GraphSurgeryError for missing [unk] arcs, empty OOV lists, subwords without a unigram state, mismatched L/G word tables
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel

from .arpa import BOS, EOS, ArpaModel, to_cost
from .bpe import BpeModel, tokenize
from .config import BiasConfig
from .errors import ArpaError, BpeError, GraphSurgeryError
from .fst import ONE, Arc, Fst
from .fst_ops import input_path
from .lexicon import BACKOFF_SYMBOL, UNK_WORD, Lexicon, LGraph, add_words_to_l
from .symbols import SymbolTable

History = Tuple[str, ...]


@dataclass
class GGraph:
    fst: Fst
    word_syms: SymbolTable
    history_of: Dict[int, History] = field(default_factory=dict)
    state_of: Dict[History, int] = field(default_factory=dict)
    backoff_state: int = 0

    @property
    def backoff_label(self) -> int:
        return self.word_syms.find(BACKOFF_SYMBOL)

    def unigram_state(self, word: str) -> Optional[int]:
        return self.state_of.get((word,))

    def add_history_state(self, history: History) -> int:
        state = self.fst.add_state()
        self.history_of[state] = history
        self.state_of[history] = state
        return state

    def sentence_cost(self, words: Sequence[str]) -> float:
        """Cost of a word sequence through the FST (backoff arcs read as epsilon)."""
        labels = [self.word_syms.find(w) for w in words]
        return input_path(self.fst, self.word_syms, labels).total_weight

    def copy(self) -> "GGraph":
        return GGraph(self.fst.copy(), self.word_syms.copy(), dict(self.history_of),
                      dict(self.state_of), self.backoff_state)


def _longest_stored_suffix(tokens: History, state_of: Dict[History, int]) -> int:
    for i in range(len(tokens) + 1):
        state = state_of.get(tokens[i:])
        if state is not None:
            return state
    raise AssertionError("empty history must always be a state")


def arpa_to_g(model: ArpaModel, syms: Optional[SymbolTable] = None, logger=None) -> GGraph:
    """Backoff G: states are stored histories, missing n-grams resolved through '#0' arcs."""
    vocab = [w for w in model.vocabulary if w not in (BOS, EOS)]
    if syms is None:
        word_syms = SymbolTable(sorted(vocab))
    else:
        word_syms = syms.copy()
        for word in vocab:
            if word not in word_syms:
                raise ArpaError(f"token {word} is not in the word symbol table")
    word_syms.add_symbol(BACKOFF_SYMBOL)

    histories = [g.tokens for k in sorted(model.ngrams) if k < model.order
                 for g in model.ngrams[k] if g.tokens[-1] != EOS]
    fst = Fst()
    g = GGraph(fst, word_syms)
    g.backoff_state = g.add_history_state(())
    for history in sorted(histories, key=lambda h: (len(h), h)):
        g.add_history_state(history)

    has_eos = (EOS,) in model
    for k in sorted(model.ngrams):
        for gram in sorted(model.ngrams[k], key=lambda x: x.tokens):
            history, word = gram.tokens[:-1], gram.tokens[-1]
            if word == BOS:
                continue
            src = g.state_of.get(history)
            if src is None:
                if logger:
                    logger.warning(f"n-gram {' '.join(gram.tokens)} has no history state, skipped")
                continue
            cost = to_cost(gram.logprob)
            if word == EOS:
                fst.set_final(src, cost)
            else:
                label = word_syms.find(word)
                dst = _longest_stored_suffix(gram.tokens[-(model.order - 1):] if model.order > 1 else (),
                                             g.state_of)
                fst.add_arc(src, Arc(label, label, cost, dst))
            if logger and history:
                try:
                    alternative = model.backoff_cost(history) + model.cost(word, history[1:])
                except ArpaError:
                    continue
                if cost > alternative + 1e-9:
                    logger.warning(
                        f"n-gram {' '.join(gram.tokens)} costs {cost:.6f} but its backoff "
                        f"route costs {alternative:.6f}; G will prefer the backoff"
                    )

    backoff_label = word_syms.find(BACKOFF_SYMBOL)
    for state in fst.states():
        history = g.history_of[state]
        if history:
            dst = _longest_stored_suffix(history[1:], g.state_of)
            fst.add_arc(state, Arc(backoff_label, 0, model.backoff_cost(history), dst))
        if not has_eos:
            fst.set_final(state)

    fst.set_start(g.state_of.get((BOS,), g.backoff_state))
    if logger:
        logger.record_step("arpa_to_g", {"order": model.order, "states": fst.num_states,
                                         "arcs": fst.num_arcs})
    return g


def replace_unk_in_g(
    g: GGraph,
    oov_words: Sequence[str],
    cfg: Optional[BiasConfig] = None,
    unk: str = UNK_WORD,
    logger=None,
) -> GGraph:
    """Fan every [unk] arc out into one arc per OOV word, same endpoints, weight + penalty.

    Words G already knows keep their own arcs and are skipped.
    """
    cfg = cfg or BiasConfig()
    words = list(dict.fromkeys(oov_words))
    if not words:
        raise GraphSurgeryError("no OOV words to add")
    if unk not in g.word_syms:
        raise GraphSurgeryError(f"{unk} is not in the word symbol table")
    known = [w for w in words if w in g.word_syms]
    if known:
        if logger:
            logger.warning(f"skipping {len(known)} word(s) already in G: {' '.join(known)}")
        words = [w for w in words if w not in g.word_syms]
    if not words:
        raise GraphSurgeryError("every OOV word is already in G")
    out = g.copy()
    unk_id = out.word_syms.find(unk)
    labels = [out.word_syms.add_symbol(w) for w in words]

    replaced = 0
    for state in out.fst.states():
        arcs = out.fst.arcs(state)
        if not any(a.olabel == unk_id for a in arcs):
            continue
        new_arcs: List[Arc] = []
        for arc in arcs:
            if arc.olabel == unk_id:
                replaced += 1
                new_arcs.extend(Arc(lab, lab, arc.weight + cfg.penalty, arc.nextstate)
                                for lab in labels)
            else:
                new_arcs.append(arc)
        out.fst.set_arcs(state, new_arcs)
    if not replaced:
        raise GraphSurgeryError(f"G has no {unk} arcs to replace")
    return out


def _explicit_arc(g: GGraph, state: int, label: int) -> Optional[Tuple[int, Arc]]:
    """Cheapest non-backoff arc for label (first one on ties)."""
    best: Optional[Tuple[int, Arc]] = None
    for i, arc in enumerate(g.fst.arcs(state)):
        if arc.ilabel == label and (best is None or arc.weight < best[1].weight):
            best = (i, arc)
    return best


def tokenized_sequence_state_walk(g: GGraph, subwords: Sequence[int]) -> Tuple[List[int], bool]:
    """Follow explicit arcs from the backoff state; backoff arcs are never taken."""
    states = [g.backoff_state]
    for label in subwords:
        found = _explicit_arc(g, states[-1], label)
        if found is None:
            return states, False
        states.append(found[1].nextstate)
    return states, True


class WordBias(BaseModel):
    word: str
    tokens: List[str]
    existed_fully: bool
    discounted_arcs: int = 0
    added_arcs: int = 0
    new_states: List[int] = []


class SubwordBiasReport(BaseModel):
    words: List[WordBias] = []
    skipped: List[str] = []


def mod_g_subwords(
    g: GGraph,
    oov_words: Sequence[str],
    bpe: BpeModel,
    cfg: Optional[BiasConfig] = None,
    logger=None,
) -> Tuple[GGraph, SubwordBiasReport]:
    """Boost each OOV word's subword path, starting from the backoff state.

    Existing arcs lose cfg.discount (not below 0), missing arcs are added at cfg.boost_cost,
    and the last subword always lands in its own unigram state. New states back off to the
    unigram state of the subword that led into them.
    """
    cfg = cfg or BiasConfig()
    out = g.copy()
    fst = out.fst
    backoff_label = out.backoff_label
    report = SubwordBiasReport()
    discounted: set = set()

    def discount(state: int, index: int, arc: Arc) -> Tuple[Arc, bool]:
        """Lower the arc once; the flag says whether its weight changed."""
        if (state, index) in discounted or arc.weight <= 0:
            return arc, False
        discounted.add((state, index))
        new_arc = Arc(arc.ilabel, arc.olabel, max(arc.weight - cfg.discount, 0.0), arc.nextstate)
        if new_arc.weight == arc.weight:
            return arc, False
        fst.set_arc(state, index, new_arc)
        return new_arc, True

    for word in dict.fromkeys(oov_words):
        try:
            tokens = tokenize(bpe, word)
        except BpeError as e:
            report.skipped.append(word)
            if logger:
                logger.warning(f"skipping {word}: {e}")
            continue
        missing = [t for t in tokens if t not in out.word_syms]
        if missing:
            report.skipped.append(word)
            if logger:
                logger.warning(f"skipping {word}: subword(s) {' '.join(missing)} not in G")
            continue
        for token in tokens:
            if out.unigram_state(token) is None:
                raise GraphSurgeryError(f"subword {token} has no unigram state in G")

        labels = [out.word_syms.find(t) for t in tokens]
        _, existed = tokenized_sequence_state_walk(out, labels)
        entry = WordBias(word=word, tokens=tokens, existed_fully=existed)

        cur = out.backoff_state
        for i, (token, label) in enumerate(zip(tokens, labels)):
            last = i == len(tokens) - 1
            found = _explicit_arc(out, cur, label)
            if last:
                target = out.unigram_state(token)
                if found is None:
                    fst.add_arc(cur, Arc(label, label, cfg.boost_cost, target))
                    entry.added_arcs += 1
                else:
                    arc, changed = discount(cur, found[0], found[1])
                    if changed:
                        entry.discounted_arcs += 1
                    if arc.nextstate != target:
                        fst.add_arc(cur, Arc(label, label, min(cfg.boost_cost, arc.weight), target))
                        entry.added_arcs += 1
                break
            if found is not None:
                arc, changed = discount(cur, found[0], found[1])
                if changed:
                    entry.discounted_arcs += 1
                cur = arc.nextstate
                continue
            history = out.history_of[cur] + (token,)
            dst = out.state_of.get(history)
            if dst is None:
                dst = out.add_history_state(history)
                fst.add_arc(dst, Arc(backoff_label, 0, ONE, out.unigram_state(token)))
                entry.new_states.append(dst)
            fst.add_arc(cur, Arc(label, label, cfg.boost_cost, dst))
            entry.added_arcs += 1
            cur = dst
        report.words.append(entry)

    if logger:
        logger.record_step("mod_g_subwords", {
            "words": len(report.words),
            "skipped": len(report.skipped),
            "added_arcs": sum(w.added_arcs for w in report.words),
            "discounted_arcs": sum(w.discounted_arcs for w in report.words),
            "new_states": sum(len(w.new_states) for w in report.words),
        })
    return out, report


def mod_lg(
    l: LGraph,
    g: GGraph,
    oov_lex: Lexicon,
    cfg: Optional[BiasConfig] = None,
    unk: str = UNK_WORD,
    logger=None,
) -> Tuple[LGraph, GGraph]:
    """Word-level OOV insertion: new pronunciations in L, [unk] arcs fanned out in G."""
    if l.word_syms != g.word_syms:
        raise GraphSurgeryError("L and G do not share a word symbol table")
    new_l = add_words_to_l(l, oov_lex, logger=logger)
    new_g = replace_unk_in_g(g, oov_lex.words(), cfg, unk=unk, logger=logger)
    # Both sides intern the same words in the same order.
    for word in oov_lex.words():
        if new_l.word_syms.find(word) != new_g.word_syms.find(word):
            raise GraphSurgeryError(f"word {word} got different ids in L and G")
    new_g.word_syms = new_l.word_syms.copy()
    if logger:
        logger.record_step("mod_lg", {"oov_words": len(oov_lex.words()),
                                      "l_states": new_l.fst.num_states,
                                      "g_arcs": new_g.fst.num_arcs})
    return new_l, new_g
