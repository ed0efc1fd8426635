"""
Purpose: Pronunciation lexicons and the L transducer (phones → words) with disambiguation, OOV insertion and phone-LM splicing
LLM-Note:
  Dependencies: imports from [collections, dataclasses, typing, fst.py, symbols.py, errors.py, logger.py] | imported by [g_graph.py (mod_lg), hclg.py, storage.py, cli/commands/graph_commands.py] | tested by [tests/test_lexicon.py]
  Data flow: parse_lexicon(text) → Lexicon | build_l(lex, add_unk, junk_phone) → LGraph (start 0 final, pron-end 1, one chain per pronunciation, word on the first arc, "#k" appended to conflicting pronunciations) | add_words_to_l(l, oov_lex) → copy with new chains and re-balanced "#k" | splice_unk_lm(l, p, junk_phone=...) → copy with the junk_phone:[unk] chain replaced by P between two fresh "#k" connectors
  State/Effects: never mutates the LGraph passed in (copies fst and tables) | state ids of the input graph are preserved
  Integration: exposes Lexicon, Chain, LGraph, parse_lexicon(), write_lexicon(), char_lexicon(), build_l(), add_words_to_l(), splice_unk_lm(), UNK_WORD, JUNK_PHONE
  Performance: linear in lexicon size, prefix check via a set of all proper prefixes
  Errors: LexiconError for blank/duplicate entries, unknown phones, a missing junk-phone chain, P reading "#k" or the junk phone | SymbolError for P labels outside the phone table
"""

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple, Union, TextIO

from .errors import LexiconError
from .fst import ONE, Arc, Fst
from .symbols import SymbolTable, is_disambiguation

UNK_WORD = "[unk]"
JUNK_PHONE = "jnk"
BACKOFF_SYMBOL = "#0"

Pron = Tuple[str, ...]
Entry = Tuple[str, Pron]


class Lexicon:
    """Ordered (word, pronunciation) entries; duplicate pairs are rejected."""

    def __init__(self, entries: Iterable[Tuple[str, Iterable[str]]] = ()):
        self.entries: List[Entry] = []
        self._seen: Set[Entry] = set()
        for word, pron in entries:
            self.add(word, pron)

    def add(self, word: str, pron: Iterable[str]) -> None:
        pron = tuple(pron)
        if not pron:
            raise LexiconError(f"blank pronunciation for {word}")
        if (word, pron) in self._seen:
            raise LexiconError(f"duplicate entry {word} {' '.join(pron)}")
        self._seen.add((word, pron))
        self.entries.append((word, pron))

    def words(self) -> List[str]:
        """Distinct words in first-seen order."""
        return list(dict.fromkeys(word for word, _ in self.entries))

    def phones(self) -> List[str]:
        return sorted({p for _, pron in self.entries for p in pron})

    def __contains__(self, entry: object) -> bool:
        return entry in self._seen

    def __iter__(self) -> Iterator[Entry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def parse_lexicon(text: Union[str, TextIO]) -> Lexicon:
    """Read 'word p1 p2 ...' lines (whitespace separated)."""
    if not isinstance(text, str):
        text = text.read()
    lex = Lexicon()
    for lineno, line in enumerate(text.splitlines(), 1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) == 1:
            raise LexiconError(f"line {lineno}: blank pronunciation for {fields[0]}")
        lex.add(fields[0], fields[1:])
    return lex


def write_lexicon(lex: Lexicon) -> str:
    return "".join(f"{word} {' '.join(pron)}\n" for word, pron in lex)


def char_lexicon(words: Iterable[str]) -> Lexicon:
    """Character-based lexicon: each word is pronounced as its letters."""
    return Lexicon((w, tuple(w)) for w in dict.fromkeys(words))


@dataclass
class Chain:
    """Where a pronunciation chain ends: the last phone arc and its optional '#k'."""
    word: str
    pron: Pron
    last_src: int
    last_arc: Arc
    disambig: Optional[int] = None


@dataclass
class LGraph:
    fst: Fst
    phone_syms: SymbolTable
    word_syms: SymbolTable
    pron_end_state: int = 1
    start_state: int = 0
    chains: Dict[Entry, Chain] = field(default_factory=dict)
    unk_lm: Optional[Dict[str, object]] = None

    def entries(self) -> Lexicon:
        return Lexicon((w, p) for (w, p) in self.chains)

    def copy(self) -> "LGraph":
        return LGraph(
            fst=self.fst.copy(),
            phone_syms=self.phone_syms.copy(),
            word_syms=self.word_syms.copy(),
            pron_end_state=self.pron_end_state,
            start_state=self.start_state,
            chains={k: Chain(c.word, c.pron, c.last_src, c.last_arc, c.disambig)
                    for k, c in self.chains.items()},
            unk_lm=dict(self.unk_lm) if self.unk_lm else None,
        )


def _proper_prefixes(prons: Iterable[Pron]) -> Set[Pron]:
    return {pron[:i] for pron in prons for i in range(1, len(pron))}


def _needs_disambig(prons: Iterable[Pron]) -> Set[Pron]:
    """Pronunciations shared by 2+ words or that are a proper prefix of another one."""
    prons = list(prons)
    counts = Counter(prons)
    prefixes = _proper_prefixes(counts)
    return {p for p, n in counts.items() if n > 1 or p in prefixes}


def _add_chain(l: LGraph, word: str, pron: Pron, disambig: Optional[int]) -> None:
    fst = l.fst
    word_id = l.word_syms.find(word)
    src = l.start_state
    for i, phone in enumerate(pron):
        last = i == len(pron) - 1
        dst = l.pron_end_state if last and disambig is None else fst.add_state()
        arc = Arc(l.phone_syms.find(phone), word_id if i == 0 else 0, ONE, dst)
        fst.add_arc(src, arc)
        if last:
            l.chains[(word, pron)] = Chain(word, pron, src, arc, disambig)
        src = dst
    if disambig is not None:
        k = l.phone_syms.add_symbol(f"#{disambig}")
        fst.add_arc(src, Arc(k, 0, ONE, l.pron_end_state))


def _retarget(l: LGraph, chain: Chain, disambig: int) -> None:
    """Give an existing chain a '#k': its last arc now ends in a fresh state followed by '#k'."""
    fst = l.fst
    arcs = fst.arcs(chain.last_src)
    index = arcs.index(chain.last_arc)
    mid = fst.add_state()
    new_arc = Arc(chain.last_arc.ilabel, chain.last_arc.olabel, chain.last_arc.weight, mid)
    fst.set_arc(chain.last_src, index, new_arc)
    k = l.phone_syms.add_symbol(f"#{disambig}")
    fst.add_arc(mid, Arc(k, 0, ONE, l.pron_end_state))
    chain.last_arc = new_arc
    chain.disambig = disambig


def build_l(
    lex: Lexicon,
    add_unk: bool = True,
    word_syms: Optional[SymbolTable] = None,
    junk_phone: str = JUNK_PHONE,
) -> LGraph:
    """Closure lexicon transducer.

    State 0 is the start (final) state, state 1 the shared pronunciation end with an
    epsilon arc back to 0. A '#0:#0' loop on the start state lets G's backoff symbol
    through composition. The junk phone sorts after the real phones.
    """
    if not len(lex):
        raise LexiconError("cannot build L from an empty lexicon")
    entries = list(lex)
    if is_disambiguation(junk_phone):
        raise LexiconError(f"junk phone {junk_phone} looks like a disambiguation symbol")
    if add_unk and (UNK_WORD, (junk_phone,)) not in lex:
        entries.append((UNK_WORD, (junk_phone,)))

    phones = sorted({p for _, pron in entries for p in pron if p != junk_phone})
    phone_syms = SymbolTable(phones)
    if any(p == junk_phone for _, pron in entries for p in pron):
        phone_syms.add_symbol(junk_phone)
    phone_syms.add_symbol(BACKOFF_SYMBOL)

    words = word_syms.copy() if word_syms is not None else SymbolTable()
    for word in sorted({w for w, _ in entries}):
        words.add_symbol(word)
    words.add_symbol(BACKOFF_SYMBOL)

    fst = Fst()
    start, pron_end = fst.add_states(2)
    fst.set_start(start)
    fst.set_final(start)
    fst.add_arc(pron_end, Arc(0, 0, ONE, start))
    fst.add_arc(start, Arc(phone_syms.find(BACKOFF_SYMBOL), words.find(BACKOFF_SYMBOL), ONE, start))

    l = LGraph(fst, phone_syms, words, pron_end_state=pron_end, start_state=start)

    # Kaldi-style numbering: #1..#n per pronunciation, words in sorted order.
    conflicted = _needs_disambig(p for _, p in entries)
    numbers: Dict[Entry, int] = {}
    groups: Dict[Pron, List[str]] = defaultdict(list)
    for word, pron in entries:
        if pron in conflicted:
            groups[pron].append(word)
    for pron in sorted(groups):
        for k, word in enumerate(sorted(groups[pron]), 1):
            numbers[(word, pron)] = k
    for k in sorted(set(numbers.values())):
        phone_syms.add_symbol(f"#{k}")

    for word, pron in entries:
        _add_chain(l, word, pron, numbers.get((word, pron)))
    return l


def add_words_to_l(l: LGraph, oov_lex: Lexicon, logger=None) -> LGraph:
    """Add chains for new words; existing '#k' assignments are kept."""
    for word, pron in oov_lex:
        for phone in pron:
            if phone not in l.phone_syms or is_disambiguation(phone):
                raise LexiconError(f"unknown phone {phone} in {word}")

    out = l.copy()
    new: List[Entry] = []
    for entry in oov_lex:
        if entry in out.chains:
            if logger:
                logger.info(f"skipping {entry[0]} {' '.join(entry[1])}: already in L")
            continue
        new.append(entry)
    if not new:
        return out

    for word, _ in new:
        out.word_syms.add_symbol(word)

    all_prons = [p for _, p in out.chains] + [p for _, p in new]
    conflicted = _needs_disambig(all_prons)
    numbers: Dict[Entry, int] = {}
    for pron in sorted(conflicted):
        members = [c for c in out.chains.values() if c.pron == pron]
        used = {c.disambig for c in members if c.disambig is not None}
        pending = sorted(
            [(c.word, c) for c in members if c.disambig is None]
            + [(w, None) for w, p in new if p == pron],
            key=lambda item: item[0],
        )
        k = 1
        for word, chain in pending:
            while k in used:
                k += 1
            used.add(k)
            if chain is not None:
                _retarget(out, chain, k)
                if logger:
                    logger.debug(f"{word} {' '.join(pron)} now ends in #{k}")
            else:
                numbers[(word, pron)] = k

    for word, pron in new:
        _add_chain(out, word, pron, numbers.get((word, pron)))
    if logger:
        logger.info(f"added {len(new)} pronunciation(s) to L")
    return out


def splice_unk_lm(
    l: LGraph,
    p: Fst,
    p_syms: Optional[SymbolTable] = None,
    junk_phone: str = JUNK_PHONE,
) -> LGraph:
    """Replace the junk_phone:[unk] chain with the phone LM P.

    start --#k_in:[unk]--> P.start ... P.final --#k_out:<eps>/final weight--> pron end.
    P's labels are L phone ids unless p_syms is given, in which case they are mapped by name.
    P may not read '#k' symbols or the junk phone.
    """
    junk = (UNK_WORD, (junk_phone,))
    if junk not in l.chains:
        raise LexiconError(f"L has no {junk_phone}:{UNK_WORD} arc to replace")
    if p.start is None:
        raise LexiconError("unk LM has no start state")

    def phone_label(label: int) -> int:
        if label == 0:
            return 0
        name = p_syms.symbol(label) if p_syms is not None else l.phone_syms.symbol(label)
        if name not in l.phone_syms:
            raise LexiconError(f"unknown phone {name} in unk LM")
        if is_disambiguation(name) or name == junk_phone:
            raise LexiconError(f"unk LM may not read {name}")
        return l.phone_syms.find(name)

    # Validate before touching anything.
    mapped = {
        (s, i): phone_label(arc.ilabel)
        for s in p.states() for i, arc in enumerate(p.arcs(s))
    }

    out = l.copy()
    fst = out.fst
    junk_id = out.phone_syms.find(junk_phone)
    unk_id = out.word_syms.find(UNK_WORD)
    start = out.start_state
    fst.set_arcs(start, [a for a in fst.arcs(start)
                         if not (a.ilabel == junk_id and a.olabel == unk_id)])
    del out.chains[junk]

    offset = fst.num_states
    fst.add_states(p.num_states)
    for s in p.states():
        for i, arc in enumerate(p.arcs(s)):
            fst.add_arc(offset + s, Arc(mapped[(s, i)], 0, arc.weight, offset + arc.nextstate))

    entry_sym = out.phone_syms.next_disambiguation()
    entry_id = out.phone_syms.add_symbol(entry_sym)
    exit_sym = out.phone_syms.next_disambiguation()
    exit_id = out.phone_syms.add_symbol(exit_sym)
    fst.add_arc(start, Arc(entry_id, unk_id, ONE, offset + p.start))
    for state, weight in sorted(p.finals.items()):
        fst.add_arc(offset + state, Arc(exit_id, 0, weight, out.pron_end_state))

    out.unk_lm = {
        "entry_symbol": entry_sym,
        "exit_symbol": exit_sym,
        "first_state": offset,
        "num_states": p.num_states,
    }
    return out
