"""
Purpose: Byte-pair-encoding merge training and subword tokenization of OOV words
LLM-Note:
  Dependencies: imports from [collections, dataclasses, typing, errors.py, lexicon.py] | imported by [g_graph.py (mod_g_subwords), cli/commands/bpe_commands.py] | tested by [tests/test_bpe.py]
  Data flow: read_corpus(text) → Counter of words | train_bpe(corpus, num_merges) → greedy most-frequent-pair merges over words spelled as characters plus a final "</w>" symbol → BpeModel | tokenize(model, word) → repeatedly merge the best-ranked adjacent pair → tokens, the last one carrying the marker | detokenize(tokens) → original words
  State/Effects: pure; BpeModel is frozen
  Integration: exposes BpeModel, train_bpe(), tokenize(), detokenize(), read_bpe(), write_bpe(), read_corpus(), subword_lexicon(), DEFAULT_MARKER
  Performance: training recounts pairs per merge, O(merges · corpus symbols) | tokenization O(len(word)²) per word
  Errors: BpeError for a missing/mismatched model header, malformed merge lines, duplicate merges, words containing whitespace or the marker
"""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, TextIO, Tuple, Union

from .errors import BpeError
from .lexicon import Lexicon

DEFAULT_MARKER = "</w>"
HEADER_PREFIX = "#oovkit-bpe"

Pair = Tuple[str, str]


@dataclass(frozen=True)
class BpeModel:
    merges: Tuple[Pair, ...]
    marker: str = DEFAULT_MARKER

    def __post_init__(self):
        object.__setattr__(self, "merges", tuple(tuple(m) for m in self.merges))
        if len(set(self.merges)) != len(self.merges):
            dup = next(m for m, n in Counter(self.merges).items() if n > 1)
            raise BpeError(f"duplicate merge {dup[0]} {dup[1]}")

    @property
    def ranks(self) -> Dict[Pair, int]:
        return {pair: i for i, pair in enumerate(self.merges)}

    def vocabulary(self) -> List[str]:
        """Symbols created by merges, in merge order."""
        return [left + right for left, right in self.merges]

    def truncated(self, num_merges: int) -> "BpeModel":
        return BpeModel(self.merges[:num_merges], self.marker)


def _spell(word: str, marker: str) -> Tuple[str, ...]:
    if not word:
        raise BpeError("cannot tokenize an empty word")
    if marker in word or any(c.isspace() for c in word):
        raise BpeError(f"word {word!r} contains whitespace or the marker {marker}")
    return tuple(word) + (marker,)


def _merge(symbols: Tuple[str, ...], pair: Pair) -> Tuple[str, ...]:
    out: List[str] = []
    i = 0
    while i < len(symbols):
        if i + 1 < len(symbols) and (symbols[i], symbols[i + 1]) == pair:
            out.append(symbols[i] + symbols[i + 1])
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return tuple(out)


def train_bpe(corpus: Mapping[str, int], num_merges: int, marker: str = DEFAULT_MARKER) -> BpeModel:
    """Greedy BPE: merge the most frequent adjacent pair until num_merges or no pair occurs twice.

    Equal counts go to the lexicographically smallest (left, right).
    """
    if num_merges < 0:
        raise BpeError(f"num_merges must be >= 0, got {num_merges}")
    if not corpus:
        raise BpeError("empty training corpus")
    words: Dict[Tuple[str, ...], int] = Counter()
    for word, count in corpus.items():
        if count > 0:
            words[_spell(word, marker)] += count

    merges: List[Pair] = []
    while len(merges) < num_merges:
        pairs: Counter = Counter()
        for symbols, count in words.items():
            for pair in zip(symbols, symbols[1:]):
                pairs[pair] += count
        if not pairs:
            break
        best = min(pairs, key=lambda p: (-pairs[p], p))
        if pairs[best] < 2:
            break
        merges.append(best)
        merged: Dict[Tuple[str, ...], int] = Counter()
        for symbols, count in words.items():
            merged[_merge(symbols, best)] += count
        words = merged
    return BpeModel(tuple(merges), marker)


def tokenize(model: BpeModel, word: str) -> List[str]:
    """Subword tokens of one word; the last token ends with the marker."""
    symbols = _spell(word, model.marker)
    ranks = model.ranks
    while len(symbols) > 1:
        candidates = [p for p in zip(symbols, symbols[1:]) if p in ranks]
        if not candidates:
            break
        symbols = _merge(symbols, min(candidates, key=ranks.__getitem__))
    tokens = list(symbols)
    if len(tokens) > 1 and tokens[-1] == model.marker:
        tokens[-2:] = [tokens[-2] + model.marker]
    return tokens


def detokenize(tokens: Iterable[str], marker: str = DEFAULT_MARKER) -> str:
    """Join subword tokens back into space-separated words."""
    words: List[str] = []
    current = ""
    for token in tokens:
        if token.endswith(marker):
            words.append(current + token[:-len(marker)])
            current = ""
        else:
            current += token
    if current:
        words.append(current)
    return " ".join(words)


def write_bpe(model: BpeModel) -> str:
    lines = [f"{HEADER_PREFIX} suffix {model.marker}"]
    lines += [f"{left} {right}" for left, right in model.merges]
    return "\n".join(lines) + "\n"


def read_bpe(text: Union[str, TextIO], marker: Optional[str] = None) -> BpeModel:
    """Parse a merge file; marker, when given, must match the one in the header."""
    if not isinstance(text, str):
        text = text.read()
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith(HEADER_PREFIX):
        raise BpeError(f"missing '{HEADER_PREFIX} suffix <marker>' header")
    header = lines[0].split()
    if len(header) != 3 or header[1] != "suffix":
        raise BpeError(f"unsupported BPE header {lines[0]!r}")
    if marker is not None and header[2] != marker:
        raise BpeError(f"model uses boundary marker {header[2]}, expected {marker}")
    merges: List[Pair] = []
    for lineno, line in enumerate(lines[1:], 2):
        parts = line.split()
        if len(parts) != 2:
            raise BpeError(f"line {lineno}: expected 'left right', got {line!r}")
        merges.append((parts[0], parts[1]))
    return BpeModel(tuple(merges), header[2])


def read_corpus(text: Union[str, TextIO]) -> Counter:
    """Word counts from plain text or 'word<TAB>count' lines."""
    if not isinstance(text, str):
        text = text.read()
    counts: Counter = Counter()
    for line in text.splitlines():
        fields = line.split("\t")
        if len(fields) == 2 and fields[1].strip().isdigit() and fields[0].strip():
            counts[fields[0].strip()] += int(fields[1])
        else:
            counts.update(line.split())
    return counts


def subword_lexicon(tokens: Iterable[str], marker: str = DEFAULT_MARKER) -> Lexicon:
    """Character-based lexicon for subword tokens: 'fox</w>' is pronounced f o x."""
    lex = Lexicon()
    for token in dict.fromkeys(tokens):
        spelling = token[:-len(marker)] if token.endswith(marker) else token
        if spelling:
            lex.add(token, tuple(spelling))
    return lex
