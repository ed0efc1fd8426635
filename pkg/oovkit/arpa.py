"""
Purpose: ARPA backoff n-gram models - parser, direct backoff evaluator, limit-unk-history check
LLM-Note:
  Dependencies: imports from [math, dataclasses, typing, errors.py] | imported by [g_graph.py, cli/commands/lm_commands.py] | tested by [tests/test_arpa.py]
  Data flow: parse_arpa(text) → validates \\data\\ counts, section lengths, history closure → ArpaModel | ArpaModel.cost(word, history) → nats via "highest stored order, else backoff weight + lower order" | sentence_cost(words) wraps it with <s>/</s>
  State/Effects: pure; ArpaModel is treated as immutable after parsing
  Integration: exposes NGram, ArpaModel, parse_arpa(), to_cost(), check_unk_history(), BOS, EOS
  Performance: dict lookups per (history, word); recursion depth ≤ order
  Errors: ArpaError for malformed lines, count mismatches, duplicate or dangling n-grams, unknown words at scoring time
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

from .errors import ArpaError

BOS = "<s>"
EOS = "</s>"

LN10 = math.log(10.0)

Tokens = Tuple[str, ...]


def to_cost(log10: float) -> float:
    """Base-10 log probability → tropical cost in nats (no -0.0)."""
    cost = -log10 * LN10
    return 0.0 if abs(cost) < 1e-12 else cost


@dataclass(frozen=True)
class NGram:
    tokens: Tokens
    logprob: float
    backoff: Optional[float] = None


@dataclass
class ArpaModel:
    order: int
    ngrams: Dict[int, List[NGram]] = field(default_factory=dict)

    def __post_init__(self):
        self._index: Dict[Tokens, NGram] = {
            g.tokens: g for grams in self.ngrams.values() for g in grams
        }

    def get(self, tokens: Sequence[str]) -> Optional[NGram]:
        return self._index.get(tuple(tokens))

    def __contains__(self, tokens: object) -> bool:
        return tuple(tokens) in self._index  # type: ignore[arg-type]

    @property
    def vocabulary(self) -> List[str]:
        return [g.tokens[0] for g in self.ngrams.get(1, [])]

    def backoff_cost(self, history: Sequence[str]) -> float:
        gram = self._index.get(tuple(history))
        return to_cost(gram.backoff) if gram is not None and gram.backoff is not None else 0.0

    def cost(self, word: str, history: Sequence[str] = ()) -> float:
        """-ln P(word | history) by the standard backoff recursion."""
        history = tuple(history)[-(self.order - 1):] if self.order > 1 else ()
        gram = self._index.get(history + (word,))
        if gram is not None:
            return to_cost(gram.logprob)
        if not history:
            raise ArpaError(f"word {word} is not in the model")
        return self.backoff_cost(history) + self.cost(word, history[1:])

    def sentence_cost(self, words: Iterable[str]) -> float:
        """Cost of a whole sentence, including </s> when the model has it."""
        history: List[str] = [BOS] if (BOS,) in self._index else []
        total = 0.0
        for word in words:
            total += self.cost(word, history)
            history.append(word)
        if (EOS,) in self._index:
            total += self.cost(EOS, history)
        return total


def _parse_float(field: str, lineno: int) -> float:
    try:
        return float(field)
    except ValueError:
        raise ArpaError(f"line {lineno}: bad number {field!r}") from None


def parse_arpa(text: Union[str, TextIO]) -> ArpaModel:
    if not isinstance(text, str):
        text = text.read()
    counts: Dict[int, int] = {}
    ngrams: Dict[int, List[NGram]] = {}
    seen: set = set()
    section: Optional[str] = None   # None, "data" or "grams"
    current = 0
    ended = False

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if ended:
            raise ArpaError(f"line {lineno}: content after \\end\\")
        if line == "\\data\\":
            section = "data"
            continue
        if line == "\\end\\":
            ended = True
            continue
        if line.startswith("\\") and line.endswith("-grams:"):
            if section is None:
                raise ArpaError(f"line {lineno}: n-gram section before \\data\\")
            try:
                current = int(line[1:-len("-grams:")])
            except ValueError:
                raise ArpaError(f"line {lineno}: bad section header {line!r}") from None
            if current not in counts:
                raise ArpaError(f"line {lineno}: section {current}-grams not declared in header")
            ngrams.setdefault(current, [])
            section = "grams"
            continue
        if section == "data":
            if not line.startswith("ngram ") or "=" not in line:
                raise ArpaError(f"line {lineno}: expected 'ngram k=count', got {line!r}")
            k, _, n = line[len("ngram "):].partition("=")
            if not k.strip().isdigit() or not n.strip().isdigit():
                raise ArpaError(f"line {lineno}: expected 'ngram k=count', got {line!r}")
            counts[int(k)] = int(n)
            continue
        if section != "grams":
            # Free text before \data\ is allowed (toolkits write comments there).
            continue

        fields = line.split()
        if len(fields) not in (current + 1, current + 2):
            raise ArpaError(f"line {lineno}: expected {current} tokens in a {current}-gram line")
        tokens = tuple(fields[1:current + 1])
        logprob = _parse_float(fields[0], lineno)
        backoff = _parse_float(fields[-1], lineno) if len(fields) == current + 2 else None
        if tokens in seen:
            raise ArpaError(f"line {lineno}: duplicate n-gram {' '.join(tokens)}")
        seen.add(tokens)
        ngrams[current].append(NGram(tokens, logprob, backoff))

    if section is None:
        raise ArpaError("missing \\data\\ header")
    if not ended:
        raise ArpaError("missing \\end\\ marker")
    if not counts:
        raise ArpaError("\\data\\ header declares no n-grams")
    order = max(counts)
    for k in range(1, order + 1):
        found = len(ngrams.get(k, []))
        if counts.get(k, 0) != found:
            raise ArpaError(f"header declares {counts.get(k, 0)} {k}-grams, file has {found}")
    for k in range(2, order + 1):
        for gram in ngrams[k]:
            if gram.tokens[:-1] not in seen:
                raise ArpaError(f"dangling history: {' '.join(gram.tokens)} has no "
                                f"{k - 1}-gram {' '.join(gram.tokens[:-1])}")
    for gram in ngrams.get(order, []):
        if gram.backoff is not None and order > 1:
            raise ArpaError(f"highest-order n-gram {' '.join(gram.tokens)} carries a backoff weight")
    return ArpaModel(order, ngrams)


def check_unk_history(model: ArpaModel, unk: str = "[unk]") -> List[Tokens]:
    """N-grams with the unknown word inside their history (empty when the model limits it)."""
    return [
        g.tokens for k in sorted(model.ngrams) if k > 1
        for g in model.ngrams[k] if unk in g.tokens[:-1]
    ]
