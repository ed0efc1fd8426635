"""
Purpose: High-OOV test/train split of an utterance manifest with speaker-disjoint training data
LLM-Note:
  Dependencies: imports from [string, collections, dataclasses, typing, pydantic, errors.py] | imported by [cli/commands/split_commands.py] | tested by [tests/test_dataset_split.py]
  Data flow: read_manifest(tsv) + read_vocabulary(txt) → make_split() sorts by id → test = utterances with a word outside the vocabulary → train = the rest minus test speakers → excluded = the speaker-overlap remainder → SplitResult with SplitStats | oov_report(split) → OOV distribution lines then labelled statistics
  State/Effects: pure
  Integration: exposes Utterance, SplitStats, SplitResult, normalize_text(), read_manifest(), write_manifest(), read_vocabulary(), make_split(), oov_report()
  Performance: one pass over the manifest
  Errors: SplitError for malformed manifest lines, duplicate ids, bad durations, empty manifest or vocabulary
"""

import string
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, TextIO, Tuple, Union

from pydantic import BaseModel

from .errors import SplitError

_PUNCTUATION = string.punctuation + "„“”‘’«»¿¡…–—"


def normalize_text(text: str) -> List[str]:
    """Lowercase, strip punctuation at both ends of each token, drop empty tokens."""
    tokens = (tok.strip(_PUNCTUATION) for tok in text.lower().split())
    return [tok for tok in tokens if tok]


@dataclass(frozen=True)
class Utterance:
    id: str
    speaker: str
    text: Tuple[str, ...]
    duration: Optional[float] = None


def read_manifest(text: Union[str, TextIO], normalize: bool = False) -> List[Utterance]:
    """'utt_id<TAB>speaker<TAB>duration<TAB>transcript' lines; duration may be empty."""
    if not isinstance(text, str):
        text = text.read()
    utts: List[Utterance] = []
    seen: Set[str] = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split("\t", 3)
        if len(fields) != 4:
            raise SplitError(f"line {lineno}: expected 4 tab-separated fields, got {len(fields)}")
        utt_id, speaker, duration, transcript = (f.strip() for f in fields)
        if not utt_id or not speaker:
            raise SplitError(f"line {lineno}: empty utterance or speaker id")
        if utt_id in seen:
            raise SplitError(f"line {lineno}: duplicate utterance id {utt_id}")
        seen.add(utt_id)
        try:
            seconds = float(duration) if duration else None
        except ValueError:
            raise SplitError(f"line {lineno}: bad duration {duration!r}") from None
        words = normalize_text(transcript) if normalize else transcript.split()
        utts.append(Utterance(utt_id, speaker, tuple(words), seconds))
    return utts


def write_manifest(utts: Iterable[Utterance]) -> str:
    lines = []
    for u in utts:
        duration = "" if u.duration is None else f"{u.duration:g}"
        lines.append(f"{u.id}\t{u.speaker}\t{duration}\t{' '.join(u.text)}")
    return "".join(line + "\n" for line in lines)


def read_vocabulary(text: Union[str, TextIO]) -> Set[str]:
    """First column of every line, so a lexicon file works as a vocabulary too."""
    if not isinstance(text, str):
        text = text.read()
    return {line.split()[0] for line in text.splitlines() if line.strip()}


class SplitStats(BaseModel):
    test_utterances: int
    train_utterances: int
    excluded_utterances: int
    test_speakers: int
    train_speakers: int
    test_tokens: int
    oov_tokens: int
    oov_token_ratio: Optional[float] = None
    test_types: int
    oov_types: int
    oov_type_ratio: Optional[float] = None
    test_hours: Optional[float] = None
    train_hours: Optional[float] = None


@dataclass
class SplitResult:
    train: List[Utterance]
    test: List[Utterance]
    excluded: List[Utterance]
    oov_types: Dict[str, int]
    stats: SplitStats = field(repr=False, default=None)

    @property
    def oov_token_ratio(self) -> Optional[float]:
        return self.stats.oov_token_ratio


def _hours(utts: List[Utterance]) -> Optional[float]:
    durations = [u.duration for u in utts if u.duration is not None]
    return sum(durations) / 3600.0 if durations else None


def make_split(manifest: Iterable[Utterance], vocab: Iterable[str]) -> SplitResult:
    """Test = utterances with an OOV word; train = the rest, minus any test speaker."""
    utts = sorted(manifest, key=lambda u: u.id)
    vocab = set(vocab)
    if not utts:
        raise SplitError("empty manifest")
    if not vocab:
        raise SplitError("empty vocabulary")
    ids = Counter(u.id for u in utts)
    dup = next((i for i, n in ids.items() if n > 1), None)
    if dup is not None:
        raise SplitError(f"duplicate utterance id {dup}")

    test = [u for u in utts if any(w not in vocab for w in u.text)]
    test_ids = {u.id for u in test}
    test_speakers = {u.speaker for u in test}
    rest = [u for u in utts if u.id not in test_ids]
    train = [u for u in rest if u.speaker not in test_speakers]
    excluded = [u for u in rest if u.speaker in test_speakers]

    oov = Counter(w for u in test for w in u.text if w not in vocab)
    test_tokens = sum(len(u.text) for u in test)
    test_types = len({w for u in test for w in u.text})
    stats = SplitStats(
        test_utterances=len(test),
        train_utterances=len(train),
        excluded_utterances=len(excluded),
        test_speakers=len(test_speakers),
        train_speakers=len({u.speaker for u in train}),
        test_tokens=test_tokens,
        oov_tokens=sum(oov.values()),
        oov_token_ratio=sum(oov.values()) / test_tokens if test_tokens else None,
        test_types=test_types,
        oov_types=len(oov),
        oov_type_ratio=len(oov) / test_types if test_types else None,
        test_hours=_hours(test),
        train_hours=_hours(train),
    )
    return SplitResult(train, test, excluded, dict(oov), stats)


def _ratio(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.3f}"


def oov_report(split: SplitResult) -> str:
    """OOV distribution (count desc, then word) followed by labelled statistics."""
    lines = [f"{w} {n}" for w, n in sorted(split.oov_types.items(), key=lambda kv: (-kv[1], kv[0]))]
    s = split.stats
    lines += [
        "",
        f"oov_token_ratio {_ratio(s.oov_token_ratio)} (OOV tokens / test tokens)",
        f"oov_type_ratio {_ratio(s.oov_type_ratio)} (OOV types / test types)",
        f"oov_types {s.oov_types}",
        f"test_utterances {s.test_utterances}",
        f"train_utterances {s.train_utterances}",
        f"excluded_utterances {s.excluded_utterances}",
    ]
    if s.test_hours is not None:
        lines.append(f"test_hours {s.test_hours:.2f}")
    if s.train_hours is not None:
        lines.append(f"train_hours {s.train_hours:.2f}")
    return "\n".join(lines) + "\n"
