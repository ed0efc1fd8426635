"""
Purpose: Character-aware word alignment and WER / CER / OOV-CER scoring
LLM-Note:
  Dependencies: imports from [dataclasses, typing, numpy, editdistance, pydantic, errors.py] | imported by [cli/commands/score_commands.py] | tested by [tests/test_metrics.py]
  Data flow: align(ref, hyp) → numpy DP where a substitution costs 1 + eps·(normalized character distance) and insertions/deletions cost 1 → backtrace (match, insertion, substitution, deletion) → AlignedPair list | score(ref, hyp, oov) → counts from the alignment, CER from a direct character Levenshtein, OOV-CER from each reference OOV word's aligned hypothesis plus adjacent insertions → ErrorReport | score_corpus() sums integer counts over utterances
  State/Effects: pure
  Integration: exposes GAP, AlignedPair, OovScore, UtteranceScore, ErrorReport, char_edit_distance(), align(), score(), score_corpus(), read_transcripts()
  Performance: O(|ref|·|hyp|) character distances via editdistance (C) + O(|ref|·|hyp|) DP
  Errors: OovkitError from score_corpus/read_transcripts for utterance id mismatches or duplicates
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, TextIO, Union

import numpy as np
from editdistance import eval as levenshtein
from pydantic import BaseModel

from .errors import OovkitError

GAP = "<eps>"

MATCH = "match"
SUBSTITUTION = "substitution"
INSERTION = "insertion"
DELETION = "deletion"

_TIE = 1e-12


@dataclass(frozen=True)
class AlignedPair:
    ref: str
    hyp: str
    kind: str


def char_edit_distance(a: str, b: str) -> int:
    return int(levenshtein(a, b))


def align(ref: Sequence[str], hyp: Sequence[str]) -> List[AlignedPair]:
    """Minimum word errors; among those, minimum character distance of the substitutions."""
    n, m = len(ref), len(hyp)
    eps = 1.0 / (4 * (n + m + 1))
    sub = np.zeros((n, m))
    for i, r in enumerate(ref):
        for j, h in enumerate(hyp):
            if r != h:
                sub[i, j] = 1.0 + eps * levenshtein(r, h) / max(len(r), len(h))

    cost = np.zeros((n + 1, m + 1))
    cost[:, 0] = np.arange(n + 1)
    cost[0, :] = np.arange(m + 1)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost[i, j] = min(cost[i - 1, j - 1] + sub[i - 1, j - 1],
                             cost[i - 1, j] + 1.0,
                             cost[i, j - 1] + 1.0)

    pairs: List[AlignedPair] = []
    i, j = n, m
    while i > 0 or j > 0:
        diagonal = i > 0 and j > 0 and abs(cost[i, j] - cost[i - 1, j - 1] - sub[i - 1, j - 1]) < _TIE
        if diagonal and ref[i - 1] == hyp[j - 1]:
            pairs.append(AlignedPair(ref[i - 1], hyp[j - 1], MATCH))
            i, j = i - 1, j - 1
        elif j > 0 and abs(cost[i, j] - cost[i, j - 1] - 1.0) < _TIE:
            # Tied substitutions go to the earliest hypothesis word.
            pairs.append(AlignedPair(GAP, hyp[j - 1], INSERTION))
            j -= 1
        elif diagonal:
            pairs.append(AlignedPair(ref[i - 1], hyp[j - 1], SUBSTITUTION))
            i, j = i - 1, j - 1
        elif i > 0 and abs(cost[i, j] - cost[i - 1, j] - 1.0) < _TIE:
            pairs.append(AlignedPair(ref[i - 1], GAP, DELETION))
            i -= 1
        else:
            pairs.append(AlignedPair(GAP, hyp[j - 1], INSERTION))
            j -= 1
    pairs.reverse()
    return pairs


class OovScore(BaseModel):
    ref_word: str
    hypothesis: str
    char_edits: int
    utt_id: Optional[str] = None


class UtteranceScore(BaseModel):
    utt_id: str
    substitutions: int
    insertions: int
    deletions: int
    ref_words: int
    cer_edits: int
    ref_chars: int
    alignment: List[List[str]] = []


class ErrorReport(BaseModel):
    wer: float
    cer: float
    oov_cer: Optional[float] = None
    oov_recall: Optional[float] = None
    substitutions: int = 0
    insertions: int = 0
    deletions: int = 0
    ref_words: int = 0
    cer_edits: int = 0
    ref_chars: int = 0
    oov_edits: int = 0
    oov_chars: int = 0
    per_oov: List[OovScore] = []
    utterances: List[UtteranceScore] = []


def _rate(errors: int, total: int) -> float:
    if total == 0:
        return 0.0 if errors == 0 else float("inf")
    return errors / total


def _oov_scores(pairs: List[AlignedPair], oov_words: Set[str]) -> List[OovScore]:
    """Per reference OOV occurrence: aligned word with adjacent insertions merged in."""
    consumed: Set[int] = set()
    scores: List[OovScore] = []
    for k, pair in enumerate(pairs):
        if pair.kind == INSERTION or pair.ref not in oov_words:
            continue
        left: List[str] = []
        i = k - 1
        while i >= 0 and pairs[i].kind == INSERTION and i not in consumed:
            left.insert(0, pairs[i].hyp)
            consumed.add(i)
            i -= 1
        right: List[str] = []
        i = k + 1
        while i < len(pairs) and pairs[i].kind == INSERTION and i not in consumed:
            right.append(pairs[i].hyp)
            consumed.add(i)
            i += 1
        center = [] if pair.hyp == GAP else [pair.hyp]
        candidate = "".join(left + center + right)
        scores.append(OovScore(ref_word=pair.ref, hypothesis=candidate,
                               char_edits=char_edit_distance(pair.ref, candidate)))
    return scores


def _utterance(utt_id: str, ref: Sequence[str], hyp: Sequence[str], pairs: List[AlignedPair]) -> UtteranceScore:
    return UtteranceScore(
        utt_id=utt_id,
        substitutions=sum(p.kind == SUBSTITUTION for p in pairs),
        insertions=sum(p.kind == INSERTION for p in pairs),
        deletions=sum(p.kind == DELETION for p in pairs),
        ref_words=len(ref),
        # Characters of the concatenated words; separators are not scored.
        cer_edits=char_edit_distance("".join(ref), "".join(hyp)),
        ref_chars=sum(len(w) for w in ref),
        alignment=[[p.ref, p.hyp, p.kind] for p in pairs],
    )


def _report(utterances: List[UtteranceScore], per_oov: List[OovScore], recalled: int) -> ErrorReport:
    s = sum(u.substitutions for u in utterances)
    ins = sum(u.insertions for u in utterances)
    d = sum(u.deletions for u in utterances)
    n = sum(u.ref_words for u in utterances)
    cer_edits = sum(u.cer_edits for u in utterances)
    ref_chars = sum(u.ref_chars for u in utterances)
    oov_edits = sum(o.char_edits for o in per_oov)
    oov_chars = sum(len(o.ref_word) for o in per_oov)
    return ErrorReport(
        wer=_rate(s + ins + d, n),
        cer=_rate(cer_edits, ref_chars),
        oov_cer=oov_edits / oov_chars if per_oov else None,
        oov_recall=recalled / len(per_oov) if per_oov else None,
        substitutions=s, insertions=ins, deletions=d, ref_words=n,
        cer_edits=cer_edits, ref_chars=ref_chars,
        oov_edits=oov_edits, oov_chars=oov_chars,
        per_oov=per_oov, utterances=utterances,
    )


def score(ref: Sequence[str], hyp: Sequence[str], oov_words: Iterable[str] = ()) -> ErrorReport:
    """Score one utterance; oov_cer is None when the reference has no OOV word."""
    pairs = align(ref, hyp)
    oov = set(oov_words)
    per_oov = _oov_scores(pairs, oov)
    recalled = sum(p.kind == MATCH and p.ref in oov for p in pairs)
    return _report([_utterance("", ref, hyp, pairs)], per_oov, recalled)


def score_corpus(
    refs: Dict[str, List[str]],
    hyps: Dict[str, List[str]],
    oov_words: Iterable[str] = (),
) -> ErrorReport:
    """Micro-averaged scores over utterances joined on id (sorted, so order never matters)."""
    missing = sorted(set(refs) ^ set(hyps))
    if missing:
        raise OovkitError(f"utterance {missing[0]} appears in only one of ref/hyp "
                          f"({len(missing)} mismatched id(s))")
    oov = set(oov_words)
    utterances: List[UtteranceScore] = []
    per_oov: List[OovScore] = []
    recalled = 0
    for utt_id in sorted(refs):
        pairs = align(refs[utt_id], hyps[utt_id])
        utterances.append(_utterance(utt_id, refs[utt_id], hyps[utt_id], pairs))
        for o in _oov_scores(pairs, oov):
            o.utt_id = utt_id
            per_oov.append(o)
        recalled += sum(p.kind == MATCH and p.ref in oov for p in pairs)
    return _report(utterances, per_oov, recalled)


def read_transcripts(text: Union[str, TextIO]) -> Dict[str, List[str]]:
    """'utt_id<TAB>transcript' lines; the transcript may be empty."""
    if not isinstance(text, str):
        text = text.read()
    out: Dict[str, List[str]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split(None, 1)
        utt_id = fields[0]
        if utt_id in out:
            raise OovkitError(f"line {lineno}: duplicate utterance id {utt_id}")
        out[utt_id] = fields[1].split() if len(fields) > 1 else []
    return out
