"""
Purpose: OpenFST-compatible AT&T text format reader/writer
LLM-Note:
  Dependencies: imports from [typing, fst.py, symbols.py, errors.py] | imported by [storage.py, cli/commands/*] | tested by [tests/test_fst_text.py]
  Data flow: read_fst_text(text, isyms, osyms) → parses arc lines "src dst isym osym [weight]" and final lines "state [weight]" → Fst with start = source of the first line | write_fst_text(fst, isyms, osyms) → start state's lines first so the start survives a round trip (an arcless, non-final start is written as "<start> Infinity")
  State/Effects: pure
  Integration: exposes read_fst_text(), write_fst_text(), format_weight()
  Performance: single pass, O(lines)
  Errors: FstFormatError for malformed lines (with line number) | SymbolError for unknown symbols or unmapped ids
"""

from typing import List, TextIO, Union

from .errors import FstFormatError
from .fst import ONE, ZERO, Arc, Fst
from .symbols import SymbolTable


def format_weight(weight: float) -> str:
    if weight == ZERO:
        return "Infinity"
    text = f"{weight:.6f}"
    return "0.000000" if text == "-0.000000" else text


def _parse_weight(field: str, lineno: int) -> float:
    try:
        return float(field)
    except ValueError:
        raise FstFormatError(f"line {lineno}: bad weight {field!r}") from None


def _parse_state(field: str, lineno: int) -> int:
    if not field.isdigit():
        raise FstFormatError(f"line {lineno}: bad state id {field!r}")
    return int(field)


def read_fst_text(text: Union[str, TextIO], isyms: SymbolTable, osyms: SymbolTable) -> Fst:
    """Parse AT&T text. Empty input gives an empty Fst (no states, no start)."""
    if not isinstance(text, str):
        text = text.read()
    fst = Fst()

    def ensure(state: int) -> None:
        while fst.num_states <= state:
            fst.add_state()

    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) in (4, 5):
            src = _parse_state(fields[0], lineno)
            dst = _parse_state(fields[1], lineno)
            ilabel = isyms.find(fields[2])
            olabel = osyms.find(fields[3])
            weight = _parse_weight(fields[4], lineno) if len(fields) == 5 else ONE
            ensure(max(src, dst))
            fst.add_arc(src, Arc(ilabel, olabel, weight, dst))
        elif len(fields) in (1, 2):
            src = _parse_state(fields[0], lineno)
            ensure(src)
            fst.set_final(src, _parse_weight(fields[1], lineno) if len(fields) == 2 else ONE)
        else:
            raise FstFormatError(f"line {lineno}: expected 1, 2, 4 or 5 fields, got {len(fields)}")
        if fst.start is None:
            fst.set_start(src)
    return fst


def write_fst_text(fst: Fst, isyms: SymbolTable, osyms: SymbolTable) -> str:
    if fst.start is None or fst.num_states == 0:
        return ""
    lines: List[str] = []
    order = [fst.start] + [s for s in fst.states() if s != fst.start]
    for state in order:
        for arc in fst.arcs(state):
            lines.append(
                f"{state}\t{arc.nextstate}\t{isyms.symbol(arc.ilabel)}\t"
                f"{osyms.symbol(arc.olabel)}\t{format_weight(arc.weight)}"
            )
    finals = fst.finals
    # A start state without arcs must still open the file; a non-final one gets weight Infinity.
    if not fst.arcs(fst.start):
        lines.insert(0, f"{fst.start}\t{format_weight(finals.pop(fst.start, ZERO))}")
    for state in sorted(finals):
        lines.append(f"{state}\t{format_weight(finals[state])}")
    return "\n".join(lines) + "\n" if lines else ""
