"""
Purpose: Bidirectional symbol ↔ label-id tables with reserved epsilon and "#"-prefixed disambiguation symbols
LLM-Note:
  Dependencies: imports from [typing, errors.py] | imported by [fst_text.py, fst_ops.py, lexicon.py, g_graph.py, hclg.py, storage.py] | tested by [tests/test_fst.py]
  Data flow: read_symbols(text) → SymbolTable | SymbolTable.add_symbol(sym) interns and returns the id | find(sym)/symbol(id) look up either direction | write_symbols(table) → "symbol<TAB>id" lines
  State/Effects: SymbolTable is mutable (add_symbol) | callers copy() before surgery so inputs stay untouched
  Integration: exposes SymbolTable, EPSILON, read_symbols(), write_symbols(), is_disambiguation()
  Performance: two dicts, O(1) both directions
  Errors: SymbolError for unknown symbols/ids, duplicate ids or strings, missing "<eps> 0"
"""

from typing import Dict, Iterable, Iterator, List, Optional, TextIO, Tuple, Union

from .errors import SymbolError

EPSILON = "<eps>"


def is_disambiguation(symbol: str) -> bool:
    """Disambiguation symbols are ordinary symbols whose names start with '#'."""
    return symbol.startswith("#")


class SymbolTable:
    """Bijection between symbol strings and integer labels; id 0 is always '<eps>'."""

    def __init__(self, symbols: Optional[Iterable[str]] = None):
        self._ids: Dict[str, int] = {EPSILON: 0}
        self._symbols: Dict[int, str] = {0: EPSILON}
        for sym in symbols or ():
            self.add_symbol(sym)

    def add_symbol(self, symbol: str, label: Optional[int] = None) -> int:
        """Intern a symbol and return its id. Re-adding an existing symbol is a no-op."""
        if not symbol or any(c.isspace() for c in symbol):
            raise SymbolError(f"invalid symbol {symbol!r}")
        existing = self._ids.get(symbol)
        if existing is not None:
            if label is not None and label != existing:
                raise SymbolError(f"symbol {symbol} already has id {existing}, not {label}")
            return existing
        if label is None:
            label = max(self._symbols) + 1
        elif label in self._symbols:
            raise SymbolError(f"id {label} already used by {self._symbols[label]}")
        self._ids[symbol] = label
        self._symbols[label] = symbol
        return label

    def find(self, symbol: str) -> int:
        try:
            return self._ids[symbol]
        except KeyError:
            raise SymbolError(f"unknown symbol {symbol}") from None

    def symbol(self, label: int) -> str:
        try:
            return self._symbols[label]
        except KeyError:
            raise SymbolError(f"unmapped label id {label}") from None

    def get(self, symbol: str) -> Optional[int]:
        return self._ids.get(symbol)

    def disambiguation_ids(self) -> List[int]:
        return sorted(i for s, i in self._ids.items() if is_disambiguation(s))

    def is_disambiguation_id(self, label: int) -> bool:
        sym = self._symbols.get(label)
        return sym is not None and is_disambiguation(sym)

    def next_disambiguation(self) -> str:
        """Smallest '#k' (k >= 1) not yet in the table."""
        k = 1
        while f"#{k}" in self._ids:
            k += 1
        return f"#{k}"

    def items(self) -> List[Tuple[str, int]]:
        return sorted(self._ids.items(), key=lambda kv: kv[1])

    def copy(self) -> "SymbolTable":
        table = SymbolTable()
        table._ids = dict(self._ids)
        table._symbols = dict(self._symbols)
        return table

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._ids

    def __len__(self) -> int:
        return len(self._ids)

    def __iter__(self) -> Iterator[str]:
        return (sym for sym, _ in self.items())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SymbolTable) and self._ids == other._ids

    def __repr__(self) -> str:
        return f"SymbolTable({len(self)} symbols)"


def read_symbols(text: Union[str, TextIO]) -> SymbolTable:
    """Parse 'symbol<TAB>id' lines. The table must map '<eps>' to 0."""
    if not isinstance(text, str):
        text = text.read()
    table = SymbolTable()
    seen_eps = False
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2 or not parts[1].lstrip("-").isdigit():
            raise SymbolError(f"line {lineno}: expected 'symbol<TAB>id', got {line!r}")
        sym, label = parts[0], int(parts[1])
        if sym == EPSILON or label == 0:
            if sym != EPSILON or label != 0:
                raise SymbolError(f"line {lineno}: id 0 is reserved for {EPSILON}")
            seen_eps = True
            continue
        if label < 0:
            raise SymbolError(f"line {lineno}: negative id {label}")
        if sym in table:
            raise SymbolError(f"line {lineno}: duplicate symbol {sym}")
        table.add_symbol(sym, label)
    if not seen_eps:
        raise SymbolError(f"symbol table has no '{EPSILON}\\t0' entry")
    return table


def write_symbols(table: SymbolTable) -> str:
    return "".join(f"{sym}\t{label}\n" for sym, label in table.items())
