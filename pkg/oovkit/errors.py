"""
Purpose: Exception hierarchy for oovkit domain errors
LLM-Note:
  Dependencies: None (standalone module) | imported by [every domain module, cli/commands/cmd_lib.py] | tested by [tests/test_cli.py]
  Data flow: domain modules raise a subclass with a one-line message naming the offending item → cli/commands/cmd_lib.command_run() catches OovkitError → prints "error: <message>" to stderr → exit status 1
  Integration: exposes OovkitError and one subclass per concern | all subclass ValueError so callers that only know "bad input" still catch them
  Errors: n/a
"""


class OovkitError(ValueError):
    """Base class for every error raised on bad input or an impossible graph operation."""


class SymbolError(OovkitError):
    """A symbol or label id is missing from a symbol table, or a table is malformed."""


class FstFormatError(OovkitError):
    """Malformed AT&T text FST line."""


class EmptyLanguageError(OovkitError):
    """The FST accepts no string (no start state or no reachable final state)."""


class LexiconError(OovkitError):
    """Malformed lexicon, duplicate entry, or a pronunciation with an unknown phone."""


class ArpaError(OovkitError):
    """Malformed ARPA file: bad header, count mismatch, dangling history."""


class GraphSurgeryError(OovkitError):
    """A surgery precondition does not hold (missing [unk] arcs, missing unigram state...)."""


class BpeError(OovkitError):
    """Malformed or mismatched BPE merge file."""


class HclgError(OovkitError):
    """Decoding graph construction or modification failed."""


class SplitError(OovkitError):
    """Malformed manifest or vocabulary."""
