"""
Purpose: On-disk graph bundles (lang/, g/, graph/ directories) and atomic file writes
LLM-Note:
  Dependencies: imports from [os, tempfile, pathlib, typing, yaml, fst_text.py, symbols.py, lexicon.py, g_graph.py, hclg.py, fst.py, errors.py] | imported by [cli/commands/*] | tested by [tests/test_storage.py]
  Data flow: save_lang(dir, LGraph) → L.fst.txt + phones.txt + words.txt + meta.yaml (chains, pron-end state, unk-LM connectors) | save_g(dir, GGraph) → G.fst.txt + words.txt + meta.yaml (state histories) | save_graph(dir, DecodingGraph) → HCLG.fst.txt + words.txt + transitions.txt + meta.yaml | load_* reverse each
  State/Effects: every file goes through atomic_write() (temp file in the target directory + os.replace) | creates bundle directories
  Integration: exposes atomic_write(), read_text(), save_lang(), load_lang(), save_g(), load_g(), save_graph(), load_graph()
  Performance: text formats, fine at toy and lab scale
  Errors: OovkitError for a bundle of the wrong kind or missing files | FstFormatError/SymbolError from the text readers
"""

import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Union

import yaml

from .errors import OovkitError
from .fst import Arc
from .fst_text import read_fst_text, write_fst_text
from .g_graph import GGraph
from .hclg import DecodingGraph, read_transition_model, write_transition_model
from .lexicon import Chain, LGraph
from .symbols import read_symbols, write_symbols

PathLike = Union[str, Path]


def atomic_write(path: PathLike, text: str) -> Path:
    """Write text to path via a temp file in the same directory and os.replace."""
    path = Path(path)
    if path.parent != Path('.'):
        path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def read_text(path: PathLike) -> str:
    path = Path(path)
    if not path.is_file():
        raise OovkitError(f"file not found: {path}")
    return path.read_text(encoding="utf-8")


def _write_meta(directory: Path, meta: Dict[str, Any]) -> Path:
    return atomic_write(directory / "meta.yaml",
                        yaml.dump(meta, default_flow_style=False, allow_unicode=True, sort_keys=False))


def _read_meta(directory: Path, kind: str) -> Dict[str, Any]:
    meta = yaml.safe_load(read_text(directory / "meta.yaml")) or {}
    if meta.get("kind") != kind:
        raise OovkitError(f"{directory} is not a {kind} bundle (kind: {meta.get('kind')})")
    return meta


def save_lang(directory: PathLike, l: LGraph) -> Path:
    directory = Path(directory)
    atomic_write(directory / "phones.txt", write_symbols(l.phone_syms))
    atomic_write(directory / "words.txt", write_symbols(l.word_syms))
    atomic_write(directory / "L.fst.txt", write_fst_text(l.fst, l.phone_syms, l.word_syms))
    _write_meta(directory, {
        "kind": "lang",
        "start_state": l.start_state,
        "pron_end_state": l.pron_end_state,
        "num_states": l.fst.num_states,
        "chains": [
            {
                "word": c.word,
                "pron": list(c.pron),
                "last_src": c.last_src,
                "last_arc": [c.last_arc.ilabel, c.last_arc.olabel, c.last_arc.weight,
                             c.last_arc.nextstate],
                "disambig": c.disambig,
            }
            for c in l.chains.values()
        ],
        "unk_lm": l.unk_lm,
    })
    return directory


def load_lang(directory: PathLike) -> LGraph:
    directory = Path(directory)
    meta = _read_meta(directory, "lang")
    phones = read_symbols(read_text(directory / "phones.txt"))
    words = read_symbols(read_text(directory / "words.txt"))
    fst = read_fst_text(read_text(directory / "L.fst.txt"), phones, words)
    # Trailing states without arcs (spliced P sinks) are not visible in the text format.
    while fst.num_states < meta.get("num_states", 0):
        fst.add_state()
    fst.set_start(meta["start_state"])
    chains = {}
    for c in meta.get("chains", []):
        il, ol, w, ns = c["last_arc"]
        chain = Chain(c["word"], tuple(c["pron"]), c["last_src"], Arc(il, ol, float(w), ns),
                      c.get("disambig"))
        chains[(chain.word, chain.pron)] = chain
    return LGraph(fst, phones, words, meta["pron_end_state"], meta["start_state"], chains,
                  meta.get("unk_lm"))


def save_g(directory: PathLike, g: GGraph) -> Path:
    directory = Path(directory)
    atomic_write(directory / "words.txt", write_symbols(g.word_syms))
    atomic_write(directory / "G.fst.txt", write_fst_text(g.fst, g.word_syms, g.word_syms))
    _write_meta(directory, {
        "kind": "g",
        "start_state": g.fst.start,
        "backoff_state": g.backoff_state,
        "num_states": g.fst.num_states,
        "histories": [
            {"state": s, "history": list(h)} for s, h in sorted(g.history_of.items())
        ],
    })
    return directory


def load_g(directory: PathLike) -> GGraph:
    directory = Path(directory)
    meta = _read_meta(directory, "g")
    words = read_symbols(read_text(directory / "words.txt"))
    fst = read_fst_text(read_text(directory / "G.fst.txt"), words, words)
    while fst.num_states < meta.get("num_states", 0):
        fst.add_state()
    fst.set_start(meta["start_state"])
    history_of = {h["state"]: tuple(h["history"]) for h in meta.get("histories", [])}
    state_of = {h: s for s, h in history_of.items()}
    return GGraph(fst, words, history_of, state_of, meta["backoff_state"])


def save_graph(directory: PathLike, dg: DecodingGraph) -> Path:
    directory = Path(directory)
    atomic_write(directory / "words.txt", write_symbols(dg.word_syms))
    atomic_write(directory / "transitions.txt", write_transition_model(dg.tm))
    atomic_write(directory / "HCLG.fst.txt", write_fst_text(dg.fst, dg.tid_syms, dg.word_syms))
    _write_meta(directory, {
        "kind": "hclg",
        "start_state": dg.fst.start,
        "num_states": dg.fst.num_states,
        "context_width": dg.context_width,
        "hcl_entries": dg.hcl_entries,
    })
    return directory


def load_graph(directory: PathLike) -> DecodingGraph:
    directory = Path(directory)
    meta = _read_meta(directory, "hclg")
    words = read_symbols(read_text(directory / "words.txt"))
    tm = read_transition_model(read_text(directory / "transitions.txt"))
    fst = read_fst_text(read_text(directory / "HCLG.fst.txt"), tm.symbol_table(), words)
    while fst.num_states < meta.get("num_states", 0):
        fst.add_state()
    if meta.get("start_state") is not None:
        fst.set_start(meta["start_state"])
    return DecodingGraph(fst, tm, words, meta.get("context_width", 1), meta.get("hcl_entries", []))
