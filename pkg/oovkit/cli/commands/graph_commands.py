"""
Purpose: Handlers for the lexicon and decoding-graph commands (build-l, add-words, splice-unk-lm, build-hclg, mod-hclg)
LLM-Note:
  Dependencies: imports from [pathlib, typing, cmd_lib.py, lexicon.py, hclg.py, fst_text.py, symbols.py, storage.py] | imported by [cli/main.py] | tested by [tests/test_cli.py]
  Data flow: flag values (or [paths] config entries) → read lexicon / bundles → lexicon.py or hclg.py operation → save_lang()/save_graph() → one summary line on stdout
  State/Effects: writes bundle directories, run records via cmd_lib.command_run
  Integration: exposes handle_build_l(), handle_add_words(), handle_splice_unk_lm(), handle_build_hclg(), handle_mod_hclg()
"""

from pathlib import Path
from typing import Optional

import typer

from ...fst_text import read_fst_text
from ...hclg import TransitionModel, build_hclg, mod_hclg, read_transition_model
from ...lexicon import add_words_to_l, build_l, parse_lexicon, splice_unk_lm
from ...storage import load_g, load_graph, load_lang, save_graph, save_lang
from ...symbols import read_symbols
from .cmd_lib import CliState, command_run, read_input, require_path


def handle_build_l(state: CliState, lexicon: Optional[Path], out: Path, add_unk: bool = True):
    with command_run(state, "build-l", {"lexicon": lexicon, "out": out, "add_unk": add_unk}) as run:
        lexicon = require_path(lexicon, run.cfg, "lexicon")
        lex = parse_lexicon(read_input(lexicon))
        run.logger.info(f"Building L from {len(lex)} pronunciations")
        l = build_l(lex, add_unk=add_unk, junk_phone=run.cfg.junk_phone)
        run.wrote(save_lang(out, l))
        typer.echo(f"L: {l.fst.num_states} states, {l.fst.num_arcs} arcs, "
                   f"{len(l.word_syms)} words -> {out}")


def handle_add_words(state: CliState, lang: Optional[Path], oov_lexicon: Optional[Path], out: Path):
    with command_run(state, "add-words", {"lang": lang, "oov_lexicon": oov_lexicon, "out": out}) as run:
        lang = require_path(lang, run.cfg, "lang")
        oov_lexicon = require_path(oov_lexicon, run.cfg, "oov_lexicon")
        l = load_lang(lang)
        oov = parse_lexicon(read_input(oov_lexicon))
        new_l = add_words_to_l(l, oov, logger=run.logger)
        run.wrote(save_lang(out, new_l))
        added = len(new_l.chains) - len(l.chains)
        typer.echo(f"added {added} pronunciation(s); L now has {new_l.fst.num_states} states -> {out}")


def handle_splice_unk_lm(
    state: CliState,
    lang: Optional[Path],
    unk_lm: Path,
    unk_lm_syms: Optional[Path],
    out: Path,
):
    arguments = {"lang": lang, "unk_lm": unk_lm, "unk_lm_syms": unk_lm_syms, "out": out}
    with command_run(state, "splice-unk-lm", arguments) as run:
        lang = require_path(lang, run.cfg, "lang")
        l = load_lang(lang)
        p_syms = read_symbols(read_input(unk_lm_syms)) if unk_lm_syms else None
        table = p_syms or l.phone_syms
        p = read_fst_text(read_input(unk_lm), table, table)
        new_l = splice_unk_lm(l, p, p_syms, junk_phone=run.cfg.junk_phone)
        run.wrote(save_lang(out, new_l))
        meta = new_l.unk_lm or {}
        typer.echo(f"spliced {meta.get('num_states', p.num_states)}-state unk LM "
                   f"({meta.get('entry_symbol')} / {meta.get('exit_symbol')}) -> {out}")


def handle_build_hclg(
    state: CliState,
    lang: Optional[Path],
    g: Optional[Path],
    transitions: Optional[Path],
    self_loop_prob: Optional[float],
    out: Path,
):
    arguments = {"lang": lang, "g": g, "transitions": transitions,
                 "self_loop_prob": self_loop_prob, "out": out}
    with command_run(state, "build-hclg", arguments, self_loop_prob=self_loop_prob) as run:
        l = load_lang(require_path(lang, run.cfg, "lang"))
        grammar = load_g(require_path(g, run.cfg, "g"))
        transitions = transitions or run.cfg.path("transitions")
        if transitions:
            tm = read_transition_model(read_input(transitions))
            if self_loop_prob is not None:
                tm = TransitionModel(tm.phone_to_tid, self_loop_prob)
        else:
            phones = [p for p, pid in l.phone_syms.items()
                      if pid and not l.phone_syms.is_disambiguation_id(pid)]
            tm = TransitionModel.from_phones(phones, run.cfg.self_loop_prob)
        run.logger.info(f"Composing L ({l.fst.num_states} states) with G ({grammar.fst.num_states} states)")
        dg = build_hclg(l, grammar, tm, logger=run.logger)
        run.wrote(save_graph(out, dg))
        typer.echo(f"HCLG: {dg.fst.num_states} states, {dg.fst.num_arcs} arcs -> {out}")


def handle_mod_hclg(
    state: CliState,
    graph: Optional[Path],
    oov_lexicon: Optional[Path],
    penalty: Optional[float],
    out: Path,
):
    arguments = {"graph": graph, "oov_lexicon": oov_lexicon, "penalty": penalty, "out": out}
    with command_run(state, "mod-hclg", arguments, penalty=penalty) as run:
        dg = load_graph(require_path(graph, run.cfg, "graph"))
        oov = parse_lexicon(read_input(require_path(oov_lexicon, run.cfg, "oov_lexicon")))
        new = mod_hclg(dg, oov, run.cfg.bias(), unk=run.cfg.unk_symbol, logger=run.logger)
        run.wrote(save_graph(out, new))
        typer.echo(f"HCLG: +{new.fst.num_states - dg.fst.num_states} states for "
                   f"{len(oov.words())} OOV word(s), penalty {run.cfg.penalty:g} -> {out}")
