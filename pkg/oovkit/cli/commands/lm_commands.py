"""
Purpose: Handlers for the grammar commands (build-g, mod-lg, mod-g)
LLM-Note:
  Dependencies: imports from [pathlib, typing, typer, cmd_lib.py, arpa.py, bpe.py, g_graph.py, lexicon.py, storage.py, errors.py] | imported by [cli/main.py] | tested by [tests/test_cli.py]
  Data flow: ARPA text → parse_arpa() → arpa_to_g() (word table shared with --lang when given) → save_g() | lang/ + g/ + OOV lexicon → mod_lg() → both bundles | subword g/ + OOV list + BPE merges → mod_g_subwords() → g/ bundle + optional JSON report
  State/Effects: writes bundles and reports, run records via cmd_lib.command_run
  Integration: exposes handle_build_g(), handle_mod_lg(), handle_mod_g(), read_word_list()
  Errors: ArpaError when --require-unk-final finds [unk] inside a history | GraphSurgeryError from the surgeries
"""

from pathlib import Path
from typing import List, Optional

import typer

from ...arpa import check_unk_history, parse_arpa
from ...bpe import read_bpe
from ...errors import ArpaError
from ...g_graph import arpa_to_g, mod_g_subwords, mod_lg
from ...lexicon import parse_lexicon
from ...storage import load_g, load_lang, save_g, save_lang
from .cmd_lib import CliState, command_run, read_input, require_path


def read_word_list(text: str) -> List[str]:
    """First token of each non-blank line, order kept, duplicates dropped."""
    words = (line.split()[0] for line in text.splitlines() if line.strip())
    return list(dict.fromkeys(words))


def handle_build_g(
    state: CliState,
    arpa: Optional[Path],
    lang: Optional[Path],
    out: Path,
    require_unk_final: bool = False,
):
    arguments = {"arpa": arpa, "lang": lang, "out": out, "require_unk_final": require_unk_final}
    with command_run(state, "build-g", arguments) as run:
        model = parse_arpa(read_input(require_path(arpa, run.cfg, "arpa")))
        unk = run.cfg.unk_symbol
        offending = check_unk_history(model, unk)
        if offending:
            sample = " ".join(offending[0])
            message = (f"{len(offending)} n-gram(s) condition on {unk}, e.g. '{sample}'; "
                       "word-level [unk] replacement needs an LM trained with limit-unk-history")
            if require_unk_final:
                raise ArpaError(message)
            run.logger.warning(message)
        word_syms = None
        lang = lang or run.cfg.path("lang")
        if lang:
            # Share L's table; its '#0' is re-added by arpa_to_g with the same id.
            word_syms = load_lang(lang).word_syms
        g = arpa_to_g(model, word_syms, logger=run.logger)
        run.wrote(save_g(out, g))
        typer.echo(f"G: order {model.order}, {g.fst.num_states} states, {g.fst.num_arcs} arcs -> {out}")


def handle_mod_lg(
    state: CliState,
    lang: Optional[Path],
    g: Optional[Path],
    oov_lexicon: Optional[Path],
    penalty: Optional[float],
    out_lang: Path,
    out_g: Path,
):
    arguments = {"lang": lang, "g": g, "oov_lexicon": oov_lexicon, "penalty": penalty,
                 "out_lang": out_lang, "out_g": out_g}
    with command_run(state, "mod-lg", arguments, penalty=penalty) as run:
        l = load_lang(require_path(lang, run.cfg, "lang"))
        grammar = load_g(require_path(g, run.cfg, "g"))
        oov = parse_lexicon(read_input(require_path(oov_lexicon, run.cfg, "oov_lexicon")))
        new_l, new_g = mod_lg(l, grammar, oov, run.cfg.bias(), unk=run.cfg.unk_symbol,
                              logger=run.logger)
        run.wrote(save_lang(out_lang, new_l))
        run.wrote(save_g(out_g, new_g))
        typer.echo(f"added {len(oov.words())} OOV word(s) at penalty {run.cfg.penalty:g} "
                   f"-> {out_lang}, {out_g}")


def handle_mod_g(
    state: CliState,
    g: Optional[Path],
    oov_list: Path,
    bpe: Optional[Path],
    discount: Optional[float],
    boost_cost: Optional[float],
    out: Path,
    report: Optional[Path] = None,
):
    arguments = {"g": g, "oov_list": oov_list, "bpe": bpe, "discount": discount,
                 "boost_cost": boost_cost, "out": out, "report": report}
    with command_run(state, "mod-g", arguments, discount=discount, boost_cost=boost_cost) as run:
        grammar = load_g(require_path(g, run.cfg, "g"))
        words = read_word_list(read_input(oov_list))
        model = read_bpe(read_input(require_path(bpe, run.cfg, "bpe")))
        new_g, bias_report = mod_g_subwords(grammar, words, model, run.cfg.bias(), logger=run.logger)
        run.wrote(save_g(out, new_g))
        if report:
            run.write(report, bias_report.model_dump_json(indent=2) + "\n")
        boosted = len(bias_report.words)
        typer.echo(f"boosted {boosted} word(s), skipped {len(bias_report.skipped)} -> {out}")
        for word in bias_report.skipped:
            run.logger.warning(f"not boosted: {word}")
