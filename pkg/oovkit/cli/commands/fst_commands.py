"""
Purpose: Handlers for the text-FST utilities (compose, shortest-path, extract-unk)
LLM-Note:
  Dependencies: imports from [json, pathlib, typing, typer, cmd_lib.py, fst.py, fst_ops.py, fst_text.py, symbols.py] | imported by [cli/main.py] | tested by [tests/test_cli.py]
  Data flow: AT&T text + symbol tables → read_fst_text() → compose()/shortest_path() → write_fst_text() to --out or stdout | extract-unk: shortest_path() → extract_unk_spans() → spans_to_strings(joiner) → one recovered span per line
  Integration: exposes handle_compose(), handle_shortest_path(), handle_extract_unk(), path_to_fst()
  Errors: EmptyLanguageError when no accepting path exists (exit 1)
"""

import json
from pathlib import Path
from typing import Optional

import typer

from ...fst import Arc, Fst, LinearPath
from ...fst_ops import compose, extract_unk_spans, shortest_path, spans_to_strings
from ...fst_text import format_weight, read_fst_text, write_fst_text
from ...symbols import read_symbols
from .cmd_lib import CliState, CommandRun, command_run, read_input


def path_to_fst(path: LinearPath) -> Fst:
    """The path as a string FST; the final weight carries whatever the arcs do not."""
    fst = Fst()
    states = fst.add_states(len(path.arcs) + 1)
    fst.set_start(states[0])
    spent = 0.0
    for i, arc in enumerate(path.arcs):
        fst.add_arc(states[i], Arc(arc.ilabel, arc.olabel, arc.weight, states[i + 1]))
        spent += arc.weight
    fst.set_final(states[-1], path.total_weight - spent)
    return fst


def _emit(run: CommandRun, out: Optional[Path], text: str) -> None:
    if out:
        run.write(out, text)
    else:
        typer.echo(text, nl=False)


def handle_compose(
    state: CliState,
    a: Path,
    b: Path,
    isyms: Path,
    msyms: Path,
    osyms: Path,
    out: Optional[Path],
):
    arguments = {"a": a, "b": b, "isyms": isyms, "msyms": msyms, "osyms": osyms, "out": out}
    with command_run(state, "compose", arguments) as run:
        in_syms = read_symbols(read_input(isyms))
        mid_syms = read_symbols(read_input(msyms))
        out_syms = read_symbols(read_input(osyms))
        left = read_fst_text(read_input(a), in_syms, mid_syms)
        right = read_fst_text(read_input(b), mid_syms, out_syms)
        result = compose(left, right)
        run.logger.info(f"composed: {result.num_states} states, {result.num_arcs} arcs")
        _emit(run, out, write_fst_text(result, in_syms, out_syms))


def handle_shortest_path(
    state: CliState,
    fst: Path,
    isyms: Path,
    osyms: Path,
    json_out: bool,
    out: Optional[Path],
):
    arguments = {"fst": fst, "isyms": isyms, "osyms": osyms, "json": json_out, "out": out}
    with command_run(state, "shortest-path", arguments) as run:
        in_syms = read_symbols(read_input(isyms))
        out_syms = read_symbols(read_input(osyms))
        path = shortest_path(read_fst_text(read_input(fst), in_syms, out_syms))
        if json_out:
            summary = {
                "cost": float(format_weight(path.total_weight)),
                "input": [in_syms.symbol(i) for i in path.ilabels],
                "output": [out_syms.symbol(o) for o in path.olabels],
            }
            typer.echo(json.dumps(summary, ensure_ascii=False))
            if out:
                run.write(out, write_fst_text(path_to_fst(path), in_syms, out_syms))
        else:
            _emit(run, out, write_fst_text(path_to_fst(path), in_syms, out_syms))


def handle_extract_unk(
    state: CliState,
    fst: Path,
    isyms: Path,
    osyms: Path,
    unk: Optional[str],
    joiner: str,
):
    arguments = {"fst": fst, "isyms": isyms, "osyms": osyms, "unk": unk, "joiner": joiner}
    with command_run(state, "extract-unk", arguments, unk_symbol=unk) as run:
        in_syms = read_symbols(read_input(isyms))
        out_syms = read_symbols(read_input(osyms))
        path = shortest_path(read_fst_text(read_input(fst), in_syms, out_syms))
        spans = extract_unk_spans(path, in_syms, out_syms, run.cfg.unk_symbol)
        run.logger.debug(f"best path cost {path.total_weight:.6f}, {len(spans)} [unk] span(s)")
        for text in spans_to_strings(spans, in_syms, joiner):
            typer.echo(text)
