"""
Purpose: Handler for `oovkit score` - corpus WER, CER and OOV-CER from two transcript files
LLM-Note:
  Dependencies: imports from [pathlib, typing, typer, cmd_lib.py, metrics.py, lm_commands.py] | imported by [cli/main.py] | tested by [tests/test_cli.py]
  Data flow: ref/hyp 'utt_id transcript' files → read_transcripts() → score_corpus(oov list) → labelled summary lines (or the JSON ErrorReport with --json) on stdout, rich table on stderr
  Integration: exposes handle_score(), format_summary()
"""

from pathlib import Path
from typing import Optional

import typer

from ...metrics import ErrorReport, read_transcripts, score_corpus
from .cmd_lib import CliState, command_run, read_input
from .lm_commands import read_word_list


def _pct(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{100 * value:.2f}%"


def format_summary(report: ErrorReport) -> str:
    lines = [
        f"WER {_pct(report.wer)} [ {report.substitutions + report.insertions + report.deletions} / "
        f"{report.ref_words}, {report.insertions} ins, {report.deletions} del, "
        f"{report.substitutions} sub ]",
        f"CER {_pct(report.cer)} [ {report.cer_edits} / {report.ref_chars} ]",
        f"OOV-CER {_pct(report.oov_cer)} [ {report.oov_edits} / {report.oov_chars} ]",
        f"OOV-recall {_pct(report.oov_recall)} [ {len(report.per_oov)} OOV occurrences ]",
    ]
    return "\n".join(lines) + "\n"


def handle_score(
    state: CliState,
    ref: Path,
    hyp: Path,
    oov_list: Optional[Path],
    json_out: bool,
    out: Optional[Path],
):
    arguments = {"ref": ref, "hyp": hyp, "oov_list": oov_list, "json": json_out, "out": out}
    with command_run(state, "score", arguments) as run:
        refs = read_transcripts(read_input(ref))
        hyps = read_transcripts(read_input(hyp))
        oov = read_word_list(read_input(oov_list)) if oov_list else []
        report = score_corpus(refs, hyps, oov)
        as_json = report.model_dump_json(indent=2) + "\n"
        if out:
            run.write(out, as_json)
        if json_out:
            typer.echo(as_json, nl=False)
        else:
            typer.echo(format_summary(report), nl=False)
        run.logger.record_step("score", {
            "utterances": len(report.utterances),
            "WER": _pct(report.wer),
            "CER": _pct(report.cer),
            "OOV-CER": _pct(report.oov_cer),
        })
