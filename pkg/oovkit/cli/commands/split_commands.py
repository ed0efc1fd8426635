"""
Purpose: Handler for `oovkit make-split`
LLM-Note:
  Dependencies: imports from [pathlib, typing, typer, cmd_lib.py, dataset_split.py] | imported by [cli/main.py] | tested by [tests/test_cli.py]
  Data flow: manifest + vocabulary → make_split() → OUT/train.tsv, OUT/test.tsv, OUT/excluded.tsv, OUT/oov_words.txt, OUT/stats.json → oov_report() on stdout
  Integration: exposes handle_make_split()
"""

from pathlib import Path
from typing import Optional

import typer

from ...dataset_split import make_split, oov_report, read_manifest, read_vocabulary, write_manifest
from .cmd_lib import CliState, command_run, read_input, require_path


def handle_make_split(
    state: CliState,
    manifest: Optional[Path],
    vocab: Optional[Path],
    out: Path,
    normalize: bool = False,
):
    arguments = {"manifest": manifest, "vocab": vocab, "out": out, "normalize": normalize}
    with command_run(state, "make-split", arguments) as run:
        utts = read_manifest(read_input(require_path(manifest, run.cfg, "manifest")), normalize=normalize)
        words = read_vocabulary(read_input(require_path(vocab, run.cfg, "vocab")))
        split = make_split(utts, words)
        run.write(out / "train.tsv", write_manifest(split.train))
        run.write(out / "test.tsv", write_manifest(split.test))
        run.write(out / "excluded.tsv", write_manifest(split.excluded))
        run.write(out / "oov_words.txt", "".join(f"{w}\n" for w in sorted(split.oov_types)))
        run.write(out / "stats.json", split.stats.model_dump_json(indent=2) + "\n")
        if not split.test:
            run.logger.warning("no utterance contains an OOV word; the test set is empty")
        if split.excluded:
            run.logger.info(f"{len(split.excluded)} utterance(s) dropped: speaker also in test")
        run.logger.record_step("make_split", split.stats.model_dump(exclude_none=True))
        typer.echo(oov_report(split), nl=False)
