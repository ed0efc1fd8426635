"""
Purpose: Handlers for bpe-train and bpe-apply
LLM-Note:
  Dependencies: imports from [pathlib, typing, typer, cmd_lib.py, bpe.py, lexicon.py, errors.py] | imported by [cli/main.py] | tested by [tests/test_cli.py]
  Data flow: corpus → read_corpus() → train_bpe(num_merges, marker) → write_bpe() | merge file + words or a text file → tokenize() per word → one line of tokens per input line (stdout or --out), optional character lexicon of every token seen
  Integration: exposes handle_bpe_train(), handle_bpe_apply()
"""

from pathlib import Path
from typing import List, Optional

import typer

from ...bpe import read_bpe, read_corpus, subword_lexicon, tokenize, train_bpe, write_bpe
from ...errors import BpeError
from ...lexicon import write_lexicon
from .cmd_lib import CliState, command_run, read_input, require_path


def handle_bpe_train(
    state: CliState,
    corpus: Path,
    num_merges: Optional[int],
    marker: Optional[str],
    out: Path,
):
    arguments = {"corpus": corpus, "num_merges": num_merges, "marker": marker, "out": out}
    with command_run(state, "bpe-train", arguments, num_merges=num_merges, marker=marker) as run:
        counts = read_corpus(read_input(corpus))
        if not counts:
            raise BpeError(f"no words in {corpus}")
        model = train_bpe(counts, run.cfg.num_merges, run.cfg.marker)
        run.write(out, write_bpe(model))
        if len(model.merges) < run.cfg.num_merges:
            run.logger.info(f"stopped after {len(model.merges)} merges: no pair occurs twice")
        typer.echo(f"{len(model.merges)} merges over {len(counts)} word types -> {out}")


def handle_bpe_apply(
    state: CliState,
    bpe: Optional[Path],
    words: List[str],
    input: Optional[Path],
    out: Optional[Path],
    lexicon_out: Optional[Path],
):
    arguments = {"bpe": bpe, "words": words, "input": input, "out": out, "lexicon_out": lexicon_out}
    with command_run(state, "bpe-apply", arguments) as run:
        model = read_bpe(read_input(require_path(bpe, run.cfg, "bpe")))
        if input is not None:
            lines = [line.split() for line in read_input(input).splitlines()]
        elif words:
            lines = [[w] for w in words]
        else:
            raise typer.BadParameter("give words to tokenize or --input")

        seen: List[str] = []
        rendered: List[str] = []
        for line in lines:
            tokens = [t for word in line for t in tokenize(model, word)]
            seen.extend(tokens)
            rendered.append(" ".join(tokens))
        text = "".join(line + "\n" for line in rendered)
        if out:
            run.write(out, text)
        else:
            typer.echo(text, nl=False)
        if lexicon_out:
            run.write(lexicon_out, write_lexicon(subword_lexicon(seen, model.marker)))
