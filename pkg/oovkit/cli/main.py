"""
Purpose: Entry point for the oovkit CLI using Typer - one subcommand per graph, LM, BPE, scoring and split operation

Commands:
  - oovkit build-l / add-words / splice-unk-lm      lexicon transducer
  - oovkit build-g / mod-lg / mod-g                 grammar and its biasing
  - oovkit bpe-train / bpe-apply                    subword merges
  - oovkit build-hclg / mod-hclg                    decoding graph
  - oovkit compose / shortest-path / extract-unk    FST utilities
  - oovkit score / make-split                       evaluation
"""

from pathlib import Path
from typing import List, Optional

import typer

from .. import __version__
from ..config import DEFAULT_NUM_MERGES
from .commands.cmd_lib import CliState

app = typer.Typer(add_completion=False, no_args_is_help=True)


def version_callback(value: bool):
    if value:
        typer.echo(f"oovkit {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(None, "--config", help="TOML config (default .oovkit/config.toml)"),
    verbose: bool = typer.Option(False, "--verbose", help="Debug output"),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="No progress output"),
    no_log: bool = typer.Option(False, "--no-log", help="Do not write logs or run records"),
    version: bool = typer.Option(False, "--version", "-v", callback=version_callback, is_eager=True),
):
    """oovkit - WFST surgery for out-of-vocabulary words, plus OOV-aware scoring."""
    ctx.obj = CliState(config_path=config, verbose=verbose, quiet=quiet, no_log=no_log)


# --- lexicon -----------------------------------------------------------------

@app.command("build-l")
def build_l(
    ctx: typer.Context,
    lexicon: Optional[Path] = typer.Option(None, "--lexicon", help="'word p1 p2 ...' lines"),
    out: Path = typer.Option(Path("lang"), "--out", help="Output lang/ bundle"),
    no_unk: bool = typer.Option(False, "--no-unk", help="Do not add the jnk:[unk] pronunciation"),
):
    """Build L from a pronunciation lexicon."""
    from .commands.graph_commands import handle_build_l
    handle_build_l(ctx.obj, lexicon=lexicon, out=out, add_unk=not no_unk)


@app.command("add-words")
def add_words(
    ctx: typer.Context,
    lang: Optional[Path] = typer.Option(None, "--lang", help="Input lang/ bundle"),
    oov_lexicon: Optional[Path] = typer.Option(None, "--oov-lexicon", help="Lexicon of new words"),
    out: Path = typer.Option(..., "--out", help="Output lang/ bundle"),
):
    """Add OOV pronunciations to an existing L."""
    from .commands.graph_commands import handle_add_words
    handle_add_words(ctx.obj, lang=lang, oov_lexicon=oov_lexicon, out=out)


@app.command("splice-unk-lm")
def splice_unk_lm(
    ctx: typer.Context,
    lang: Optional[Path] = typer.Option(None, "--lang", help="Input lang/ bundle"),
    unk_lm: Path = typer.Option(..., "--unk-lm", help="Phone-LM acceptor (AT&T text)"),
    unk_lm_syms: Optional[Path] = typer.Option(None, "--unk-lm-syms", help="Its symbol table (default: the lang phones)"),
    out: Path = typer.Option(..., "--out", help="Output lang/ bundle"),
):
    """Replace the jnk pronunciation of [unk] with a phone LM."""
    from .commands.graph_commands import handle_splice_unk_lm
    handle_splice_unk_lm(ctx.obj, lang=lang, unk_lm=unk_lm, unk_lm_syms=unk_lm_syms, out=out)


# --- grammar -----------------------------------------------------------------

@app.command("build-g")
def build_g(
    ctx: typer.Context,
    arpa: Optional[Path] = typer.Option(None, "--arpa", help="ARPA language model"),
    lang: Optional[Path] = typer.Option(None, "--lang", help="Share the word table of this lang/ bundle"),
    out: Path = typer.Option(Path("g"), "--out", help="Output g/ bundle"),
    require_unk_final: bool = typer.Option(False, "--require-unk-final",
                                           help="Fail if [unk] appears inside any n-gram history"),
):
    """Convert an ARPA model to G."""
    from .commands.lm_commands import handle_build_g
    handle_build_g(ctx.obj, arpa=arpa, lang=lang, out=out, require_unk_final=require_unk_final)


@app.command("mod-lg")
def mod_lg(
    ctx: typer.Context,
    lang: Optional[Path] = typer.Option(None, "--lang", help="Input lang/ bundle"),
    g: Optional[Path] = typer.Option(None, "--g", help="Input g/ bundle"),
    oov_lexicon: Optional[Path] = typer.Option(None, "--oov-lexicon", help="Lexicon of new words"),
    penalty: Optional[float] = typer.Option(None, "--penalty", min=0, help="Cost added to replaced [unk] arcs (default 2.3)"),
    out_lang: Path = typer.Option(..., "--out-lang", help="Output lang/ bundle"),
    out_g: Path = typer.Option(..., "--out-g", help="Output g/ bundle"),
):
    """Add OOV words to L and replace [unk] arcs in G."""
    from .commands.lm_commands import handle_mod_lg
    handle_mod_lg(ctx.obj, lang=lang, g=g, oov_lexicon=oov_lexicon, penalty=penalty,
                  out_lang=out_lang, out_g=out_g)


@app.command("mod-g")
def mod_g(
    ctx: typer.Context,
    g: Optional[Path] = typer.Option(None, "--g", help="Input subword g/ bundle"),
    oov_list: Path = typer.Option(..., "--oov-list", help="One OOV word per line"),
    bpe: Optional[Path] = typer.Option(None, "--bpe", help="BPE merge file"),
    discount: Optional[float] = typer.Option(None, "--discount", min=0, help="Cost removed from existing arcs"),
    boost_cost: Optional[float] = typer.Option(None, "--boost-cost", min=0, help="Cost of added arcs"),
    out: Path = typer.Option(..., "--out", help="Output g/ bundle"),
    report: Optional[Path] = typer.Option(None, "--report", help="Write the per-word JSON report here"),
):
    """Boost OOV subword sequences in a subword G."""
    from .commands.lm_commands import handle_mod_g
    handle_mod_g(ctx.obj, g=g, oov_list=oov_list, bpe=bpe, discount=discount,
                 boost_cost=boost_cost, out=out, report=report)


# --- subwords ----------------------------------------------------------------

@app.command("bpe-train")
def bpe_train(
    ctx: typer.Context,
    corpus: Path = typer.Option(..., "--corpus", help="Plain text or 'word<TAB>count' lines"),
    num_merges: Optional[int] = typer.Option(None, "--num-merges", min=0,
                                             help=f"Number of merges (default {DEFAULT_NUM_MERGES})"),
    marker: Optional[str] = typer.Option(None, "--marker", help="Word-final marker (default </w>)"),
    out: Path = typer.Option(..., "--out", help="Output merge file"),
):
    """Train BPE merges."""
    from .commands.bpe_commands import handle_bpe_train
    handle_bpe_train(ctx.obj, corpus=corpus, num_merges=num_merges, marker=marker, out=out)


@app.command("bpe-apply")
def bpe_apply(
    ctx: typer.Context,
    bpe: Optional[Path] = typer.Option(None, "--bpe", help="BPE merge file"),
    words: Optional[List[str]] = typer.Argument(None, help="Words to tokenize"),
    input: Optional[Path] = typer.Option(None, "--input", help="Text file to tokenize line by line"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write tokens here instead of stdout"),
    lexicon_out: Optional[Path] = typer.Option(None, "--lexicon-out",
                                               help="Also write the character lexicon of the tokens"),
):
    """Tokenize words into subwords."""
    from .commands.bpe_commands import handle_bpe_apply
    handle_bpe_apply(ctx.obj, bpe=bpe, words=words or [], input=input, out=out,
                     lexicon_out=lexicon_out)


# --- decoding graph ----------------------------------------------------------

@app.command("build-hclg")
def build_hclg(
    ctx: typer.Context,
    lang: Optional[Path] = typer.Option(None, "--lang", help="Input lang/ bundle"),
    g: Optional[Path] = typer.Option(None, "--g", help="Input g/ bundle"),
    transitions: Optional[Path] = typer.Option(None, "--transitions", help="'phone<TAB>tid' file (default: one per phone)"),
    self_loop_prob: Optional[float] = typer.Option(None, "--self-loop-prob", min=0, max=1,
                                                   help="HMM self-loop probability; 1.0 disables loops"),
    out: Path = typer.Option(Path("graph"), "--out", help="Output graph/ bundle"),
):
    """Compose a monophone HCLG."""
    from .commands.graph_commands import handle_build_hclg
    handle_build_hclg(ctx.obj, lang=lang, g=g, transitions=transitions,
                      self_loop_prob=self_loop_prob, out=out)


@app.command("mod-hclg")
def mod_hclg(
    ctx: typer.Context,
    graph: Optional[Path] = typer.Option(None, "--graph", help="Input graph/ bundle"),
    oov_lexicon: Optional[Path] = typer.Option(None, "--oov-lexicon", help="Lexicon of new words"),
    penalty: Optional[float] = typer.Option(None, "--penalty", min=0, help="Cost added on the [unk] redirect (default 2.3)"),
    out: Path = typer.Option(..., "--out", help="Output graph/ bundle"),
):
    """Point every [unk] arc of an HCLG at an HCL of the OOV words."""
    from .commands.graph_commands import handle_mod_hclg
    handle_mod_hclg(ctx.obj, graph=graph, oov_lexicon=oov_lexicon, penalty=penalty, out=out)


# --- fst utilities -----------------------------------------------------------

@app.command()
def compose(
    ctx: typer.Context,
    a: Path = typer.Argument(..., help="Left FST (AT&T text)"),
    b: Path = typer.Argument(..., help="Right FST (AT&T text)"),
    isyms: Path = typer.Option(..., "--isyms", help="Input symbols of A"),
    msyms: Path = typer.Option(..., "--msyms", help="Output symbols of A = input symbols of B"),
    osyms: Path = typer.Option(..., "--osyms", help="Output symbols of B"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the result here instead of stdout"),
):
    """Compose two text FSTs."""
    from .commands.fst_commands import handle_compose
    handle_compose(ctx.obj, a=a, b=b, isyms=isyms, msyms=msyms, osyms=osyms, out=out)


@app.command("shortest-path")
def shortest_path(
    ctx: typer.Context,
    fst: Path = typer.Argument(..., help="FST (AT&T text)"),
    isyms: Path = typer.Option(..., "--isyms", help="Input symbols"),
    osyms: Path = typer.Option(..., "--osyms", help="Output symbols"),
    json_out: bool = typer.Option(False, "--json", help="Print cost and label strings as JSON"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the path FST here instead of stdout"),
):
    """Best path of a text FST."""
    from .commands.fst_commands import handle_shortest_path
    handle_shortest_path(ctx.obj, fst=fst, isyms=isyms, osyms=osyms, json_out=json_out, out=out)


@app.command("extract-unk")
def extract_unk(
    ctx: typer.Context,
    fst: Path = typer.Argument(..., help="FST whose best path is searched (AT&T text)"),
    isyms: Path = typer.Option(..., "--isyms", help="Input symbols"),
    osyms: Path = typer.Option(..., "--osyms", help="Output symbols"),
    unk: Optional[str] = typer.Option(None, "--unk", help="Unknown-word symbol (default [unk])"),
    joiner: str = typer.Option(" ", "--joiner", help="Glue between span symbols; '' for a character lexicon"),
):
    """Print the input symbols recognised under each [unk] on the best path."""
    from .commands.fst_commands import handle_extract_unk
    handle_extract_unk(ctx.obj, fst=fst, isyms=isyms, osyms=osyms, unk=unk, joiner=joiner)


# --- evaluation --------------------------------------------------------------

@app.command()
def score(
    ctx: typer.Context,
    ref: Path = typer.Option(..., "--ref", help="'utt_id<TAB>transcript' reference"),
    hyp: Path = typer.Option(..., "--hyp", help="'utt_id<TAB>transcript' hypothesis"),
    oov_list: Optional[Path] = typer.Option(None, "--oov-list", help="One OOV word per line"),
    json_out: bool = typer.Option(False, "--json", help="Print the full JSON report"),
    out: Optional[Path] = typer.Option(None, "--out", help="Also write the JSON report here"),
):
    """WER, CER and OOV-CER. CER ignores the spaces between words."""
    from .commands.score_commands import handle_score
    handle_score(ctx.obj, ref=ref, hyp=hyp, oov_list=oov_list, json_out=json_out, out=out)


@app.command("make-split")
def make_split(
    ctx: typer.Context,
    manifest: Optional[Path] = typer.Option(None, "--manifest", help="'utt<TAB>spk<TAB>dur<TAB>text' lines"),
    vocab: Optional[Path] = typer.Option(None, "--vocab", help="Vocabulary (first column of each line)"),
    out: Path = typer.Option(Path("split"), "--out", help="Output directory"),
    normalize: bool = typer.Option(False, "--normalize", help="Lowercase and strip punctuation first"),
):
    """Split a manifest into a high-OOV test set and a speaker-disjoint train set."""
    from .commands.split_commands import handle_make_split
    handle_make_split(ctx.obj, manifest=manifest, vocab=vocab, out=out, normalize=normalize)


def run(argv: Optional[List[str]] = None) -> int:
    """Run the CLI in-process and return its exit status (0 ok, 1 domain error, 2 usage)."""
    try:
        app(args=argv, prog_name="oovkit")
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else 1
    return 0


def cli():
    """Entry point."""
    app()


if __name__ == "__main__":
    cli()
