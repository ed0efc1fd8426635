"""oovkit - weighted finite-state surgery for out-of-vocabulary words.

Build lexicon (L), grammar (G) and monophone decoding graphs (HCLG), then add
new words without retraining:
- word level: new pronunciations in L, every [unk] arc of G fanned out
- decoding-graph level: every [unk] arc of HCLG pointed at one shared HCL
- subword level: BPE sequences of new words boosted in a subword G
plus OOV-aware scoring (WER / CER / OOV-CER) and high-OOV dataset splits.
"""

__version__ = "0.3.0"

from dotenv import load_dotenv
from pathlib import Path as _Path

# OOVKIT_HOME / OOVKIT_LOG_LEVEL may live in the working directory's .env
load_dotenv(_Path.cwd() / ".env")

from .errors import OovkitError
from .symbols import SymbolTable, read_symbols, write_symbols
from .fst import Arc, Fst, LinearPath
from .fst_text import read_fst_text, write_fst_text
from .fst_ops import compose, connect, shortest_path, extract_unk_spans
from .lexicon import Lexicon, LGraph, parse_lexicon, build_l, add_words_to_l, splice_unk_lm
from .arpa import ArpaModel, parse_arpa
from .g_graph import GGraph, arpa_to_g, replace_unk_in_g, mod_lg, mod_g_subwords
from .bpe import BpeModel, train_bpe, tokenize, read_bpe, write_bpe
from .hclg import TransitionModel, DecodingGraph, build_hclg, mod_hclg
from .metrics import align, score, score_corpus
from .dataset_split import make_split, oov_report
from .config import BiasConfig, CliConfig, load_config
from .logger import Logger

__all__ = [
    "OovkitError",
    "SymbolTable",
    "read_symbols",
    "write_symbols",
    "Arc",
    "Fst",
    "LinearPath",
    "read_fst_text",
    "write_fst_text",
    "compose",
    "connect",
    "shortest_path",
    "extract_unk_spans",
    "Lexicon",
    "LGraph",
    "parse_lexicon",
    "build_l",
    "add_words_to_l",
    "splice_unk_lm",
    "ArpaModel",
    "parse_arpa",
    "GGraph",
    "arpa_to_g",
    "replace_unk_in_g",
    "mod_lg",
    "mod_g_subwords",
    "BpeModel",
    "train_bpe",
    "tokenize",
    "read_bpe",
    "write_bpe",
    "TransitionModel",
    "DecodingGraph",
    "build_hclg",
    "mod_hclg",
    "align",
    "score",
    "score_corpus",
    "make_split",
    "oov_report",
    "BiasConfig",
    "CliConfig",
    "load_config",
    "Logger",
]
