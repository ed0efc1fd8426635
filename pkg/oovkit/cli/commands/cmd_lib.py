"""
Purpose: Shared plumbing for CLI commands - global options, config resolution, run logging, error-to-exit-code mapping, atomic outputs
LLM-Note:
  Dependencies: imports from [contextlib, dataclasses, pathlib, typing, typer, config.py, console.py, errors.py, logger.py, storage.py] | imported by [every cli/commands/*_commands.py] | tested via tests/test_cli.py
  Data flow: main.py callback stores CliState (--config/--verbose/--quiet/--no-log) on the typer context → handler opens `with command_run(state, "build-g", args) as run:` → run.cfg (file values + flag overrides), run.logger, run.write(path, text) → success appends an "ok" run record; OovkitError/OSError print "error: <msg>" on stderr, record "error" and exit 1
  State/Effects: writes outputs atomically, run records under .oovkit/runs/, logs under .oovkit/logs/ (unless --no-log)
  Integration: exposes CliState, CommandRun, command_run(), require_path(), read_input()
  Errors: missing required paths raise typer.BadParameter (usage error, exit 2) | domain and I/O errors become exit 1 with a one-line diagnostic
"""

from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

import typer

from ...config import CliConfig, load_config
from ...console import level_from_env
from ...errors import OovkitError
from ...logger import Logger
from ...storage import atomic_write, read_text


@dataclass
class CliState:
    config_path: Optional[Path] = None
    verbose: bool = False
    quiet: bool = False
    no_log: bool = False


@dataclass
class CommandRun:
    cfg: CliConfig
    logger: Logger
    outputs: List[str] = field(default_factory=list)

    def write(self, path: Path, text: str) -> Path:
        atomic_write(path, text)
        self.outputs.append(str(path))
        self.logger.debug(f"wrote {path}")
        return path

    def wrote(self, path: Path) -> Path:
        """Record an output written by a storage helper (bundles)."""
        self.outputs.append(str(path))
        self.logger.info(f"[green]✓[/green] wrote {path}")
        return path


def _fail(message: str) -> None:
    typer.echo(f"error: {message}", err=True)
    raise typer.Exit(1)


@contextmanager
def command_run(
    state: Optional[CliState],
    command: str,
    arguments: Dict[str, Any],
    **overrides: Any,
) -> Iterator[CommandRun]:
    """Config + logger for one subcommand; maps domain errors to exit status 1."""
    state = state or CliState()
    try:
        cfg = load_config(state.config_path).merged(**overrides)
    except OovkitError as e:
        _fail(str(e))
    level = "debug" if state.verbose else level_from_env(cfg.log_level)
    logger = Logger(command, quiet=state.quiet, log=False if state.no_log else None, level=level)
    logger.start_run(command, arguments)
    run = CommandRun(cfg, logger)
    try:
        yield run
    except (OovkitError, OSError) as e:
        logger.finish_run("error", run.outputs, str(e))
        _fail(str(e))
    logger.finish_run("ok", run.outputs)


def require_path(value: Optional[Path], cfg: CliConfig, key: str) -> Path:
    """Flag value, else the [paths] entry in the config file, else a usage error."""
    path = value or cfg.path(key)
    if path is None:
        raise typer.BadParameter(f"missing --{key.replace('_', '-')} (or paths.{key} in config)")
    return Path(path)


def read_input(path: Path) -> str:
    return read_text(path)
