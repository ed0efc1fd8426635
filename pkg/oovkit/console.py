"""
Purpose: Terminal progress output with Rich formatting, verbosity levels and an optional plain-text log file
LLM-Note:
  Dependencies: imports from [os, re, datetime, pathlib, typing, rich.console, rich.table] | imported by [logger.py] | tested by [tests/test_logger.py]
  Data flow: receives from Logger → .print(message, level) → level below threshold is dropped → "[dim]HH:MM:SS[/dim] message" to stderr via RichConsole → optionally appended to log_file as plain text
  State/Effects: writes to stderr (stdout carries command results such as FST text or JSON reports) | writes to log_file if provided | creates log file parent directories | appends a run separator on init
  Integration: exposes Console(log_file, level), .print(message, style, level), .print_stats(title, stats), level_from_env() | levels: debug < info < warning < error
  Performance: direct stderr writes | regex-based markup removal for log files
  Errors: no error handling (I/O errors bubble up) | unknown level names fall back to "info"
"""

import os
import re
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

from rich.console import Console as RichConsole
from rich.table import Table

# stderr so progress never mixes with piped results
_rich_console = RichConsole(stderr=True)

LEVELS = {"debug": 10, "info": 20, "warning": 30, "error": 40}

_LEVEL_STYLES = {"warning": "yellow", "error": "red"}


def level_from_env(default: str = "info") -> str:
    level = os.getenv("OOVKIT_LOG_LEVEL", default).strip().lower()
    return level if level in LEVELS else default


class Console:
    """Console for progress output and optional file logging."""

    def __init__(self, log_file: Optional[Path] = None, level: Optional[str] = None):
        self.log_file = log_file
        self.level = level if level in LEVELS else level_from_env()

        if self.log_file:
            self._init_log_file()

    def _init_log_file(self):
        if self.log_file.parent != Path('.'):
            self.log_file.parent.mkdir(parents=True, exist_ok=True)

        with open(self.log_file, 'a', encoding='utf-8') as f:
            f.write(f"\n{'='*60}\n")
            f.write(f"Run started: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")
            f.write(f"{'='*60}\n\n")

    def enabled(self, level: str) -> bool:
        return LEVELS.get(level, LEVELS["info"]) >= LEVELS[self.level]

    def print(self, message: str, style: str = None, level: str = "info"):
        """Print a timestamped line to stderr and the log file.

        Args:
            message: The message (can include Rich markup for console)
            style: Additional Rich style for console only
            level: debug, info, warning or error
        """
        if not self.enabled(level):
            return
        timestamp = datetime.now().strftime("%H:%M:%S")

        formatted = f"[dim]{timestamp}[/dim] {message}"
        style = style or _LEVEL_STYLES.get(level)
        if style:
            _rich_console.print(formatted, style=style)
        else:
            _rich_console.print(formatted)

        if self.log_file:
            plain = self._to_plain_text(message)
            tag = f"{level.upper()} " if level != "info" else ""
            with open(self.log_file, 'a', encoding='utf-8') as f:
                f.write(f"[{timestamp}] {tag}{plain}\n")

    def print_stats(self, title: str, stats: Dict[str, Any]) -> None:
        """Two-column table of step statistics (state/arc counts, ratios)."""
        if not self.enabled("info") or not stats:
            return
        table = Table(show_header=False, box=None, padding=(0, 1), title=title, title_justify="left")
        table.add_column("Key", style="dim")
        table.add_column("Value")
        for k, v in stats.items():
            table.add_row(k, _format_value(v))
        _rich_console.print(table)

        if self.log_file:
            with open(self.log_file, 'a', encoding='utf-8') as f:
                f.write(f"{title}\n")
                for k, v in stats.items():
                    f.write(f"  {k}: {_format_value(v)}\n")

    def _to_plain_text(self, message: str) -> str:
        """Convert Rich markup to plain text for log file."""
        text = re.sub(r'\[/?[a-z][\w ]*\]', '', message)

        text = text.replace('→', '->')
        text = text.replace('←', '<-')
        text = text.replace('✓', '[OK]')
        text = text.replace('✗', '[ERROR]')

        return text


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)
