"""
Purpose: Unified logging interface for graph-building runs - terminal output + plain text + YAML run records
LLM-Note:
  Dependencies: imports from [datetime, pathlib, typing, yaml, console.py] | imported by [cli/commands/cmd_lib.py, arpa.py, lexicon.py, g_graph.py, hclg.py] | tested by [tests/test_logger.py]
  Data flow: CLI handler creates Logger(command) → library functions call .info()/.warning()/.debug() with progress and skipped items → .record_step(name, stats) collects per-step statistics → .finish_run(status) appends one run entry to .oovkit/runs/{name}.yaml
  State/Effects: writes to .oovkit/runs/{name}.yaml (one file per command name, runs appended) | delegates file logging to Console (.oovkit/logs/{name}.log) | root directory overridable with OOVKIT_HOME
  Integration: exposes Logger(name, quiet, log, level), .print(), .debug(), .info(), .warning(), .error(), .record_step(), .start_run(), .finish_run(), .load_runs()
  Run format: name/created/updated at top → runs list (command, arguments, outputs, steps, status, duration_ms)
  Performance: YAML written once per run | Console delegation is a direct passthrough
  Errors: let I/O errors bubble up (no try-except)
"""

import os
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from .console import Console


def oovkit_home() -> Path:
    return Path(os.getenv("OOVKIT_HOME", ".oovkit"))


class Logger:
    """Terminal output + plain text log + YAML run records.

    Facade over Console. Run records use one file per command
    (.oovkit/runs/{name}.yaml); each invocation appends one entry.

    Args:
        name: Command or pipeline name (used in filenames)
        quiet: Suppress console output (run records are still written)
        log: False disables files, a path string overrides the log location
        level: Console threshold; defaults to OOVKIT_LOG_LEVEL

    Examples:
        logger = Logger("build-g")                 # see output + save everything
        logger = Logger("build-g", quiet=True)     # only the run record
        logger = Logger("build-g", log=False)      # nothing on disk
    """

    def __init__(
        self,
        name: str,
        quiet: bool = False,
        log: Union[bool, str, Path, None] = None,
        level: Optional[str] = None,
    ):
        self.name = name

        self.enable_console = not quiet
        self.enable_runs = True
        self.enable_file = True
        self.log_file_path = oovkit_home() / "logs" / f"{name}.log"

        if log is False:
            self.enable_file = False
            self.enable_runs = False
        elif isinstance(log, (str, Path)) and log:
            self.log_file_path = Path(log)

        if quiet:
            self.enable_file = False

        self.console = None
        if self.enable_console:
            file_path = self.log_file_path if self.enable_file else None
            self.console = Console(log_file=file_path, level=level)

        self.run_file: Optional[Path] = None
        self.run_data: Optional[Dict[str, Any]] = None
        self._steps: List[Dict[str, Any]] = []
        self._started: Optional[float] = None
        self.warnings = 0

    # Delegate to Console
    def print(self, message: str, style: str = None, level: str = "info"):
        if self.console:
            self.console.print(message, style, level)

    def debug(self, message: str):
        self.print(message, level="debug")

    def info(self, message: str):
        self.print(message, level="info")

    def warning(self, message: str):
        self.warnings += 1
        self.print(f"warning: {message}", level="warning")

    def error(self, message: str):
        self.print(f"error: {message}", level="error")

    def record_step(self, step: str, stats: Dict[str, Any]) -> None:
        """Keep per-step statistics for the run record and show them."""
        self._steps.append({"step": step, **stats})
        if self.console:
            self.console.print_stats(step, stats)

    # Run records (YAML)
    def start_run(self, command: str, arguments: Dict[str, Any]):
        """Open (or create) the run file and remember the invocation."""
        self._started = time.perf_counter()
        self._steps = []
        self._invocation = {
            "command": command,
            "arguments": {k: _plain(v) for k, v in arguments.items()},
        }
        if not self.enable_runs:
            return

        runs_dir = oovkit_home() / "runs"
        runs_dir.mkdir(parents=True, exist_ok=True)
        self.run_file = runs_dir / f"{self.name}.yaml"

        if self.run_file.exists():
            with open(self.run_file, 'r', encoding='utf-8') as f:
                self.run_data = yaml.safe_load(f) or {}
            self.run_data.setdefault('name', self.name)
            self.run_data.setdefault('created', datetime.now().strftime("%Y-%m-%d %H:%M:%S"))
            self.run_data.setdefault('runs', [])
        else:
            self.run_data = {
                "name": self.name,
                "created": datetime.now().strftime("%Y-%m-%d %H:%M:%S"),
                "runs": [],
            }

    def finish_run(self, status: str = "ok", outputs: Optional[List[str]] = None, error: str = ""):
        if not self.enable_runs or self.run_data is None:
            return
        duration_ms = (time.perf_counter() - self._started) * 1000 if self._started else 0.0
        entry = dict(self._invocation)
        entry.update({
            "outputs": [str(p) for p in outputs or []],
            "steps": [{k: _plain(v) for k, v in s.items()} for s in self._steps],
            "warnings": self.warnings,
            "status": status,
            "duration_ms": int(duration_ms),
            "timestamp": datetime.now().strftime("%Y-%m-%d %H:%M:%S"),
        })
        if error:
            entry["error"] = error
        self.run_data['updated'] = entry["timestamp"]
        self.run_data['runs'].append(entry)
        self._write_runs()

    def _write_runs(self):
        ordered = {
            'name': self.run_data['name'],
            'created': self.run_data['created'],
            'updated': self.run_data.get('updated', ''),
            'runs': self.run_data['runs'],
        }
        with open(self.run_file, 'w', encoding='utf-8') as f:
            yaml.dump(ordered, f, default_flow_style=False, allow_unicode=True, sort_keys=False)

    def load_runs(self) -> List[Dict[str, Any]]:
        if not self.run_file or not self.run_file.exists():
            return []
        with open(self.run_file, 'r', encoding='utf-8') as f:
            return (yaml.safe_load(f) or {}).get('runs', [])


def _plain(value: Any) -> Any:
    """YAML-safe rendering of CLI argument values."""
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, float) and value != value:
        return None
    return value
