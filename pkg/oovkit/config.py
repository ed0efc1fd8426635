"""
Purpose: Validated tunables for the biasing surgeries and the CLI, loaded from TOML
LLM-Note:
  Dependencies: imports from [pathlib, typing, toml, pydantic, errors.py, logger.py] | imported by [g_graph.py, hclg.py, cli/commands/cmd_lib.py] | tested by [tests/test_config.py]
  Data flow: load_config(path) → reads --config PATH or .oovkit/config.toml (top-level keys plus an optional [paths] table) → CliConfig | CliConfig.bias() → BiasConfig handed to replace_unk_in_g / mod_g_subwords / mod_hclg | CLI flags override via CliConfig.merged(**flags)
  State/Effects: reads one file, no writes
  Integration: exposes BiasConfig, CliConfig, load_config(), DEFAULT_PENALTY, DEFAULT_NUM_MERGES
  Errors: OovkitError for unknown keys, unparsable TOML or out-of-range values (pydantic ValidationError is re-raised as a one-line OovkitError)
"""

from pathlib import Path
from typing import Any, Dict, Optional, Union

import toml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import OovkitError
from .logger import oovkit_home

# -ln(0.1) rounded: multiplying the [unk] probability by about 0.1.
DEFAULT_PENALTY = 2.3
DEFAULT_DISCOUNT = 0.5
DEFAULT_BOOST_COST = 0.1
DEFAULT_NUM_MERGES = 5000


class BiasConfig(BaseModel):
    """Costs in nats used by the [unk] replacement and subword boosting surgeries."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    penalty: float = Field(default=DEFAULT_PENALTY, ge=0)
    boost_cost: float = Field(default=DEFAULT_BOOST_COST, ge=0)
    discount: float = Field(default=DEFAULT_DISCOUNT, ge=0)


class CliConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    penalty: float = Field(default=DEFAULT_PENALTY, ge=0)
    discount: float = Field(default=DEFAULT_DISCOUNT, ge=0)
    boost_cost: float = Field(default=DEFAULT_BOOST_COST, ge=0)
    num_merges: int = Field(default=DEFAULT_NUM_MERGES, ge=0)
    self_loop_prob: float = Field(default=1.0, ge=0, le=1)
    unk_symbol: str = "[unk]"
    junk_phone: str = "jnk"
    marker: str = "</w>"
    log_level: str = "info"
    # Default locations for path options, keyed by option name ("lang", "g", "arpa", ...).
    paths: Dict[str, str] = Field(default_factory=dict)

    def bias(self) -> BiasConfig:
        return BiasConfig(penalty=self.penalty, boost_cost=self.boost_cost, discount=self.discount)

    def merged(self, **overrides: Any) -> "CliConfig":
        """Copy with every non-None override applied (CLI flags beat file values)."""
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return _validated(values, "command line")

    def path(self, key: str) -> Optional[Path]:
        value = self.paths.get(key)
        return Path(value) if value else None


def _validated(values: Dict[str, Any], source: str) -> CliConfig:
    try:
        return CliConfig(**values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise OovkitError(f"invalid configuration in {source}: {problems}") from None


def load_config(path: Union[str, Path, None] = None) -> CliConfig:
    """Load config from PATH, else .oovkit/config.toml, else defaults."""
    config_path = Path(path) if path else oovkit_home() / "config.toml"
    if not config_path.exists():
        if path:
            raise OovkitError(f"config file not found: {config_path}")
        return CliConfig()
    try:
        values = toml.load(config_path)
    except toml.TomlDecodeError as e:
        raise OovkitError(f"cannot parse {config_path}: {e}") from None
    return _validated(values, str(config_path))
