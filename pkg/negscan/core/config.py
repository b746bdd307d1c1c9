"""
Configuration settings for the negation scanner.

`Settings` carries process-wide defaults (environment variables with the
NEGSCAN_ prefix, or a .env file). `RunConfig` describes one CLI run and is
loaded from a JSON config file with command-line overrides on top.
"""

import json
import os
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from negscan.core.exceptions import ConfigError
from negscan.models.data_models import OverlapPolicy

logger = logging.getLogger(__name__)

PACKAGE_DIR = Path(__file__).resolve().parent.parent
DATA_DIR = PACKAGE_DIR / "data"

# Double-parenthesized annotations, the "(...)" ellipsis token, and stray
# written punctuation. "?" "/" "-" and apostrophes are kept.
DEFAULT_MARKERS = [
    r"\(\([^)]*\)\)",
    r"\(\.\.\.\)",
    r"[.,;:!\"“”«»()\[\]{}…]",
]


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="NEGSCAN_",
        case_sensitive=False,
        extra="ignore",
    )

    project_name: str = "negscan"
    version: str = "1.0.0"
    log_level: str = "INFO"
    patterns_path: Path = DATA_DIR / "patterns" / "neg_table1.json"
    lexicon_path: Path = DATA_DIR / "verb_lexicon.tsv"
    suffixes_path: Path = DATA_DIR / "verb_suffixes.txt"
    markers: List[str] = Field(default_factory=lambda: list(DEFAULT_MARKERS))
    context_window: int = 5
    policy: OverlapPolicy = OverlapPolicy.LONGEST


settings = Settings()


class RunConfig(BaseModel):
    """Configuration of a single CLI run."""

    model_config = ConfigDict(extra="forbid")

    input: Optional[Path] = None
    conllu: Optional[Path] = None
    patterns: Path = settings.patterns_path
    policy: OverlapPolicy = settings.policy
    max_gap: Optional[int] = Field(None, ge=0)
    variants: bool = False
    context: int = Field(settings.context_window, ge=0)
    out: Optional[Path] = None
    lexicon: Path = settings.lexicon_path
    markers: List[str] = Field(default_factory=lambda: list(settings.markers))
    jobs: int = Field(1, ge=1)
    json_output: bool = False

    def input_mode(self) -> Tuple[str, Path]:
        """
        Return the selected input mode and its directory.

        Returns:
            ("transcripts", path) or ("conllu", path).

        Raises:
            ConfigError: If zero or both input modes are set.
        """
        if (self.input is None) == (self.conllu is None):
            raise ConfigError("exactly one of --input or --conllu must be given")
        if self.input is not None:
            return "transcripts", self.input
        return "conllu", self.conllu

    def prepare_output_dir(self) -> Path:
        """Create the output directory if needed and check it is writable."""
        if self.out is None:
            raise ConfigError("--out is required")
        try:
            self.out.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ConfigError(f"cannot create output directory {self.out}: {e}")
        if not os.access(self.out, os.W_OK):
            raise ConfigError(f"output directory {self.out} is not writable")
        return self.out


def load_run_config(config_path: Optional[Path], overrides: Dict[str, Any]) -> RunConfig:
    """
    Build a RunConfig from an optional JSON file and command-line overrides.

    Args:
        config_path: JSON config file, or None.
        overrides: Flag values; entries that are None (flag not given) are ignored.

    Returns:
        The validated run configuration.
    """
    values: Dict[str, Any] = {}
    if config_path is not None:
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                values = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config file {config_path}: {e}")
        if not isinstance(values, dict):
            raise ConfigError(f"config file {config_path} must hold a JSON object")
        logger.info(f"Loaded run config from {config_path}")

    values.update({key: value for key, value in overrides.items() if value is not None})

    try:
        return RunConfig.model_validate(values)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {e}")
