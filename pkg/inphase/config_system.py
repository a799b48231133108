# inphase/config_system.py
import logging
import os
from pathlib import Path
from typing import Dict, Iterable, List, Literal, Mapping, Optional

# Attempt to import pathspec, provide guidance if missing
try:
    import pathspec
except ImportError:
    print("Error: 'pathspec' library not found.")
    print("Please install it: pip install pathspec")
    raise

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from inphase.exceptions import ConfigError

logger = logging.getLogger("inphase.config_system")
if not logger.handlers and not logging.getLogger().handlers:
    logging.basicConfig(level=logging.INFO, format='%(levelname)s:%(name)s:%(message)s')

# --- Constants ---
CONFIG_ENV_VAR = "INPHASE_CONFIG"


class NumericsConfig(BaseModel):
    """Numerical knobs shared by the library, CLI and server."""
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    cutoff: int = Field(default=128, ge=1, le=1024, description="Fock-space cutoff (highest retained number state).")
    line_extent: float = Field(default=12.0, gt=0, description="Half-length L of eigenstate line superpositions.")
    line_samples: int = Field(default=2001, ge=2, description="Trapezoid samples along a line.")
    circle_samples: int = Field(default=500, ge=8, description="Uniform angles around a circle.")
    table_points: int = Field(default=512, ge=2, description="Grid points per RMSE table row.")
    endpoints: Literal["inclusive", "open"] = "inclusive"
    table_range: Literal["caption", "text"] = "caption"
    workers: int = Field(default=1, ge=1, le=64)
    quad_tolerance: float = Field(default=1e-10, gt=0)
    quad_max_nodes: int = Field(default=1024, ge=32, le=4096)

    def with_overrides(self, overrides: Mapping[str, object]) -> "NumericsConfig":
        """Returns a validated copy with the non-None overrides applied."""
        updates = {key: value for key, value in overrides.items() if value is not None}
        if not updates:
            return self
        try:
            return NumericsConfig(**{**self.model_dump(), **updates})
        except ValidationError as e:
            raise ConfigError("command-line parameters", _summarize_validation(e)) from e


def _summarize_validation(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(piece) for piece in item.get("loc", ()))
        parts.append(f"{location}: {item.get('msg')}")
    return "; ".join(parts)


def load_rules_from_file(file_path: Path) -> List[str]:
    """
    Reads lines from a given file path.
    Returns an empty list if the file doesn't exist or cannot be read.
    """
    if not file_path.is_file():
        logger.debug(f"Config file not found: {file_path}")
        return []
    try:
        lines = file_path.read_text(encoding='utf-8', errors='ignore').splitlines()
        logger.debug(f"Read {len(lines)} lines from {file_path}")
        return lines
    except Exception as e:
        logger.warning(f"Could not read config file {file_path}: {e}")
        return []


def parse_config_lines(lines: Iterable[str], source: str = "config lines") -> Dict[str, str]:
    """Parses 'key = value' lines; '#' starts a comment, blank lines are skipped."""
    values: Dict[str, str] = {}
    known = set(NumericsConfig.model_fields)
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(source, f"line {number}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ConfigError(source, f"line {number}: unknown key {key!r} (known: {', '.join(sorted(known))})")
        if not value:
            raise ConfigError(source, f"line {number}: empty value for {key!r}")
        if key in values:
            logger.warning(f"{source} line {number}: {key!r} set more than once; last value wins.")
        values[key] = value
    return values


def load_config(config_path: Optional[Path] = None, overrides: Optional[Mapping[str, object]] = None) -> NumericsConfig:
    """
    Builds the effective configuration.

    Precedence: overrides (CLI flags) > config file > model defaults. The file
    is config_path if given, else the path named by INPHASE_CONFIG, if any.
    """
    source_path = config_path
    if source_path is None and os.environ.get(CONFIG_ENV_VAR):
        source_path = Path(os.environ[CONFIG_ENV_VAR])
        logger.debug(f"Using config file from {CONFIG_ENV_VAR}: {source_path}")

    file_values: Dict[str, str] = {}
    if source_path is not None:
        if not source_path.is_file():
            raise ConfigError(str(source_path), "file does not exist")
        file_values = parse_config_lines(load_rules_from_file(source_path), source=str(source_path))

    try:
        config = NumericsConfig(**file_values)
    except ValidationError as e:
        raise ConfigError(str(source_path), _summarize_validation(e)) from e

    config = config.with_overrides(overrides or {})
    logger.debug(f"Effective configuration: {config.model_dump()}")
    return config


def compile_check_selector(patterns: Iterable[str], source_description: str = "check patterns") -> pathspec.PathSpec:
    """
    Compiles gitwildmatch patterns over check names like 'exact/squeeze_oracle'.

    A '!' prefix excludes. When only exclusions are given, everything is
    included first so that the exclusions have something to subtract from.
    """
    valid_lines = [line.strip() for line in patterns if line.strip() and not line.strip().startswith('#')]
    if valid_lines and all(line.startswith("!") for line in valid_lines):
        valid_lines.insert(0, "*")
    if not valid_lines:
        valid_lines = ["*"]
    try:
        spec = pathspec.PathSpec.from_lines('gitwildmatch', valid_lines)
    except Exception as e:
        raise ConfigError(source_description, f"could not compile patterns {valid_lines}: {e}") from e
    logger.debug(f"Compiled check selector from {source_description} with {len(spec.patterns)} patterns.")
    return spec
