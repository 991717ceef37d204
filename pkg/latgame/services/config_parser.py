"""Parser for `key = value` experiment configuration files."""
import logging
import math
import os
import re
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Union

from pydantic import ValidationError

from latgame.config import settings
from latgame.core.lattice_rules import derive_params
from latgame.exceptions import ArtifactError, ConfigParseError
from latgame.models.experiment import REQUIRED_KEYS, ExperimentConfig, ExperimentMode
from latgame.models.lattice import GameParams


logger = logging.getLogger(__name__)

_SEPARATORS = re.compile(r"[,\s]+")


def _number(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"{text!r} is not a finite number")
    return value


def _integer(text: str) -> int:
    return int(text, 10)


def _items(text: str) -> List[str]:
    stripped = text.strip().strip("()[]")
    return [item for item in _SEPARATORS.split(stripped) if item]


def _integers(text: str) -> List[int]:
    return [_integer(item) for item in _items(text)]


def _numbers(text: str) -> List[float]:
    return [_number(item) for item in _items(text)]


def _string(text: str) -> str:
    return text.strip().strip('"').strip("'")


_CONVERTERS: Dict[str, Callable[[str], object]] = {
    "mode": _string,
    "d": _integer,
    "sides": _integers,
    "a1": _number,
    "a2": _number,
    "payoff": _numbers,
    "p": _number,
    "t_max": _number,
    "record_every": _number,
    "seeds": _integer,
    "master_seed": _integer,
    "snapshot_every": _number,
    "output_dir": _string,
    "workers": _integer,
    "scheme": _string,
    "m": _integer,
    "q_values": _numbers,
    "bootstrap_sides": _integers,
    "u0": _number,
    "dt": _number,
    "densities": _numbers,
    "resume_from": _string,
}


def parse_config(text: str, env: Optional[Mapping[str, str]] = None) -> ExperimentConfig:
    """Parse and validate an experiment configuration.

    Args:
        text: One `key = value` per line; `#` starts a comment.
        env: Environment used for the seed override. If None, use os.environ.

    Returns:
        Validated ExperimentConfig.

    Raises:
        ConfigParseError: on syntax errors, unknown or duplicate keys, bad
            values, or missing required keys (line 0).
    """
    env = os.environ if env is None else env
    values: Dict[str, object] = {}
    lines: Dict[str, int] = {}

    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigParseError(f"expected 'key = value', got {content!r}", number)
        key, _, value = content.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key not in _CONVERTERS:
            raise ConfigParseError(f"unknown key {key!r}", number)
        if key in values:
            raise ConfigParseError(f"duplicate key {key!r} (first set on line {lines[key]})", number)
        if not value:
            raise ConfigParseError(f"key {key!r} has no value", number)
        try:
            values[key] = _CONVERTERS[key](value)
        except ValueError as e:
            raise ConfigParseError(f"bad value for {key!r}: {e}", number)
        lines[key] = number

    override = env.get(settings.SEED_ENV_VAR)
    if override:
        try:
            values["master_seed"] = _integer(override.strip())
        except ValueError:
            raise ConfigParseError(f"{settings.SEED_ENV_VAR}={override!r} is not an integer")
        logger.info("master_seed overridden by %s=%s", settings.SEED_ENV_VAR, override)

    if "mode" not in values:
        raise ConfigParseError("missing required key 'mode'")
    try:
        mode = ExperimentMode(values["mode"])
    except ValueError:
        choices = ", ".join(m.value for m in ExperimentMode)
        raise ConfigParseError(f"unknown mode {values['mode']!r} (expected one of {choices})", lines["mode"])

    for key in REQUIRED_KEYS[mode]:
        if key == "params":
            if "payoff" not in values and not ("a1" in values and "a2" in values):
                raise ConfigParseError(f"mode {mode.value} requires a1 and a2, or payoff")
        elif key not in values:
            raise ConfigParseError(f"missing required key {key!r} for mode {mode.value}")

    try:
        return ExperimentConfig(**values)
    except ValidationError as e:
        error = e.errors()[0]
        key = str(error["loc"][0]) if error["loc"] else ""
        raise ConfigParseError(f"{key + ': ' if key else ''}{error['msg']}", lines.get(key, 0))


def read_config_text(path: Union[str, Path]) -> str:
    """Config file contents decoded as UTF-8."""
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ConfigParseError(f"{path} is not valid UTF-8 (byte {e.start})")
    except OSError as e:
        raise ArtifactError(f"cannot read config: {e.strerror}", str(path))


def load_config(path: Union[str, Path], env: Optional[Mapping[str, str]] = None) -> ExperimentConfig:
    """Read a config file as UTF-8 and parse it."""
    return parse_config(read_config_text(path), env)


def resolve_params(config: ExperimentConfig) -> GameParams:
    """(a1, a2) of a config, derived from the payoff matrix when one is given."""
    if config.payoff_matrix is not None:
        return derive_params(config.payoff_matrix)
    if config.direct_params is None:
        raise ConfigParseError(f"mode {config.mode.value} requires a1 and a2, or payoff")
    return config.direct_params
