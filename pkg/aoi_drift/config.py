"""
Configuration files for the aoi_drift command line.

A configuration file holds flat ``key = value`` lines. Keys are the
destination names of a subcommand's flags (``ps``, ``slots``, ``K``, ...);
blank lines and lines starting with ``#`` are ignored. Values become the
subcommand's defaults, so flags given on the command line still win.
"""

import argparse
import logging
from collections.abc import Mapping
from typing import Any

from .errors import ConfigError

logger = logging.getLogger(__name__)

TRUE_VALUES = frozenset({"1", "true", "yes", "on"})
FALSE_VALUES = frozenset({"0", "false", "no", "off"})

# Keys that only make sense on the command line itself.
RESERVED_KEYS = frozenset({"help", "config"})


def load_config(path: str) -> dict[str, str]:
    """
    Read a ``key = value`` file.

    Dashes in keys are read as underscores, so ``aoi-init`` and ``aoi_init``
    name the same setting.

    Raises:
        ConfigError: A line without ``=``, an empty key or a repeated key.
        OSError: The file cannot be read.
    """
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as stream:
        for number, line in enumerate(stream, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"expected 'key = value', got '{line}'", path, number)
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if not key:
                raise ConfigError("empty key", path, number)
            if key in values:
                raise ConfigError(f"key '{key}' given twice", path, number)
            values[key] = value
    logger.debug(f"loaded {len(values)} settings from {path}")
    return values


class ConfigKeys:
    """
    Flags of one parser that a config file may set, keyed by destination.

    Flags are registered while the parser is built; keys inherited from
    parent parsers are passed to the constructor.
    """

    def __init__(self, *parents: "ConfigKeys"):
        self.actions: dict[str, list[argparse.Action]] = {}
        self.counted: set[str] = set()
        for parent in parents:
            for dest, actions in parent.actions.items():
                self.actions.setdefault(dest, []).extend(actions)
            self.counted |= parent.counted

    def add(self, container: Any, *flags: str, **kwargs: Any) -> argparse.Action:
        """Add a flag to ``container`` (a parser or group) and register it."""
        action = container.add_argument(*flags, **kwargs)
        if action.dest not in RESERVED_KEYS:
            self.actions.setdefault(action.dest, []).append(action)
            if kwargs.get("action") == "count":
                self.counted.add(action.dest)
        return action

    def __contains__(self, key: str) -> bool:
        return key in self.actions


def _convert(
    parser: argparse.ArgumentParser, keys: ConfigKeys, key: str, raw: str
) -> object:
    actions = keys.actions[key]
    action = actions[0]
    if action.nargs == 0:
        if key in keys.counted:
            try:
                return int(raw)
            except ValueError:
                parser.error(f"config key '{key}' expects an integer, got '{raw}'")
        if isinstance(action.const, bool):
            if raw.lower() in TRUE_VALUES:
                return action.const
            if raw.lower() in FALSE_VALUES:
                return not action.const
            parser.error(f"config key '{key}' expects true or false, got '{raw}'")
        consts = [str(a.const) for a in actions]
        if raw not in consts:
            parser.error(f"config key '{key}' expects one of {', '.join(consts)}, got '{raw}'")
        return raw

    value: object = raw
    if action.type is not None:
        try:
            value = action.type(raw)  # type: ignore[operator]
        except (TypeError, ValueError):
            parser.error(f"config key '{key}': invalid value '{raw}'")
    if action.choices is not None and value not in action.choices:
        choices = ", ".join(str(choice) for choice in action.choices)
        parser.error(f"config key '{key}': '{raw}' is not one of {choices}")
    return value


def apply_config(
    parser: argparse.ArgumentParser, keys: ConfigKeys, values: Mapping[str, str], path: str
) -> None:
    """
    Install config values as defaults of ``parser``.

    Values are converted with the flag's own type and checked against its
    choices. An unknown key or a bad value is a usage error: ``parser.error``
    exits with status 2.
    """
    defaults = {}
    for key, raw in values.items():
        if key not in keys:
            parser.error(f"unknown key '{key}' in config file {path}")
        defaults[key] = _convert(parser, keys, key, raw)
    parser.set_defaults(**defaults)
