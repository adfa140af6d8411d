"""Run configuration.

Config files are TOML restricted to top-level ``key = value`` pairs::

    # comments start with '#'
    prime = 2147483647
    second_prime = 1073741789
    seed = 42
    max_size = 16

Unknown keys are rejected.  Command-line flags override file values.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .exact_core import DEFAULT_PRIME, SECOND_PRIME
from .pfaffian import MAX_SIZE


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    prime: int = DEFAULT_PRIME
    second_prime: int = SECOND_PRIME
    seed: int = 0
    max_size: int = MAX_SIZE

    @property
    def primes(self) -> tuple[int, int]:
        return (self.prime, self.second_prime)


def load_config(path: str | Path | None) -> Config:
    if path is None:
        return Config()
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    known = {f.name for f in fields(Config)}
    for key, value in data.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"config key {key!r} must be an integer")
    cfg = replace(Config(), **data)
    if cfg.max_size > MAX_SIZE:
        raise ConfigError(f"max_size cannot exceed {MAX_SIZE}")
    return cfg
