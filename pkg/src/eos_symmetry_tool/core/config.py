# -*- coding: utf-8 -*-
"""
Configuration module
Default bounds and caps, overridable from the environment and the CLI.
"""

import logging
import os
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

DEFAULT_MAX_STATES = 100_000
DEFAULT_MODE_CAP = 10_000
DEFAULT_GROUP_CAP = 10_000
DEFAULT_LABEL_CAP = 10_000
DEFAULT_WORKERS = 1
DEFAULT_LOG_LEVEL = 'WARNING'
DEFAULT_LANG = 'en'

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

ENV_PREFIX = 'EOS_TOOL_'


@dataclass(frozen=True)
class ModeCaps:
    """Caps for mode enumeration (per event)"""

    max_lambda: int = DEFAULT_MODE_CAP
    max_distributions: int = DEFAULT_MODE_CAP
    # keep one mode per projection-equivalence class of (lambda, rho)
    collapse_projection: bool = False


@dataclass(frozen=True)
class Bounds:
    """Exploration bounds"""

    max_states: int = DEFAULT_MAX_STATES
    max_depth: Optional[int] = None
    mode_caps: ModeCaps = field(default_factory=ModeCaps)
    keep_modes: bool = False
    workers: int = DEFAULT_WORKERS

    def with_overrides(self, **changes) -> 'Bounds':
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


@dataclass(frozen=True)
class Settings:
    """Process-wide settings resolved from defaults and environment"""

    bounds: Bounds = field(default_factory=Bounds)
    group_cap: int = DEFAULT_GROUP_CAP
    label_cap: int = DEFAULT_LABEL_CAP
    log_level: str = DEFAULT_LOG_LEVEL
    language: str = DEFAULT_LANG

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> 'Settings':
        env = os.environ if environ is None else environ

        def number(name, default):
            raw = env.get(ENV_PREFIX + name)
            if raw is None or not raw.strip():
                return default
            try:
                value = int(raw)
            except ValueError:
                logging.getLogger('Settings').warning("ignoring %s%s=%r (not an integer)", ENV_PREFIX, name, raw)
                return default
            return value if value > 0 else default

        mode_cap = number('MODE_CAP', DEFAULT_MODE_CAP)
        bounds = Bounds(
            max_states=number('MAX_STATES', DEFAULT_MAX_STATES),
            mode_caps=ModeCaps(max_lambda=mode_cap, max_distributions=mode_cap),
            workers=number('WORKERS', DEFAULT_WORKERS),
        )
        return cls(
            bounds=bounds,
            group_cap=number('GROUP_CAP', DEFAULT_GROUP_CAP),
            label_cap=number('LABEL_CAP', DEFAULT_LABEL_CAP),
            log_level=env.get(ENV_PREFIX + 'LOG_LEVEL', DEFAULT_LOG_LEVEL).upper(),
            language=env.get(ENV_PREFIX + 'LANG', DEFAULT_LANG),
        )


def configure_logging(level: str = DEFAULT_LOG_LEVEL):
    """Route all toolkit loggers to stderr with the shared format"""
    root = logging.getLogger('eos_symmetry_tool')
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
    root.setLevel(getattr(logging, str(level).upper(), logging.WARNING))
    root.propagate = False
    return root


def get_logger(name: str) -> logging.Logger:
    """Named child logger of the toolkit root logger"""
    return logging.getLogger(f'eos_symmetry_tool.{name}')
