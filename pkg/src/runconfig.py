#!/usr/bin/env python3
"""Run configuration: CLI flags over environment defaults (.env via python-dotenv)."""

import json
import logging
import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from errors import ConfigError
from qalgebra import Algebra, AlgebraConfig, build_algebra, config_from_dict, homogeneous_config
from scalars import default_prime

load_dotenv()

logger = logging.getLogger(__name__)

FORMATS = ("json", "dot", "both")


def _env_int(name: str, default: Optional[int]) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigError(f"{name}={raw!r} is not an integer") from e


@dataclass
class RunConfig:
    algebra: Optional[str] = None  # path to a config JSON, or inline JSON
    seed: Optional[int] = None
    radius: int = 4
    decompose_retries: int = 16
    iso_trials: int = 32
    max_sequences: int = 64
    period_bound: int = 4
    out_dir: Optional[str] = None
    fmt: str = "both"
    cache_dir: Optional[str] = None
    use_cache: bool = True

    @classmethod
    def from_env(cls, **overrides) -> "RunConfig":
        cfg = cls(
            seed=_env_int("QCI_SEED", None),
            radius=_env_int("QCI_RADIUS", 4),
            decompose_retries=_env_int("QCI_DECOMPOSE_RETRIES", 16),
            iso_trials=_env_int("QCI_ISO_TRIALS", 32),
            max_sequences=_env_int("QCI_MAX_SEQUENCES", 64),
            period_bound=_env_int("QCI_PERIOD_BOUND", 4),
            cache_dir=os.getenv("QCI_CACHE_DIR") or None,
        )
        for k, v in overrides.items():
            if v is not None:
                setattr(cfg, k, v)
        return cfg

    def validate(self, need_seed: bool = True) -> "RunConfig":
        if need_seed and self.seed is None:
            raise ConfigError("a seed is required: pass --seed or set QCI_SEED")
        for name in ("radius", "decompose_retries", "iso_trials", "max_sequences", "period_bound"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.fmt!r}")
        return self

    def algebra_config(self) -> AlgebraConfig:
        if self.algebra is None:
            raise ConfigError("no algebra given: pass --config PATH or inline JSON")
        return load_algebra_config(self.algebra)

    def load_algebra(self) -> Algebra:
        return build_algebra(self.algebra_config())


def load_algebra_config(source: str) -> AlgebraConfig:
    """A path to a JSON file, inline JSON, or the shorthand "a,c[,p]"."""
    text = source.strip()
    if os.path.isfile(source):
        with open(source) as f:
            text = f.read()
    elif not text.startswith("{"):
        return _shorthand(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"algebra config is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError("algebra config must be a JSON object")
    if "p" not in data and "a" in data:
        data = dict(data, p=default_prime(int(data["a"])))
    return config_from_dict(data)


def _shorthand(text: str) -> AlgebraConfig:
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError as e:
        raise ConfigError(f"cannot read algebra {text!r}") from e
    if len(parts) not in (2, 3):
        raise ConfigError(f"shorthand algebra is 'a,c' or 'a,c,p', got {text!r}")
    a, c = parts[0], parts[1]
    p = parts[2] if len(parts) == 3 else default_prime(a)
    config = homogeneous_config(p, c, a)
    config.validate()
    return config
