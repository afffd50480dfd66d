"""Configuration manager for workbench runs.

Configuration files are flat ``key = value`` text. Keys mirror the long CLI
flags (``max-iters`` and ``max_iters`` are the same key); ``#`` starts a
comment. Values are coerced to the type of the key.
"""

import logging
from pathlib import Path
from typing import Any

from core.constants import (
    ALL_DECODERS,
    DECODER_L2BOX,
    DEFAULT_BATCH_SIZE,
    DEFAULT_CODE,
    DEFAULT_LOG_LEVEL,
    DEFAULT_MAX_TRIALS,
    DEFAULT_SEED,
    DEFAULT_SNR_DB,
    DEFAULT_STOP_WORD_ERRORS,
    DEFAULT_THREADS,
)
from core.exceptions import ParameterError

logger = logging.getLogger(__name__)

# key -> (type, default); None defaults defer to the decoder plugin's config.json
CONFIG_SCHEMA: dict[str, tuple[type, Any]] = {
    "code": (str, DEFAULT_CODE),
    "decoder": (str, DECODER_L2BOX),
    "decoders": (str, ",".join(ALL_DECODERS)),
    "snr": (str, str(DEFAULT_SNR_DB)),
    "sweep": (str, "snr"),
    "grid": (str, "0.25:0.25:5"),
    "mu1_grid": (str, "10,50,200"),
    "mu2_grid": (str, "10,50,200"),
    "alpha": (float, None),
    "mu1": (float, None),
    "mu2": (float, None),
    "epsilon": (float, None),
    "max_iters": (int, None),
    "normalization": (float, None),
    "llr_clip": (float, None),
    "errors": (int, DEFAULT_STOP_WORD_ERRORS),
    "trials": (int, DEFAULT_MAX_TRIALS),
    "seed": (int, DEFAULT_SEED),
    "transmit": (str, "zero"),
    "threads": (int, DEFAULT_THREADS),
    "batch_size": (int, DEFAULT_BATCH_SIZE),
    "out": (str, ""),
    "format": (str, "csv"),
    "log_level": (str, DEFAULT_LOG_LEVEL),
}


def normalize_key(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_")


def coerce_value(key: str, value: Any) -> Any:
    """Convert ``value`` to the schema type of ``key``.

    Raises:
        ParameterError: unknown key or unconvertible value.
    """
    if key not in CONFIG_SCHEMA:
        raise ParameterError(f"unknown configuration key: {key}")
    kind, _ = CONFIG_SCHEMA[key]
    if value is None or (isinstance(value, str) and value.strip() == "" and kind is not str):
        return None
    try:
        if kind is int and isinstance(value, str):
            return int(value.strip(), 0)
        return kind(value.strip() if isinstance(value, str) else value)
    except (TypeError, ValueError):
        raise ParameterError(f"invalid value for {key}: {value!r}") from None


class ConfigManager:
    """Manages run configuration: defaults < config file < explicit overrides."""

    def __init__(self, config_path: Path | None = None):
        self.config_path = config_path
        self._config: dict[str, Any] = {}
        self._defaults: dict[str, Any] = {key: default for key, (_, default) in CONFIG_SCHEMA.items()}

    def load(self) -> dict[str, Any]:
        """Load configuration from file, if one was given.

        Raises:
            FileNotFoundError: the configured file does not exist.
            ParameterError: a line is malformed or names an unknown key.
        """
        self._config = {}
        if self.config_path is None:
            return self.as_dict()

        text = self.config_path.read_text(encoding="utf-8")
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{self.config_path.name}:{lineno}: expected key = value")
            key, value = line.split("=", 1)
            key = normalize_key(key)
            try:
                self._config[key] = coerce_value(key, value)
            except ParameterError as e:
                raise ParameterError(f"{self.config_path.name}:{lineno}: {e}") from None

        logger.info(f"Loaded configuration from {self.config_path} ({len(self._config)} keys)")
        return self.as_dict()

    def save(self, path: Path | None = None) -> Path:
        """Write every resolved value (defaults included) in ``key = value`` form."""
        target = path or self.config_path
        if target is None:
            raise ParameterError("no configuration path to save to")
        target.parent.mkdir(parents=True, exist_ok=True)
        lines = [f"{key} = {'' if value is None else value}" for key, value in self.as_dict().items()]
        target.write_text("\n".join(lines) + "\n", encoding="utf-8")
        logger.debug(f"Saved configuration to {target}")
        return target

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value."""
        key = normalize_key(key)
        if default is None:
            default = self._defaults.get(key)
        value = self._config.get(key)
        return default if value is None else value

    def set(self, key: str, value: Any) -> None:
        """Set a configuration value."""
        key = normalize_key(key)
        self._config[key] = coerce_value(key, value)

    def update(self, data: dict[str, Any]) -> None:
        """Apply several values; ``None`` entries leave the current value in place."""
        for key, value in data.items():
            if value is not None:
                self.set(key, value)

    def as_dict(self) -> dict[str, Any]:
        """Every key with its resolved value."""
        return {key: self.get(key) for key in CONFIG_SCHEMA}

    def decoder_overrides(self) -> dict[str, Any]:
        """Decoder parameters set explicitly (anything left ``None`` uses plugin defaults)."""
        keys = ("alpha", "mu1", "mu2", "epsilon", "max_iters", "normalization", "llr_clip")
        overrides = {key: self.get(key) for key in keys if self.get(key) is not None}
        # the penalized decoder's single penalty parameter follows --mu1
        if "mu1" in overrides:
            overrides["mu"] = overrides["mu1"]
        return overrides
