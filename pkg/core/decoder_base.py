"""Base class for decoder plugins."""

from abc import ABC, abstractmethod
from functools import partial
from pathlib import Path
from typing import Any, Callable
import json
import logging

import numpy as np

from .admm import IterationTrace
from .gf2_code import ParityCheckMatrix
from .models import DecodeResult

logger = logging.getLogger(__name__)

BoundDecoder = Callable[[np.ndarray], DecodeResult]


class DecoderPlugin(ABC):
    """Abstract base class for all decoder plugins.

    A plugin serves one or more decoder ids. Default parameters live in the
    plugin's ``config.json``; callers override them per call.
    """

    def __init__(self, plugin_dir: Path):
        self.plugin_dir = plugin_dir
        self.plugin_id = plugin_dir.name
        self._config: dict[str, Any] = {}

    @property
    @abstractmethod
    def name(self) -> str:
        """Human-readable decoder family name."""
        pass

    @property
    def config_path(self) -> Path:
        """Path to the plugin's config file."""
        return self.plugin_dir / "config.json"

    def validate_config(self) -> tuple[bool, str]:
        """
        Validate plugin configuration values.

        Default implementation builds the parameters of every served decoder
        from the loaded defaults. Override to add custom validation.

        Returns:
            (is_valid, error_message) tuple
        """
        try:
            for decoder_id in self.get_supported_decoders():
                self.make_params(decoder_id, {})
        except (ValueError, TypeError) as e:
            return False, str(e)
        return True, ""

    def load_config(self) -> dict[str, Any]:
        """Read default parameters from ``config.json``.

        A missing file means no defaults. An unreadable file, or defaults
        that fail ``validate_config``, disable the plugin.
        """
        if not self.config_path.exists():
            self._config = {"enabled": True}
            return self._config

        try:
            self._config = json.loads(self.config_path.read_text(encoding="utf-8"))
            if not isinstance(self._config, dict):
                raise ValueError("top level must be an object")
            valid, problem = self.validate_config()
        except (OSError, ValueError) as e:  # JSONDecodeError is a ValueError
            valid, problem = False, f"cannot read defaults: {e}"

        if not valid:
            logger.error(f"{self.config_path}: {problem}; decoder family '{self.name}' disabled")
            self._config = {"enabled": False}
        return self._config

    @property
    def enabled(self) -> bool:
        """Check if the plugin is enabled."""
        return self._config.get("enabled", True)

    def defaults(self) -> dict[str, Any]:
        """Configured default parameters, without plugin bookkeeping keys."""
        return {k: v for k, v in self._config.items() if k != "enabled"}

    def merged(self, overrides: dict[str, Any], accepted: set[str]) -> dict[str, Any]:
        """Defaults updated with the overrides this decoder understands."""
        ignored = sorted(k for k, v in overrides.items() if k not in accepted and v is not None)
        if ignored:
            logger.debug(f"{self.name}: ignoring parameters {ignored}")
        values = {k: v for k, v in self.defaults().items() if k in accepted}
        values.update({k: v for k, v in overrides.items() if k in accepted and v is not None})
        return values

    @abstractmethod
    def get_supported_decoders(self) -> list[str]:
        """Return the decoder ids this plugin serves."""
        pass

    def get_capabilities(self) -> dict[str, list[str]]:
        """Return {decoder_id: [param_names]}."""
        return {decoder_id: sorted(self.defaults()) for decoder_id in self.get_supported_decoders()}

    @abstractmethod
    def make_params(self, decoder_id: str, overrides: dict[str, Any]) -> Any:
        """Build the validated parameter object for ``decoder_id``.

        Raises:
            ParameterError: the merged parameters violate their invariants.
        """
        pass

    def check_code(self, decoder_id: str, h: ParityCheckMatrix, params: Any) -> None:
        """Reject parameters that are invalid for this particular code."""
        return None

    @abstractmethod
    def decode(
        self,
        decoder_id: str,
        h: ParityCheckMatrix,
        gamma: np.ndarray,
        params: Any,
        trace: IterationTrace | None = None,
    ) -> DecodeResult:
        """Decode one LLR vector."""
        pass

    def bind(
        self,
        decoder_id: str,
        h: ParityCheckMatrix,
        overrides: dict[str, Any] | None = None,
    ) -> BoundDecoder:
        """Validate parameters once and return ``gamma -> DecodeResult``."""
        params = self.make_params(decoder_id, overrides or {})
        self.check_code(decoder_id, h, params)
        return partial(self.decode, decoder_id, h, params=params)
