"""Decoder manager for discovering, loading and dispatching decoder plugins."""

import importlib.util
import logging
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Any, TYPE_CHECKING

import numpy as np

from .admm import IterationTrace
from .decoder_base import BoundDecoder, DecoderPlugin
from .exceptions import DecoderNotFoundError
from .gf2_code import ParityCheckMatrix
from .models import DecodeResult

if TYPE_CHECKING:
    from .event_bus import EventBus

logger = logging.getLogger(__name__)


@dataclass
class DecoderError:
    """Record of a decoder plugin error."""
    plugin_id: str
    plugin_name: str
    error_type: str  # "load", "config"
    error_message: str
    timestamp: datetime
    fatal: bool  # If True, plugin is unavailable


class DecoderManager:
    """Manages decoder plugin discovery and maps decoder ids to plugins."""

    def __init__(self, plugins_dir: Path, event_bus: "EventBus | None" = None):
        """Initialize decoder manager.

        Args:
            plugins_dir: Directory containing a ``decoders/`` subdirectory
            event_bus: Optional EventBus receiving load/failure events
        """
        self.plugins_dir = plugins_dir
        self.decoders_dir = plugins_dir / "decoders"

        self._plugins: dict[str, DecoderPlugin] = {}
        self._handlers: dict[str, DecoderPlugin] = {}
        self._errors: list[DecoderError] = []
        self._event_bus = event_bus

    def _publish(self, topic: str, data: Any) -> None:
        if self._event_bus:
            self._event_bus.publish(topic, data)

    def _record_error(
        self,
        plugin_id: str,
        plugin_name: str,
        error_type: str,
        error: Exception,
        fatal: bool = False
    ) -> None:
        """
        Record a plugin error for later inspection.

        Args:
            plugin_id: Plugin identifier
            plugin_name: Human-readable plugin name
            error_type: Type of error ("load", "config")
            error: The exception that occurred
            fatal: If True, the plugin is not available
        """
        from .event_bus import Topics

        record = DecoderError(
            plugin_id=plugin_id,
            plugin_name=plugin_name,
            error_type=error_type,
            error_message=str(error),
            timestamp=datetime.now(),
            fatal=fatal
        )
        self._errors.append(record)
        self._publish(Topics.DECODER_FAILED, record)

        if fatal:
            logger.error(f"Fatal error in decoder plugin '{plugin_name}' ({error_type}): {error}")
        else:
            logger.warning(f"Non-fatal error in decoder plugin '{plugin_name}' ({error_type}): {error}")

    def get_failed_decoders(self) -> dict[str, DecoderError]:
        """Plugins that failed fatally, keyed by plugin id."""
        return {err.plugin_id: err for err in self._errors if err.fatal}

    def get_all_errors(self) -> list[DecoderError]:
        """All recorded errors (fatal and non-fatal)."""
        return self._errors.copy()

    def discover_decoders(self) -> None:
        """Load every ``decoders/<name>/plugin.py`` under the plugins directory."""
        if not self.decoders_dir.exists():
            logger.warning(f"Decoder directory does not exist: {self.decoders_dir}")
            return

        for plugin_dir in sorted(self.decoders_dir.iterdir()):
            if plugin_dir.is_dir() and (plugin_dir / "plugin.py").exists():
                self._load_decoder(plugin_dir)

    def _load_decoder(self, plugin_dir: Path) -> None:
        """Load a decoder plugin from a directory."""
        from .event_bus import Topics

        plugin_id = plugin_dir.name
        try:
            plugin = self._load_plugin(plugin_dir)
        except Exception as e:
            plugin_name = plugin_id.replace("_", " ").title()
            self._record_error(plugin_id, plugin_name, "load", e, fatal=True)
            return

        if plugin is None:
            return
        if not plugin.enabled:
            self._record_error(
                plugin.plugin_id, plugin.name, "config",
                ValueError("plugin disabled by its configuration"), fatal=False
            )
            return

        self._plugins[plugin.plugin_id] = plugin
        for decoder_id in plugin.get_supported_decoders():
            logger.debug(f"\tdecoder id {decoder_id}")
            self._handlers[decoder_id] = plugin
        logger.info(f"Loaded decoder plugin: {plugin.name}")
        self._publish(Topics.DECODER_LOADED, plugin.plugin_id)

    def _load_plugin(self, plugin_dir: Path) -> DecoderPlugin | None:
        """Dynamically load a plugin module and instantiate its plugin class."""
        plugin_file = plugin_dir / "plugin.py"

        spec = importlib.util.spec_from_file_location(
            f"plugins.{plugin_dir.parent.name}.{plugin_dir.name}.plugin",
            plugin_file
        )
        if spec is None or spec.loader is None:
            return None

        module = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(module)

        for attr_name in dir(module):
            attr = getattr(module, attr_name)
            if (
                isinstance(attr, type)
                and issubclass(attr, DecoderPlugin)
                and attr is not DecoderPlugin
                and not getattr(attr, "__abstractmethods__", None)
            ):
                plugin = attr(plugin_dir)
                plugin.load_config()
                return plugin

        return None

    def get(self, decoder_id: str) -> DecoderPlugin:
        """Plugin serving ``decoder_id``.

        Raises:
            DecoderNotFoundError: no loaded plugin serves the id.
        """
        plugin = self._handlers.get(decoder_id)
        if plugin is None:
            raise DecoderNotFoundError(
                f"unknown decoder '{decoder_id}' (available: {', '.join(self.supported_decoders) or 'none'})"
            )
        return plugin

    def bind(
        self,
        decoder_id: str,
        h: ParityCheckMatrix,
        overrides: dict[str, Any] | None = None,
    ) -> BoundDecoder:
        """Validated ``gamma -> DecodeResult`` callable for one code."""
        return self.get(decoder_id).bind(decoder_id, h, overrides)

    def decode(
        self,
        decoder_id: str,
        h: ParityCheckMatrix,
        gamma: np.ndarray,
        overrides: dict[str, Any] | None = None,
        trace: IterationTrace | None = None,
    ) -> DecodeResult:
        """Decode one LLR vector with the decoder registered as ``decoder_id``."""
        plugin = self.get(decoder_id)
        params = plugin.make_params(decoder_id, overrides or {})
        plugin.check_code(decoder_id, h, params)
        return plugin.decode(decoder_id, h, gamma, params, trace=trace)

    def resolved_params(self, decoder_id: str, overrides: dict[str, Any] | None = None) -> dict[str, Any]:
        """Fully-defaulted parameters as a plain dictionary (for run metadata)."""
        params = self.get(decoder_id).make_params(decoder_id, overrides or {})
        return params.to_dict()

    @property
    def plugins(self) -> dict[str, DecoderPlugin]:
        """All loaded decoder plugins."""
        return self._plugins.copy()

    @property
    def supported_decoders(self) -> list[str]:
        """All decoder ids, sorted."""
        return sorted(self._handlers)

    def get_capabilities(self) -> dict[str, dict[str, list[str]]]:
        """{decoder_id: {"params": [...]}} across all plugins."""
        capabilities = {}
        for plugin in self._plugins.values():
            for decoder_id, params in plugin.get_capabilities().items():
                capabilities[decoder_id] = {"params": params}
        return capabilities
