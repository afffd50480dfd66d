"""Component container and the builder that wires the workbench together."""

import logging
from pathlib import Path
from typing import Any, Callable

from .config_manager import ConfigManager
from .decoder_manager import DecoderManager
from .event_bus import EventBus
from .harness import MonteCarloHarness
from .paths import get_app_dir, get_config_path, get_plugins_dir

logger = logging.getLogger(__name__)


class DIContainer:
    """Named components, either ready instances or lazily built ones.

    A factory runs on first ``get`` and its result replaces it. Registering
    an instance under a name that also has a factory shadows the factory.
    """

    def __init__(self):
        self._instances: dict[str, Any] = {}
        self._factories: dict[str, Callable[[], Any]] = {}
        self._building: list[str] = []

    def register_singleton(self, name: str, instance: Any) -> None:
        self._instances[name] = instance
        logger.debug(f"Registered instance: {name}")

    def register_factory(self, name: str, factory: Callable[[], Any]) -> None:
        """Register a zero-argument factory, built on first use."""
        self._factories[name] = factory
        logger.debug(f"Registered factory: {name}")

    def get(self, name: str) -> Any:
        """Return the component called ``name``, building it if needed.

        Raises:
            KeyError: nothing is registered under ``name``
            RuntimeError: factories depend on each other in a cycle
        """
        if name in self._instances:
            return self._instances[name]
        if name not in self._factories:
            raise KeyError(f"Component '{name}' not found in container")
        if name in self._building:
            chain = " -> ".join([*self._building, name])
            raise RuntimeError(f"Circular component dependency: {chain}")

        self._building.append(name)
        try:
            instance = self._factories[name]()
        finally:
            self._building.pop()
        del self._factories[name]
        self._instances[name] = instance
        logger.debug(f"Built component: {name}")
        return instance

    def has(self, name: str) -> bool:
        return name in self._instances or name in self._factories

    def is_built(self, name: str) -> bool:
        """Whether ``name`` exists as an instance (registered or already built)."""
        return name in self._instances

    def names(self) -> list[str]:
        return sorted(set(self._instances) | set(self._factories))


class ContainerBuilder:
    """Builder for configuring the DI container."""

    @staticmethod
    def build_container(config_path: Path | None = None, plugins_dir: Path | None = None) -> DIContainer:
        """Build and configure the DI container.

        Args:
            config_path: Explicit key=value config file; when omitted, the
                implicit ``l2box-workbench.conf`` in the working directory is
                used if it exists
            plugins_dir: Plugin root (defaults to the bundled plugins)

        Returns:
            Configured DI container
        """
        container = DIContainer()

        plugins_dir = plugins_dir or get_plugins_dir()
        if config_path is None and get_config_path().exists():
            config_path = get_config_path()

        container.register_singleton("app_dir", get_app_dir())
        container.register_singleton("plugins_dir", plugins_dir)

        event_bus = EventBus()
        container.register_singleton("event_bus", event_bus)

        def create_config_manager() -> ConfigManager:
            config_manager = ConfigManager(config_path)
            config_manager.load()
            return config_manager

        container.register_factory("config_manager", create_config_manager)

        def create_decoder_manager() -> DecoderManager:
            decoder_manager = DecoderManager(plugins_dir, event_bus=event_bus)
            decoder_manager.discover_decoders()
            logger.info(f"Decoders available: {', '.join(decoder_manager.supported_decoders)}")
            return decoder_manager

        container.register_factory("decoder_manager", create_decoder_manager)

        def create_harness() -> MonteCarloHarness:
            return MonteCarloHarness(container.get("decoder_manager"), event_bus=event_bus)

        container.register_factory("harness", create_harness)

        logger.debug("DI container configured")
        return container
