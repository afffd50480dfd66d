"""Protocol definitions for dependency injection.

Defines interfaces for core components to enable loose coupling and testability.
"""

from pathlib import Path
from typing import Protocol, Any, Callable, runtime_checkable

import numpy as np

from .admm import IterationTrace
from .decoder_base import BoundDecoder, DecoderPlugin
from .gf2_code import ParityCheckMatrix
from .models import DecodeResult, ExperimentSpec, SweepRecord


@runtime_checkable
class IConfigManager(Protocol):
    """Interface for configuration management."""

    def load(self) -> dict[str, Any]:
        """Load configuration from file."""
        ...

    def save(self, path: Path | None = None) -> Path:
        """Save configuration to file."""
        ...

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value."""
        ...

    def set(self, key: str, value: Any) -> None:
        """Set a configuration value."""
        ...

    def update(self, data: dict[str, Any]) -> None:
        """Update multiple configuration values."""
        ...

    def as_dict(self) -> dict[str, Any]:
        """Every key with its resolved value."""
        ...

    def decoder_overrides(self) -> dict[str, Any]:
        """Decoder parameters set explicitly."""
        ...


@runtime_checkable
class IEventBus(Protocol):
    """Interface for the pub/sub event bus."""

    def subscribe(self, topic: str, handler: Callable[[Any], None]) -> None:
        ...

    def unsubscribe(self, topic: str, handler: Callable) -> None:
        ...

    def publish(self, topic: str, data: Any = None) -> None:
        ...


@runtime_checkable
class IDecoderManager(Protocol):
    """Interface for decoder plugin management."""

    @property
    def plugins(self) -> dict[str, DecoderPlugin]:
        """Get all loaded decoder plugins."""
        ...

    @property
    def supported_decoders(self) -> list[str]:
        """Get all decoder ids."""
        ...

    def discover_decoders(self) -> None:
        """Discover all decoder plugins in the plugins directory."""
        ...

    def bind(self, decoder_id: str, h: ParityCheckMatrix, overrides: dict[str, Any] | None = None) -> BoundDecoder:
        """Validated gamma -> DecodeResult callable."""
        ...

    def decode(
        self,
        decoder_id: str,
        h: ParityCheckMatrix,
        gamma: np.ndarray,
        overrides: dict[str, Any] | None = None,
        trace: IterationTrace | None = None,
    ) -> DecodeResult:
        """Decode one LLR vector."""
        ...

    def resolved_params(self, decoder_id: str, overrides: dict[str, Any] | None = None) -> dict[str, Any]:
        """Fully-defaulted parameters of a decoder."""
        ...

    def get_failed_decoders(self) -> dict[str, Any]:
        """Get plugins that failed to load."""
        ...


@runtime_checkable
class IHarness(Protocol):
    """Interface for the Monte Carlo experiment engine."""

    async def run_point(
        self, spec: ExperimentSpec, assignment: dict[str, Any] | None = None, point_index: int = 0
    ) -> SweepRecord:
        ...

    async def sweep_snr(self, spec: ExperimentSpec) -> list[SweepRecord]:
        ...

    async def sweep_alpha(self, spec: ExperimentSpec, alpha_grid: list[float]) -> list[SweepRecord]:
        ...

    async def sweep_mu(self, spec: ExperimentSpec, mu1_grid: list[float], mu2_grid: list[float]) -> list[SweepRecord]:
        ...

    async def compare_decoders(self, spec: ExperimentSpec, decoder_ids: list[str]) -> list[SweepRecord]:
        ...
