"""Event bus for pub/sub communication between components.

The harness reports progress here; the CLI (or a test) subscribes.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable


logger = logging.getLogger(__name__)


class Topics:
    """Event topic constants."""

    # Decoder registry
    DECODER_LOADED = "decoder.loaded"
    DECODER_FAILED = "decoder.failed"

    # Monte Carlo harness
    POINT_STARTED = "harness.point.started"
    BATCH_FINISHED = "harness.batch.finished"
    POINT_FINISHED = "harness.point.finished"
    SWEEP_FINISHED = "harness.sweep.finished"


@dataclass
class BatchProgress:
    """Payload of ``Topics.BATCH_FINISHED``."""
    decoder: str
    snr_db: float
    trials: int
    word_errors: int


class EventBus:
    """Synchronous pub/sub bus.

    Handlers run in the publisher's thread, in subscription order. A handler
    that raises is logged and skipped; the publisher never sees the error.
    """

    def __init__(self):
        self._handlers: dict[str, list[Callable[[Any], None]]] = {}

    def subscribe(self, topic: str, handler: Callable[[Any], None]) -> None:
        self._handlers.setdefault(topic, []).append(handler)
        logger.debug(f"Subscribed {getattr(handler, '__name__', handler)!s} to {topic}")

    def unsubscribe(self, topic: str, handler: Callable) -> None:
        """Remove ``handler`` from ``topic``; unknown handlers are ignored."""
        handlers = self._handlers.get(topic, [])
        if handler in handlers:
            handlers.remove(handler)
            logger.debug(f"Unsubscribed from {topic}")

    def publish(self, topic: str, data: Any = None) -> None:
        # Iterate over a copy so handlers may unsubscribe themselves.
        for handler in list(self._handlers.get(topic, ())):
            try:
                handler(data)
            except Exception as e:
                logger.error(f"Error in handler for topic '{topic}': {e}")

    def clear(self, topic: str | None = None) -> None:
        """Drop the handlers of ``topic``, or of every topic when None."""
        if topic is None:
            self._handlers.clear()
        else:
            self._handlers.pop(topic, None)

    def get_subscriber_count(self, topic: str) -> int:
        return len(self._handlers.get(topic, []))

    def get_all_topics(self) -> list[str]:
        """Topics with at least one handler, sorted."""
        return sorted(topic for topic, handlers in self._handlers.items() if handlers)
