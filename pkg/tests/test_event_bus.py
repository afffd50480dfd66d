"""Tests for event bus."""

from core.event_bus import BatchProgress, EventBus, Topics


class TestEventBusInit:
    """Tests for EventBus initialization."""

    def test_init(self):
        bus = EventBus()
        assert bus._handlers == {}
        assert bus.get_all_topics() == []


class TestSubscribe:
    """Tests for subscription."""

    def test_subscribe_handler(self, mocker):
        bus = EventBus()
        handler = mocker.stub()

        bus.subscribe("test.topic", handler)

        assert handler in bus._handlers["test.topic"]
        assert bus.get_subscriber_count("test.topic") == 1

    def test_subscribe_multiple_handlers(self, mocker):
        bus = EventBus()
        handler1 = mocker.stub()
        handler2 = mocker.stub()

        bus.subscribe("test.topic", handler1)
        bus.subscribe("test.topic", handler2)

        assert bus.get_subscriber_count("test.topic") == 2

    def test_subscribe_different_topics(self, mocker):
        bus = EventBus()
        bus.subscribe("topic2", mocker.stub())
        bus.subscribe("topic1", mocker.stub())

        assert bus.get_all_topics() == ["topic1", "topic2"]


class TestUnsubscribe:
    """Tests for unsubscription."""

    def test_unsubscribe_handler(self, mocker):
        bus = EventBus()
        handler = mocker.stub()
        bus.subscribe("test.topic", handler)

        bus.unsubscribe("test.topic", handler)

        assert bus.get_subscriber_count("test.topic") == 0
        assert bus.get_all_topics() == []

    def test_unsubscribe_unknown_handler(self, mocker):
        """Removing a handler that was never added is a no-op."""
        bus = EventBus()
        bus.subscribe("test.topic", mocker.stub())

        bus.unsubscribe("test.topic", mocker.stub())
        bus.unsubscribe("other.topic", mocker.stub())

        assert bus.get_subscriber_count("test.topic") == 1


class TestPublish:
    """Tests for publishing."""

    def test_publish_calls_handlers(self, mocker):
        bus = EventBus()
        handler1 = mocker.stub()
        handler2 = mocker.stub()
        bus.subscribe(Topics.POINT_FINISHED, handler1)
        bus.subscribe(Topics.POINT_FINISHED, handler2)

        bus.publish(Topics.POINT_FINISHED, {"snr_db": 1.0})

        handler1.assert_called_once_with({"snr_db": 1.0})
        handler2.assert_called_once_with({"snr_db": 1.0})

    def test_publish_without_subscribers(self):
        bus = EventBus()
        bus.publish("nobody.listens", 42)

    def test_publish_only_reaches_topic(self, mocker):
        bus = EventBus()
        handler = mocker.stub()
        bus.subscribe(Topics.DECODER_LOADED, handler)

        bus.publish(Topics.DECODER_FAILED, "bp")

        handler.assert_not_called()

    def test_handler_error_is_isolated(self, mocker):
        """A failing handler does not stop later handlers."""
        bus = EventBus()
        failing = mocker.Mock(side_effect=RuntimeError("boom"))
        handler = mocker.stub()
        bus.subscribe("test.topic", failing)
        bus.subscribe("test.topic", handler)

        bus.publish("test.topic", "data")

        handler.assert_called_once_with("data")

    def test_handler_may_unsubscribe_itself(self):
        bus = EventBus()
        calls = []

        def once(data):
            calls.append(data)
            bus.unsubscribe("test.topic", once)

        bus.subscribe("test.topic", once)
        bus.publish("test.topic", 1)
        bus.publish("test.topic", 2)

        assert calls == [1]

    def test_batch_progress_payload(self):
        bus = EventBus()
        received = []
        bus.subscribe(Topics.BATCH_FINISHED, received.append)

        bus.publish(Topics.BATCH_FINISHED, BatchProgress("bp", 2.0, 64, 3))

        assert received[0].trials == 64
        assert received[0].word_errors == 3


class TestClear:
    """Tests for clearing handlers."""

    def test_clear_topic(self, mocker):
        bus = EventBus()
        bus.subscribe("a", mocker.stub())
        bus.subscribe("b", mocker.stub())

        bus.clear("a")

        assert bus.get_all_topics() == ["b"]

    def test_clear_all(self, mocker):
        bus = EventBus()
        bus.subscribe("a", mocker.stub())
        bus.subscribe("b", mocker.stub())

        bus.clear()

        assert bus.get_all_topics() == []
