"""Core module for the l2-box decoder workbench."""

from .config_manager import ConfigManager
from .decoder_base import DecoderPlugin
from .decoder_manager import DecoderManager
from .event_bus import EventBus, Topics
from .gf2_code import ParityCheckMatrix, GeneratorMatrix, load_code
from .models import DecodeResult, ExperimentSpec, SweepRecord, Termination

__all__ = [
    "ConfigManager",
    "DecoderPlugin",
    "DecoderManager",
    "EventBus",
    "Topics",
    "ParityCheckMatrix",
    "GeneratorMatrix",
    "load_code",
    "DecodeResult",
    "ExperimentSpec",
    "SweepRecord",
    "Termination",
]
