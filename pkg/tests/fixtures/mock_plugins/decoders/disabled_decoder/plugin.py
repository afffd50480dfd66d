"""Decoder plugin switched off in its config."""

from dataclasses import asdict, dataclass

import numpy as np

from core.channel import hard_decision
from core.decoder_base import DecoderPlugin
from core.exceptions import ParameterError
from core.gf2_code import is_codeword
from core.models import DecodeResult, Termination


@dataclass(frozen=True)
class MockParams:
    threshold: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.threshold):
            raise ParameterError("threshold must be finite")

    def to_dict(self):
        return asdict(self)


class DisabledDecoder(DecoderPlugin):
    """Mock decoder plugin for testing."""

    def __init__(self, plugin_dir):
        super().__init__(plugin_dir)
        self.decoded = 0

    @property
    def name(self) -> str:
        return "Disabled Decoder"

    def get_supported_decoders(self) -> list[str]:
        return ["disabled_hard"]

    def make_params(self, decoder_id, overrides) -> MockParams:
        return MockParams(**self.merged(overrides, {"threshold"}))

    def decode(self, decoder_id, h, gamma, params, trace=None) -> DecodeResult:
        self.decoded += 1
        word = hard_decision(np.asarray(gamma) - params.threshold)
        return DecodeResult(
            word=word,
            is_valid_codeword=is_codeword(h, word),
            iterations=0,
            termination=Termination.CONVERGED,
            wall_time=0.0,
            objective=float(np.asarray(gamma) @ word),
            decoder=decoder_id,
        )
