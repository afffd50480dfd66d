"""Data models shared by decoders, the Monte Carlo harness and the CLI."""

from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Any

import numpy as np

from .constants import (
    DEFAULT_BATCH_SIZE,
    DEFAULT_MAX_TRIALS,
    DEFAULT_SEED,
    DEFAULT_SNR_DB,
    DEFAULT_STOP_WORD_ERRORS,
    DEFAULT_THREADS,
    TRANSMIT_ALL_ZERO,
    TRANSMIT_RANDOM,
)
from .exceptions import ParameterError


class Termination(str, Enum):
    """Why a decoder stopped iterating."""

    CONVERGED = "converged"
    MAX_ITERS = "max_iters"
    EARLY_CODEWORD = "early_codeword"


@dataclass
class DecodeResult:
    """Outcome of one decode call."""

    word: np.ndarray                   # Hard decision, uint8 bits
    is_valid_codeword: bool            # True iff the syndrome of word is zero
    iterations: int
    termination: Termination
    wall_time: float                   # Seconds
    objective: float                   # gamma^T x at exit
    decoder: str = ""

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-serializable dictionary."""
        return {
            "decoder": self.decoder,
            "word": "".join(str(int(b)) for b in self.word),
            "is_valid_codeword": bool(self.is_valid_codeword),
            "iterations": int(self.iterations),
            "termination": self.termination.value,
            "wall_time": float(self.wall_time),
            "objective": float(self.objective),
        }


@dataclass(frozen=True)
class TrialOutcome:
    """Result of one transmit-decode trial."""

    word_error: bool
    bit_errors: int
    iterations: int
    seconds: float


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything needed to reproduce a Monte Carlo experiment."""

    code_ref: str
    decoder_id: str
    decoder_params: dict[str, Any] = field(default_factory=dict)
    snr_points: tuple[float, ...] = (DEFAULT_SNR_DB,)
    stop_word_errors: int = DEFAULT_STOP_WORD_ERRORS
    max_trials: int = DEFAULT_MAX_TRIALS
    transmit_mode: str = TRANSMIT_ALL_ZERO
    master_seed: int = DEFAULT_SEED
    threads: int = DEFAULT_THREADS
    batch_size: int = DEFAULT_BATCH_SIZE

    def __post_init__(self):
        object.__setattr__(self, "snr_points", tuple(float(s) for s in self.snr_points))
        object.__setattr__(self, "decoder_params", dict(self.decoder_params))
        if not self.snr_points:
            raise ParameterError("snr_points must not be empty")
        if self.stop_word_errors < 1:
            raise ParameterError("stop_word_errors must be at least 1")
        if self.max_trials < self.stop_word_errors:
            raise ParameterError("max_trials must be at least stop_word_errors")
        if self.transmit_mode not in (TRANSMIT_ALL_ZERO, TRANSMIT_RANDOM):
            raise ParameterError(f"unknown transmit mode: {self.transmit_mode}")
        if not 0 <= self.master_seed < 2**64:
            raise ParameterError("master_seed must be a 64-bit unsigned integer")
        if self.threads < 1 or self.batch_size < 1:
            raise ParameterError("threads and batch_size must be positive")

    def with_updates(self, **changes: Any) -> "ExperimentSpec":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["snr_points"] = list(self.snr_points)
        return data


@dataclass
class SweepRecord:
    """One row of a Monte Carlo experiment."""

    decoder: str
    code: str
    snr_db: float
    alpha: float | None = None
    mu1: float | None = None
    mu2: float | None = None
    trials: int = 0
    word_errors: int = 0
    bit_errors: int = 0
    wer: float = 0.0
    wer_ci_low: float = 0.0
    wer_ci_high: float = 1.0
    ber: float = 0.0
    avg_iterations: float = 0.0
    avg_decode_seconds: float = 0.0
    seed: int = 0
    error: str | None = None           # Set when the point could not be run

    @property
    def failed(self) -> bool:
        return self.error is not None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SweepRecord":
        known = {name for name in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in data.items() if k in known})
