"""BPSK over AWGN: modulation, noise, SNR bookkeeping and channel LLRs.

SNR is Eb/N0 in dB; with unit-energy BPSK the per-dimension noise variance is
sigma^2 = 1 / (2 * R * 10^(snr_db / 10)). LLRs are never clipped here.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ChannelError

# LLR vectors are 1-D float64 arrays gamma with gamma_i = log P(y_i|0) / P(y_i|1).
LlrVector = np.ndarray


def snr_to_sigma(snr_db: float, rate: float) -> float:
    """Noise standard deviation for an Eb/N0 of ``snr_db`` at code rate ``rate``."""
    if not 0.0 < rate <= 1.0:
        raise ChannelError(f"code rate must lie in (0, 1], got {rate}")
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (snr_db / 10.0)))


@dataclass(frozen=True)
class ChannelParams:
    """AWGN operating point; ``sigma`` is derived from ``snr_db`` and ``rate``."""

    snr_db: float
    rate: float
    sigma: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "sigma", snr_to_sigma(self.snr_db, self.rate))

    @property
    def variance(self) -> float:
        return self.sigma * self.sigma


def modulate_bpsk(word) -> np.ndarray:
    """Map bit 0 to +1.0 and bit 1 to -1.0."""
    bits = np.asarray(word, dtype=np.float64)
    return 1.0 - 2.0 * bits


def add_awgn(signal, params: ChannelParams, rng: np.random.Generator) -> np.ndarray:
    """Return ``signal`` plus i.i.d. N(0, sigma^2) noise drawn from ``rng``."""
    samples = np.asarray(signal, dtype=np.float64)
    return samples + rng.normal(0.0, params.sigma, size=samples.shape)


def llr_awgn(received, params: ChannelParams) -> LlrVector:
    """Exact BPSK-AWGN LLRs, gamma_i = 2 y_i / sigma^2."""
    variance = params.variance
    if variance <= 0.0:
        raise ChannelError("noise variance must be positive to form LLRs")
    gamma = 2.0 * np.asarray(received, dtype=np.float64) / variance
    if not np.all(np.isfinite(gamma)):
        raise ChannelError("non-finite LLR produced")
    return gamma


def hard_decision(gamma) -> np.ndarray:
    """Bitwise decision from LLRs: negative means 1, zero and positive mean 0."""
    return (np.asarray(gamma) < 0).astype(np.uint8)


def trial_generator(master_seed: int, point_index: int, trial_index: int) -> np.random.Generator:
    """Independent generator stream for one Monte Carlo trial.

    The stream depends only on its coordinates, never on scheduling.
    """
    sequence = np.random.SeedSequence(master_seed, spawn_key=(point_index, trial_index))
    return np.random.default_rng(sequence)
