"""Message-passing decoder plugin implementation.

Flooding-schedule LLR-domain decoding. Messages live on the Tanner-graph
edges in the same check-major order the ADMM decoders use, and every check
update runs per degree group on a dense ``(n_checks_of_degree, degree)``
block.
"""

import logging
import time
from dataclasses import dataclass, fields
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from core.admm import IterationTrace, validate_inputs
from core.constants import (
    DECODER_BP,
    DECODER_MINSUM,
    DECODER_NORMMINSUM,
    DEFAULT_LLR_CLIP,
    DEFAULT_MP_MAX_ITERS,
    DEFAULT_NORMALIZATION,
)
from core.decoder_base import DecoderPlugin
from core.exceptions import ParameterError
from core.gf2_code import ParityCheckMatrix, is_codeword
from core.models import DecodeResult, Termination

logger = logging.getLogger(__name__)


class MpVariant(str, Enum):
    """Check-node update rule."""

    SUM_PRODUCT = "sum_product"
    MIN_SUM = "min_sum"
    NORMALIZED_MIN_SUM = "normalized_min_sum"


VARIANT_BY_DECODER = {
    DECODER_BP: MpVariant.SUM_PRODUCT,
    DECODER_MINSUM: MpVariant.MIN_SUM,
    DECODER_NORMMINSUM: MpVariant.NORMALIZED_MIN_SUM,
}


@dataclass(frozen=True)
class MpParams:
    """Message-passing parameters. ``normalization`` only affects normalized min-sum."""

    max_iters: int = DEFAULT_MP_MAX_ITERS
    variant: MpVariant = MpVariant.SUM_PRODUCT
    normalization: float = DEFAULT_NORMALIZATION
    llr_clip: float = DEFAULT_LLR_CLIP

    def __post_init__(self):
        if isinstance(self.max_iters, bool) or int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ParameterError(f"max_iters must be an integer >= 1, got {self.max_iters}")
        object.__setattr__(self, "max_iters", int(self.max_iters))
        try:
            object.__setattr__(self, "variant", MpVariant(self.variant))
        except ValueError:
            raise ParameterError(f"unknown message-passing variant: {self.variant}") from None
        if not 0 < self.normalization <= 1:
            raise ParameterError(f"normalization must lie in (0, 1], got {self.normalization}")
        if not np.isfinite(self.llr_clip) or self.llr_clip <= 0:
            raise ParameterError(f"llr_clip must be positive, got {self.llr_clip}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "max_iters": self.max_iters,
            "variant": self.variant.value,
            "normalization": self.normalization,
            "llr_clip": self.llr_clip,
        }


def _leave_one_out_product(values: np.ndarray) -> np.ndarray:
    """Row-wise product of all other entries, via prefix and suffix products."""
    ones = np.ones((values.shape[0], 1))
    prefix = np.cumprod(np.hstack([ones, values]), axis=1)
    suffix = np.cumprod(np.hstack([values, ones])[:, ::-1], axis=1)[:, ::-1]
    return prefix[:, :-1] * suffix[:, 1:]


def _leave_one_out_min(magnitudes: np.ndarray, empty: float) -> np.ndarray:
    """Row-wise minimum of all other entries; ``empty`` when there are none."""
    n, d = magnitudes.shape
    padded = np.hstack([magnitudes, np.full((n, 1), empty)])
    two_smallest = np.partition(padded, 1, axis=1)[:, :2]
    at_min = np.arange(d)[None, :] == np.argmin(magnitudes, axis=1)[:, None]
    return np.where(at_min, two_smallest[:, 1:2], two_smallest[:, 0:1])


def check_to_variable(incoming: np.ndarray, params: MpParams) -> np.ndarray:
    """Extrinsic check-to-variable messages for a block of equal-degree checks.

    Args:
        incoming: Variable-to-check messages, shape (n_checks, degree)
        params: Selects the update rule and the clipping level

    Returns:
        Messages of the same shape, clipped to +-llr_clip.
    """
    clip = params.llr_clip
    if params.variant is MpVariant.SUM_PRODUCT:
        limit = np.tanh(clip / 2)
        product = _leave_one_out_product(np.tanh(incoming / 2))
        out = 2 * np.arctanh(np.clip(product, -limit, limit))
    else:
        signs = np.where(incoming < 0, -1.0, 1.0)
        # signs are +-1, so dividing out the own sign is a multiplication
        sign = np.prod(signs, axis=1, keepdims=True) * signs
        out = sign * _leave_one_out_min(np.abs(incoming), clip)
        if params.variant is MpVariant.NORMALIZED_MIN_SUM:
            out = params.normalization * out
    return np.clip(out, -clip, clip)


def _check_update(h: ParityCheckMatrix, v2c: np.ndarray, params: MpParams) -> np.ndarray:
    c2v = np.empty_like(v2c)
    for _, edges in h.degree_groups:
        c2v[edges] = check_to_variable(v2c[edges], params)
    return c2v


def mp_decode(
    h: ParityCheckMatrix,
    gamma,
    params: MpParams,
    decoder: str = "",
) -> DecodeResult:
    """Decode one LLR vector by flooding message passing.

    The hard decision (posterior < 0 -> 1) is tested after every iteration and
    decoding stops as soon as it satisfies every check.

    Raises:
        CodeError: LLR length does not match ``h``.
        ParameterError: ``gamma`` has non-finite entries.
    """
    llr = validate_inputs(h, gamma)
    decoder = decoder or params.variant.value
    start = time.perf_counter()

    v2c = np.clip(llr[h.edge_vars], -params.llr_clip, params.llr_clip)
    termination = Termination.MAX_ITERS
    word = (llr < 0).astype(np.uint8)
    iterations = 0

    for iterations in range(1, params.max_iters + 1):
        c2v = _check_update(h, v2c, params)
        posterior = llr + np.bincount(h.edge_vars, weights=c2v, minlength=h.n_vars)
        word = (posterior < 0).astype(np.uint8)
        if is_codeword(h, word):
            termination = Termination.EARLY_CODEWORD
            break
        v2c = np.clip(posterior[h.edge_vars] - c2v, -params.llr_clip, params.llr_clip)

    elapsed = time.perf_counter() - start
    logger.debug(f"{decoder}: {termination.value} after {iterations} iterations")
    valid = termination is Termination.EARLY_CODEWORD
    return DecodeResult(
        word=word,
        is_valid_codeword=valid,
        iterations=iterations,
        termination=termination,
        wall_time=elapsed,
        objective=float(llr @ word),
        decoder=decoder,
    )


class MessagePassingDecoder(DecoderPlugin):
    """Decoder plugin serving ``bp``, ``minsum`` and ``normminsum``."""

    _PARAM_NAMES = {f.name for f in fields(MpParams)} - {"variant"}

    def __init__(self, plugin_dir: Path):
        super().__init__(plugin_dir)

    @property
    def name(self) -> str:
        return "Message Passing"

    def get_supported_decoders(self) -> list[str]:
        return list(VARIANT_BY_DECODER)

    def get_capabilities(self) -> dict[str, list[str]]:
        params = sorted(self._PARAM_NAMES)
        return {
            DECODER_BP: [p for p in params if p != "normalization"],
            DECODER_MINSUM: [p for p in params if p != "normalization"],
            DECODER_NORMMINSUM: params,
        }

    def make_params(self, decoder_id: str, overrides: dict[str, Any]) -> MpParams:
        if decoder_id not in VARIANT_BY_DECODER:
            raise ParameterError(f"{self.name} does not serve decoder '{decoder_id}'")
        return MpParams(variant=VARIANT_BY_DECODER[decoder_id], **self.merged(overrides, self._PARAM_NAMES))

    def decode(
        self,
        decoder_id: str,
        h: ParityCheckMatrix,
        gamma: np.ndarray,
        params: MpParams,
        trace: IterationTrace | None = None,
    ) -> DecodeResult:
        if trace is not None:
            logger.debug(f"{decoder_id}: per-iteration trace is only emitted by ADMM decoders")
        return mp_decode(h, gamma, params, decoder=decoder_id)
