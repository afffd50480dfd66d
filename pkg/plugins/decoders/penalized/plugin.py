"""l2-penalized ADMM LP decoder plugin implementation."""

import logging
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any

import numpy as np

from core.admm import (
    AdmmState,
    IterationTrace,
    assert_feasible,
    consensus_sum,
    initial_state,
    pp_dual_update,
    pp_residual,
    pp_update,
    run_iterations,
    validate_inputs,
)
from core.constants import (
    DECODER_PENALIZED,
    DEFAULT_ADMM_MAX_ITERS,
    DEFAULT_ALPHA,
    DEFAULT_EPSILON,
    DEFAULT_PENALIZED_MU,
)
from core.decoder_base import DecoderPlugin
from core.exceptions import ParameterError
from core.geometry import project_box
from core.gf2_code import ParityCheckMatrix
from core.models import DecodeResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PenalizedParams:
    """ADMM LP parameters with the concave penalty -alpha (x - 1/2)^2."""

    alpha: float = DEFAULT_ALPHA
    mu: float = DEFAULT_PENALIZED_MU
    epsilon: float = DEFAULT_EPSILON
    max_iters: int = DEFAULT_ADMM_MAX_ITERS
    early_exit_on_codeword: bool = True

    def __post_init__(self):
        if not np.isfinite(self.alpha) or self.alpha < 0:
            raise ParameterError(f"alpha must be non-negative, got {self.alpha}")
        for name in ("mu", "epsilon"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ParameterError(f"{name} must be positive, got {value}")
        if isinstance(self.max_iters, bool) or int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ParameterError(f"max_iters must be an integer >= 1, got {self.max_iters}")
        object.__setattr__(self, "max_iters", int(self.max_iters))
        object.__setattr__(self, "early_exit_on_codeword", bool(self.early_exit_on_codeword))

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def check_convexity(h: ParityCheckMatrix, params: PenalizedParams) -> None:
    """The x-subproblem is strictly convex only if mu * |N(i)| > 2 alpha for every i.

    Raises:
        ParameterError: the guard fails for some variable.
    """
    min_degree = int(h.var_degrees.min())
    if params.mu * min_degree <= 2 * params.alpha:
        raise ParameterError(
            f"mu * min variable degree must exceed 2 * alpha "
            f"(mu={params.mu}, min degree={min_degree}, alpha={params.alpha})"
        )


def penalized_x_update(state: AdmmState, gamma: np.ndarray, params: PenalizedParams, h: ParityCheckMatrix) -> np.ndarray:
    d = consensus_sum(h, state.z, state.lambda1, params.mu)
    return project_box((d - gamma - params.alpha) / (params.mu * h.var_degrees - 2 * params.alpha))


def _step(h: ParityCheckMatrix, gamma: np.ndarray, params: PenalizedParams, state: AdmmState) -> AdmmState:
    x = penalized_x_update(state, gamma, params, h)
    z = pp_update(h, x, state.lambda1, params.mu)
    state = replace(
        state,
        x=x,
        z=z,
        lambda1=pp_dual_update(h, x, z, state.lambda1, params.mu),
        iter=state.iter + 1,
        primal_residual_pp=pp_residual(h, x, z),
        primal_residual_box=float("nan"),
    )
    if __debug__:
        assert_feasible(h, state)
    return state


def penalized_decode(
    h: ParityCheckMatrix,
    gamma,
    params: PenalizedParams,
    trace: IterationTrace | None = None,
) -> DecodeResult:
    """Decode one LLR vector with ADMM on the penalized LP.

    With ``alpha == 0`` this is plain ADMM LP decoding.

    Raises:
        ParameterError: convexity guard fails, or ``gamma`` is non-finite.
        CodeError: LLR length does not match ``h``.
    """
    llr = validate_inputs(h, gamma)
    check_convexity(h, params)

    return run_iterations(
        h,
        llr,
        initial_state(h, with_sphere=False),
        step=lambda s: _step(h, llr, params, s),
        converged=lambda s: s.primal_residual_pp < params.epsilon,
        max_iters=params.max_iters,
        early_exit_on_codeword=params.early_exit_on_codeword,
        decoder=DECODER_PENALIZED,
        trace=trace,
    )


class PenalizedDecoder(DecoderPlugin):
    """Decoder plugin serving the ``penalized`` id."""

    _PARAM_NAMES = {f.name for f in fields(PenalizedParams)}

    def __init__(self, plugin_dir: Path):
        super().__init__(plugin_dir)

    @property
    def name(self) -> str:
        return "l2-penalized ADMM LP"

    def get_supported_decoders(self) -> list[str]:
        return [DECODER_PENALIZED]

    def get_capabilities(self) -> dict[str, list[str]]:
        return {DECODER_PENALIZED: sorted(self._PARAM_NAMES)}

    def make_params(self, decoder_id: str, overrides: dict[str, Any]) -> PenalizedParams:
        return PenalizedParams(**self.merged(overrides, self._PARAM_NAMES))

    def check_code(self, decoder_id: str, h: ParityCheckMatrix, params: PenalizedParams) -> None:
        check_convexity(h, params)

    def decode(
        self,
        decoder_id: str,
        h: ParityCheckMatrix,
        gamma: np.ndarray,
        params: PenalizedParams,
        trace: IterationTrace | None = None,
    ) -> DecodeResult:
        return penalized_decode(h, gamma, params, trace=trace)
