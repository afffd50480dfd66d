"""l2-box ADMM decoder plugin implementation.

The binary constraint x in {0,1}^N is replaced by the intersection of the box
[0,1]^N with the sphere ||y - 1/2||^2 = N/4, coupled through y = x. Each
iteration runs x -> y -> z -> (lambda1, lambda2), every subproblem in closed
form.
"""

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
    validate_state,
)
from core.constants import (
    DECODER_L2BOX,
    DEFAULT_ADMM_MAX_ITERS,
    DEFAULT_EPSILON,
    DEFAULT_MU1,
    DEFAULT_MU2,
)
from core.decoder_base import DecoderPlugin
from core.exceptions import ParameterError
from core.geometry import project_box, project_sphere
from core.gf2_code import ParityCheckMatrix
from core.models import DecodeResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class L2BoxParams:
    """Penalty parameters and stopping rule of the l2-box decoder."""

    mu1: float = DEFAULT_MU1
    mu2: float = DEFAULT_MU2
    epsilon: float = DEFAULT_EPSILON
    max_iters: int = DEFAULT_ADMM_MAX_ITERS
    early_exit_on_codeword: bool = False

    def __post_init__(self):
        for name in ("mu1", "mu2", "epsilon"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ParameterError(f"{name} must be positive, got {value}")
        if isinstance(self.max_iters, bool) or int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ParameterError(f"max_iters must be an integer >= 1, got {self.max_iters}")
        object.__setattr__(self, "max_iters", int(self.max_iters))
        object.__setattr__(self, "early_exit_on_codeword", bool(self.early_exit_on_codeword))

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def l2box_x_update(state: AdmmState, gamma: np.ndarray, params: L2BoxParams, h: ParityCheckMatrix) -> np.ndarray:
    """Closed-form x-subproblem, clipped to the box.

    Variables without checks reduce to ``(mu2 * y_i - gamma_i - lambda2_i) / mu2``.
    """
    d = consensus_sum(h, state.z, state.lambda1, params.mu1)
    numerator = d - gamma - state.lambda2 + params.mu2 * state.y
    return project_box(numerator / (params.mu1 * h.var_degrees + params.mu2))


def l2box_y_update(state: AdmmState, params: L2BoxParams) -> np.ndarray:
    """Project ``mu2 (x - 1/2) + lambda2`` radially onto the sphere.

    Only the direction matters, so any positive rescaling gives the same y.
    """
    direction = params.mu2 * (state.x - 0.5) + state.lambda2
    return project_sphere(0.5 + direction)


def l2box_z_update(state: AdmmState, params: L2BoxParams, h: ParityCheckMatrix) -> np.ndarray:
    return pp_update(h, state.x, state.lambda1, params.mu1)


def l2box_dual_update(state: AdmmState, params: L2BoxParams, h: ParityCheckMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Dual ascent on both coupling constraints: returns (lambda1, lambda2)."""
    lambda1 = pp_dual_update(h, state.x, state.z, state.lambda1, params.mu1)
    lambda2 = state.lambda2 + params.mu2 * (state.x - state.y)
    return lambda1, lambda2


def _step(h: ParityCheckMatrix, gamma: np.ndarray, params: L2BoxParams, state: AdmmState) -> AdmmState:
    # y and z both consume the fresh x
    state = replace(state, x=l2box_x_update(state, gamma, params, h))
    state = replace(state, y=l2box_y_update(state, params))
    state = replace(state, z=l2box_z_update(state, params, h))
    lambda1, lambda2 = l2box_dual_update(state, params, h)
    state = replace(
        state,
        lambda1=lambda1,
        lambda2=lambda2,
        iter=state.iter + 1,
        primal_residual_pp=pp_residual(h, state.x, state.z),
        primal_residual_box=float(np.max(np.abs(state.x - state.y))),
    )
    if __debug__:
        assert_feasible(h, state)
    return state


def l2box_decode(
    h: ParityCheckMatrix,
    gamma,
    params: L2BoxParams,
    init: AdmmState | None = None,
    trace: IterationTrace | None = None,
) -> DecodeResult:
    """Decode one LLR vector with the l2-box ADMM decoder.

    Args:
        h: Parity-check matrix
        gamma: LLR vector of length N
        params: Decoder parameters
        init: Optional starting iterate (copied, never mutated)
        trace: Optional callback receiving the state after every iteration

    Raises:
        CodeError: LLR length or ``init`` shape does not match ``h``.
        ParameterError: ``gamma`` has non-finite entries.
    """
    llr = validate_inputs(h, gamma)
    state = validate_state(h, init, with_sphere=True) if init is not None else initial_state(h, with_sphere=True)

    def converged(s: AdmmState) -> bool:
        return s.primal_residual_pp < params.epsilon and s.primal_residual_box < params.epsilon

    return run_iterations(
        h,
        llr,
        state,
        step=lambda s: _step(h, llr, params, s),
        converged=converged,
        max_iters=params.max_iters,
        early_exit_on_codeword=params.early_exit_on_codeword,
        decoder=DECODER_L2BOX,
        trace=trace,
    )


class L2BoxDecoder(DecoderPlugin):
    """Decoder plugin serving the ``l2box`` id."""

    _PARAM_NAMES = {f.name for f in fields(L2BoxParams)}

    def __init__(self, plugin_dir: Path):
        super().__init__(plugin_dir)

    @property
    def name(self) -> str:
        return "l2-box ADMM"

    def get_supported_decoders(self) -> list[str]:
        return [DECODER_L2BOX]

    def get_capabilities(self) -> dict[str, list[str]]:
        return {DECODER_L2BOX: sorted(self._PARAM_NAMES)}

    def make_params(self, decoder_id: str, overrides: dict[str, Any]) -> L2BoxParams:
        return L2BoxParams(**self.merged(overrides, self._PARAM_NAMES))

    def decode(
        self,
        decoder_id: str,
        h: ParityCheckMatrix,
        gamma: np.ndarray,
        params: L2BoxParams,
        trace: IterationTrace | None = None,
    ) -> DecodeResult:
        return l2box_decode(h, gamma, params, trace=trace)
