"""Shared ADMM iteration engine for the LP-type decoders.

Per-check vectors (z_j and lambda_{1,j}) are stored as one flat array over the
edges of the Tanner graph in check-major order, so the segment of check j is
``[h.check_ptr[j]:h.check_ptr[j + 1]]``. The selection matrices P_j never
exist densely: ``x[h.edge_vars]`` stacks every P_j x, and a weighted
``bincount`` over ``h.edge_vars`` applies sum_j P_j^T.
"""

import logging
import time
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .constants import PP_FEASIBILITY_TOL, SPHERE_FEASIBILITY_TOL
from .exceptions import CodeError, ParameterError
from .geometry import pp_contains, project_pp, project_sphere
from .gf2_code import ParityCheckMatrix, is_codeword
from .models import DecodeResult, Termination

logger = logging.getLogger(__name__)


@dataclass
class AdmmState:
    """ADMM iterates plus residuals of the last completed iteration.

    ``y`` and ``lambda2`` are ``None`` for decoders without the sphere split.
    """

    x: np.ndarray
    y: np.ndarray | None
    z: np.ndarray
    lambda1: np.ndarray
    lambda2: np.ndarray | None
    iter: int = 0
    primal_residual_pp: float = float("inf")
    primal_residual_box: float = float("inf")

    def copy(self) -> "AdmmState":
        return replace(
            self,
            x=self.x.copy(),
            y=None if self.y is None else self.y.copy(),
            z=self.z.copy(),
            lambda1=self.lambda1.copy(),
            lambda2=None if self.lambda2 is None else self.lambda2.copy(),
        )


IterationTrace = Callable[[AdmmState], None]


def initial_state(h: ParityCheckMatrix, with_sphere: bool) -> AdmmState:
    """Uninformative start at the centre of the box.

    y cannot start at the centre of its own sphere, so it takes the
    deterministic fallback point of the sphere projection.
    """
    x = np.full(h.n_vars, 0.5)
    return AdmmState(
        x=x,
        y=project_sphere(x) if with_sphere else None,
        z=project_checks(h, np.full(h.n_edges, 0.5)),
        lambda1=np.zeros(h.n_edges),
        lambda2=np.zeros(h.n_vars) if with_sphere else None,
    )


def validate_inputs(h: ParityCheckMatrix, gamma) -> np.ndarray:
    llr = np.asarray(gamma, dtype=np.float64)
    if llr.shape != (h.n_vars,):
        raise CodeError(f"LLR length {llr.size} does not match code length {h.n_vars}")
    if not np.all(np.isfinite(llr)):
        raise ParameterError("LLR vector contains non-finite entries")
    return llr


def validate_state(h: ParityCheckMatrix, state: AdmmState, with_sphere: bool) -> AdmmState:
    if state.x.shape != (h.n_vars,) or state.z.shape != (h.n_edges,) or state.lambda1.shape != (h.n_edges,):
        raise CodeError("initial state does not match the code dimensions")
    if with_sphere and (state.y is None or state.lambda2 is None):
        raise CodeError("initial state lacks the sphere iterates")
    return state.copy()


def consensus_sum(h: ParityCheckMatrix, z: np.ndarray, lambda1: np.ndarray, mu: float) -> np.ndarray:
    """d_i = sum over j in N(i) of mu * z_j^(i) - lambda_{1,j}^(i)."""
    return np.bincount(h.edge_vars, weights=mu * z - lambda1, minlength=h.n_vars)


def project_checks(h: ParityCheckMatrix, stacked: np.ndarray) -> np.ndarray:
    """Project every check segment of ``stacked`` onto its parity polytope."""
    z = np.empty_like(stacked)
    for _, edges in h.degree_groups:
        z[edges] = project_pp(stacked[edges])
    return z


def pp_update(h: ParityCheckMatrix, x: np.ndarray, lambda1: np.ndarray, mu: float) -> np.ndarray:
    """z_j = Pi_PP(P_j x + lambda_{1,j} / mu) for every check."""
    return project_checks(h, x[h.edge_vars] + lambda1 / mu)


def pp_dual_update(h: ParityCheckMatrix, x: np.ndarray, z: np.ndarray, lambda1: np.ndarray, mu: float) -> np.ndarray:
    return lambda1 + mu * (x[h.edge_vars] - z)


def pp_residual(h: ParityCheckMatrix, x: np.ndarray, z: np.ndarray) -> float:
    """max_j ||P_j x - z_j||_inf."""
    return float(np.max(np.abs(x[h.edge_vars] - z)))


def assert_feasible(h: ParityCheckMatrix, state: AdmmState) -> None:
    """Assert x lies in the box, y on the sphere and every z_j in its parity polytope."""
    assert np.all((state.x >= 0.0) & (state.x <= 1.0)), f"iteration {state.iter}: x outside [0, 1]^N"
    if state.y is not None:
        gap = abs(float(np.sum((state.y - 0.5) ** 2)) - h.n_vars / 4)
        assert gap <= SPHERE_FEASIBILITY_TOL * h.n_vars, f"iteration {state.iter}: y off the sphere by {gap:.2e}"
    for d, edges in h.degree_groups:
        assert np.all(pp_contains(state.z[edges], tol=PP_FEASIBILITY_TOL)), (
            f"iteration {state.iter}: z outside the degree-{d} parity polytope"
        )


def round_to_word(x) -> np.ndarray:
    """Threshold at 1/2; ties go to 0."""
    return (np.asarray(x) > 0.5).astype(np.uint8)


def run_iterations(
    h: ParityCheckMatrix,
    gamma: np.ndarray,
    state: AdmmState,
    step: Callable[[AdmmState], AdmmState],
    converged: Callable[[AdmmState], bool],
    max_iters: int,
    early_exit_on_codeword: bool,
    decoder: str,
    trace: IterationTrace | None = None,
) -> DecodeResult:
    """Drive ``step`` until ``converged``, a codeword (if enabled) or ``max_iters``."""
    start = time.perf_counter()
    termination = Termination.MAX_ITERS

    for _ in range(max_iters):
        state = step(state)
        if trace is not None:
            trace(state)
        if converged(state):
            termination = Termination.CONVERGED
            break
        if early_exit_on_codeword and is_codeword(h, round_to_word(state.x)):
            termination = Termination.EARLY_CODEWORD
            break

    word = round_to_word(state.x)
    elapsed = time.perf_counter() - start
    logger.debug(
        f"{decoder}: {termination.value} after {state.iter} iterations "
        f"(r_pp={state.primal_residual_pp:.2e}, r_box={state.primal_residual_box:.2e})"
    )
    return DecodeResult(
        word=word,
        is_valid_codeword=is_codeword(h, word),
        iterations=state.iter,
        termination=termination,
        wall_time=elapsed,
        objective=float(gamma @ state.x),
        decoder=decoder,
    )
