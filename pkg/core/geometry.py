"""Euclidean projections used by the ADMM decoders.

Three sets are involved: the unit box, the l2 sphere through the corners of the
box (centre 1/2, radius sqrt(N)/2) and the parity polytope PP_d, the convex hull
of the even-weight binary vectors of length d. Box and sphere meet exactly in
{0, 1}^N.

All functions are pure. ``project_pp`` and ``pp_contains`` accept a single
vector of shape (d,) or a batch of shape (B, d).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .constants import PP_BRUTEFORCE_MAX_DIM, PP_MEMBERSHIP_TOL
from .exceptions import ParameterError


@dataclass(frozen=True)
class SphereSpec:
    """l2 sphere of dimension ``dim`` centred at 1/2 with radius sqrt(dim)/2."""

    dim: int

    @property
    def radius(self) -> float:
        return float(np.sqrt(self.dim) / 2.0)

    @property
    def center(self) -> np.ndarray:
        return np.full(self.dim, 0.5)


@dataclass(frozen=True)
class ParityPolytopeSpec:
    """Parity polytope PP_d for a check of degree ``dim``."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ParameterError("parity polytope dimension must be at least 1")


def project_box(v) -> np.ndarray:
    """Componentwise clamp to [0, 1]."""
    return np.clip(np.asarray(v, dtype=np.float64), 0.0, 1.0)


def project_sphere(v, spec: SphereSpec | None = None) -> np.ndarray:
    """Radial projection onto the sphere ||y - 1/2||^2 = N/4.

    The centre itself has no unique projection; it is mapped along e_1.
    """
    values = np.asarray(v, dtype=np.float64)
    spec = spec or SphereSpec(values.size)
    if values.shape != (spec.dim,):
        raise ParameterError(f"expected a vector of length {spec.dim}, got shape {values.shape}")
    direction = values - 0.5
    norm = np.linalg.norm(direction)
    if norm == 0.0:
        direction = np.zeros_like(values)
        direction[0] = 1.0
        norm = 1.0
    return 0.5 + direction * (spec.radius / norm)


def _greedy_odd_set(clipped: np.ndarray) -> np.ndarray:
    """Odd index set of the most violated parity inequality, one row per point.

    Take every coordinate above 1/2; if that set is even, toggle the
    coordinate closest to 1/2.
    """
    odd = clipped > 0.5
    even_rows = np.flatnonzero(odd.sum(axis=1) % 2 == 0)
    closest = np.argmin(np.abs(clipped[even_rows] - 0.5), axis=1)
    odd[even_rows, closest] = ~odd[even_rows, closest]
    return odd


def _facet_excess(points: np.ndarray, odd: np.ndarray) -> np.ndarray:
    """sum_S v - sum_notS v - (|S| - 1) per row; positive means violated."""
    signed = np.where(odd, points, -points).sum(axis=1)
    return signed - (odd.sum(axis=1) - 1)


def _project_capped_simplex(a: np.ndarray, total: float) -> np.ndarray:
    """Rows of clip(a - tau, 0, 1) with tau chosen so every row sums to ``total``.

    The row sum is piecewise linear and nonincreasing in tau with breakpoints
    at a_i - 1 and a_i; sort them and interpolate on the bracketing segment.
    """
    breaks = np.sort(np.concatenate((a - 1.0, a), axis=1), axis=1)
    sums = np.clip(a[:, None, :] - breaks[:, :, None], 0.0, 1.0).sum(axis=2)
    upper = np.argmax(sums <= total, axis=1)[:, None]
    lower = upper - 1

    b_lo = np.take_along_axis(breaks, lower, axis=1)
    b_hi = np.take_along_axis(breaks, upper, axis=1)
    f_lo = np.take_along_axis(sums, lower, axis=1)
    f_hi = np.take_along_axis(sums, upper, axis=1)
    tau = b_lo + (f_lo - total) * (b_hi - b_lo) / (f_lo - f_hi)
    return np.clip(a - tau, 0.0, 1.0)


def _as_batch(v, spec: ParityPolytopeSpec | None) -> tuple[np.ndarray, tuple[int, ...]]:
    values = np.asarray(v, dtype=np.float64)
    if values.ndim == 0 or values.shape[-1] < 1:
        raise ParameterError("parity polytope input must have at least one coordinate")
    if spec is not None and values.shape[-1] != spec.dim:
        raise ParameterError(f"expected dimension {spec.dim}, got {values.shape[-1]}")
    return values.reshape(-1, values.shape[-1]), values.shape


def pp_contains(v, spec: ParityPolytopeSpec | None = None, tol: float = PP_MEMBERSHIP_TOL):
    """Membership test for PP_d via the box and the greedy odd-set facet."""
    batch, shape = _as_batch(v, spec)
    in_box = np.all((batch >= -tol) & (batch <= 1.0 + tol), axis=1)
    odd = _greedy_odd_set(np.clip(batch, 0.0, 1.0))
    inside = in_box & (_facet_excess(batch, odd) <= tol)
    return bool(inside[0]) if len(shape) == 1 else inside.reshape(shape[:-1])


def project_pp(v, spec: ParityPolytopeSpec | None = None) -> np.ndarray:
    """Euclidean projection onto the parity polytope.

    After clamping to the box at most one odd-set facet can be violated. If it
    is, the projection lies on that facet: flip the coordinates outside S,
    which turns the facet into sum(w) = d - 1, project onto that capped simplex
    slice and flip back.
    """
    batch, shape = _as_batch(v, spec)
    d = batch.shape[1]
    clipped = np.clip(batch, 0.0, 1.0)
    odd = _greedy_odd_set(clipped)
    violated = _facet_excess(clipped, odd) > 0.0

    result = clipped
    if violated.any():
        rows = batch[violated]
        row_odd = odd[violated]
        flipped = np.where(row_odd, rows, 1.0 - rows)
        slice_point = _project_capped_simplex(flipped, d - 1.0)
        result[violated] = np.where(row_odd, slice_point, 1.0 - slice_point)
    return result.reshape(shape)


@lru_cache(maxsize=None)
def even_weight_vertices(d: int) -> np.ndarray:
    """All even-weight binary vectors of length d, shape (2^(d-1), d)."""
    index = np.arange(1 << d)
    bits = (index[:, None] >> np.arange(d)[None, :]) & 1
    vertices = bits[bits.sum(axis=1) % 2 == 0].astype(np.float64)
    vertices.setflags(write=False)
    return vertices


def _affine_minimizer(points: np.ndarray) -> np.ndarray:
    """Weights (summing to one) of the min-norm point of the affine hull of rows."""
    k = points.shape[0]
    system = np.zeros((k + 1, k + 1))
    system[:k, :k] = points @ points.T
    system[:k, k] = 1.0
    system[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    solution = np.linalg.lstsq(system, rhs, rcond=None)[0]
    return solution[:k]


def pp_project_bruteforce(
    v,
    spec: ParityPolytopeSpec | None = None,
    tol: float = 1e-13,
    max_iters: int = 10_000,
) -> np.ndarray:
    """Reference projection onto PP_d as the nearest point of its vertex hull.

    Runs Wolfe's active-set min-norm-point method on the shifted vertex set
    until the variational inequality (v - p).(w - p) <= tol holds for every
    even-weight vertex w. Test oracle only; limited to d <= 8.
    """
    point = np.asarray(v, dtype=np.float64)
    d = point.size
    if spec is not None and spec.dim != d:
        raise ParameterError(f"expected dimension {spec.dim}, got {d}")
    if not 1 <= d <= PP_BRUTEFORCE_MAX_DIM:
        raise ParameterError(f"brute-force projection supports 1 <= d <= {PP_BRUTEFORCE_MAX_DIM}")

    shifted = even_weight_vertices(d) - point
    support = [int(np.argmin(np.einsum("ij,ij->i", shifted, shifted)))]
    weights = np.ones(1)
    x = shifted[support[0]].copy()

    for _ in range(max_iters):
        scores = shifted @ x
        j = int(np.argmin(scores))
        if x @ x - scores[j] <= tol or j in support:
            break
        support.append(j)
        weights = np.append(weights, 0.0)

        while True:
            alpha = _affine_minimizer(shifted[support])
            if np.all(alpha > 0.0):
                weights = alpha
                break
            shrinking = alpha <= 0.0
            gap = weights[shrinking] - alpha[shrinking]
            ratios = np.divide(weights[shrinking], gap, out=np.zeros_like(gap), where=gap > 0.0)
            theta = np.min(ratios)
            weights = weights + theta * (alpha - weights)
            keep = weights > 1e-15
            support = [s for s, kept in zip(support, keep) if kept]
            weights = weights[keep]
            weights = weights / weights.sum()
        x = weights @ shifted[support]

    return point + x
