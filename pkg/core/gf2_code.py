"""Binary linear codes: sparse parity-check matrices, alist I/O, GF(2) algebra.

Indices are 0-based in memory and 1-based in alist files. All types here are
immutable after construction and can be shared between threads.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .constants import ML_BRUTEFORCE_MAX_K
from .exceptions import AlistParseError, CodeError

logger = logging.getLogger(__name__)

# A binary word is a 1-D uint8 array with entries in {0, 1}.
BinaryWord = np.ndarray


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class CheckSelector:
    """Index gather standing in for the d x N selection matrix of one check."""

    check_index: int
    var_indices: tuple[int, ...]

    def __post_init__(self):
        if not self.var_indices:
            raise CodeError(f"check {self.check_index} has no variables")
        if any(a >= b for a, b in zip(self.var_indices, self.var_indices[1:])):
            raise CodeError(f"check {self.check_index}: indices not strictly increasing")

    @property
    def degree(self) -> int:
        return len(self.var_indices)

    def gather(self, x: np.ndarray) -> np.ndarray:
        """Return the entries of ``x`` taking part in this check."""
        return x[list(self.var_indices)]


@dataclass(frozen=True)
class ParityCheckMatrix:
    """Sparse M x N binary matrix with both Tanner-graph adjacency lists.

    ``rows[j]`` is N(j), the sorted variable indices of check j; ``cols[i]`` is
    N(i), the sorted check indices of variable i.
    """

    n_vars: int
    n_checks: int
    rows: tuple[tuple[int, ...], ...]
    cols: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n_vars < 1:
            raise CodeError("code length must be positive")
        if self.n_checks < 1:
            raise CodeError("a parity-check matrix needs at least one check")
        if len(self.rows) != self.n_checks or len(self.cols) != self.n_vars:
            raise CodeError("adjacency lists do not match the declared dimensions")

        for j, row in enumerate(self.rows):
            if not row:
                raise CodeError(f"check {j} has degree 0")
            _check_sorted_unique(row, self.n_vars, f"check {j}")
        for i, col in enumerate(self.cols):
            _check_sorted_unique(col, self.n_checks, f"variable {i}")

        expected = [[] for _ in range(self.n_vars)]
        for j, row in enumerate(self.rows):
            for i in row:
                expected[i].append(j)
        if any(tuple(e) != c for e, c in zip(expected, self.cols)):
            raise CodeError("rows and cols are inconsistent")

        unchecked = [i for i, col in enumerate(self.cols) if not col]
        if unchecked:
            logger.warning(f"{len(unchecked)} variable(s) take part in no check: {unchecked[:10]}")

    @classmethod
    def from_rows(cls, n_vars: int, rows: Iterable[Iterable[int]]) -> "ParityCheckMatrix":
        """Build a matrix from per-check variable lists, deriving the columns."""
        row_tuples = tuple(tuple(sorted(r)) for r in rows)
        cols: list[list[int]] = [[] for _ in range(n_vars)]
        for j, row in enumerate(row_tuples):
            for i in row:
                if not 0 <= i < n_vars:
                    raise CodeError(f"check {j}: variable index {i} out of range")
                cols[i].append(j)
        return cls(
            n_vars=n_vars,
            n_checks=len(row_tuples),
            rows=row_tuples,
            cols=tuple(tuple(c) for c in cols),
        )

    def selector(self, j: int) -> CheckSelector:
        return CheckSelector(check_index=j, var_indices=self.rows[j])

    # Flat edge layout, check-major: the edges of check j are
    # edge_vars[check_ptr[j]:check_ptr[j + 1]].

    @cached_property
    def edge_vars(self) -> np.ndarray:
        return _frozen(np.fromiter(
            (i for row in self.rows for i in row), dtype=np.int64, count=self.n_edges
        ))

    @cached_property
    def edge_checks(self) -> np.ndarray:
        return _frozen(np.repeat(np.arange(self.n_checks, dtype=np.int64), self.check_degrees))

    @cached_property
    def check_ptr(self) -> np.ndarray:
        return _frozen(np.concatenate(([0], np.cumsum(self.check_degrees))).astype(np.int64))

    @cached_property
    def check_degrees(self) -> np.ndarray:
        return _frozen(np.array([len(r) for r in self.rows], dtype=np.int64))

    @cached_property
    def var_degrees(self) -> np.ndarray:
        return _frozen(np.array([len(c) for c in self.cols], dtype=np.int64))

    @cached_property
    def n_edges(self) -> int:
        return sum(len(r) for r in self.rows)

    @cached_property
    def degree_groups(self) -> tuple[tuple[int, np.ndarray], ...]:
        """Checks grouped by degree as ``(d, edge_index_matrix)`` pairs.

        Row r of the (n_d, d) matrix lists the edge positions of the r-th check
        of degree d, so per-check vectors can be processed as one batch.
        """
        groups = []
        for d in sorted(set(self.check_degrees.tolist())):
            checks = np.flatnonzero(self.check_degrees == d)
            edges = self.check_ptr[checks][:, None] + np.arange(d)[None, :]
            groups.append((d, _frozen(edges)))
        return tuple(groups)


def _check_sorted_unique(indices: tuple[int, ...], bound: int, what: str) -> None:
    for a, b in zip(indices, indices[1:]):
        if a == b:
            raise CodeError(f"{what}: duplicate index {a}")
        if a > b:
            raise CodeError(f"{what}: indices not sorted")
    for v in indices:
        if not 0 <= v < bound:
            raise CodeError(f"{what}: index {v} out of range [0, {bound})")


@dataclass(frozen=True)
class GeneratorMatrix:
    """Basis of the GF(2) null space of H, one codeword per row."""

    n_vars: int
    basis: np.ndarray

    @property
    def k(self) -> int:
        return int(self.basis.shape[0])


# Dense conversion

def from_dense(matrix) -> ParityCheckMatrix:
    """Build a sparse matrix from a dense 0/1 array of shape (M, N)."""
    dense = np.asarray(matrix, dtype=np.int64)
    if dense.ndim != 2:
        raise CodeError("dense parity-check matrix must be 2-D")
    if np.any((dense != 0) & (dense != 1)):
        raise CodeError("dense parity-check matrix must be binary")
    return ParityCheckMatrix.from_rows(
        dense.shape[1], (np.flatnonzero(row).tolist() for row in dense)
    )


def to_dense(h: ParityCheckMatrix) -> np.ndarray:
    dense = np.zeros((h.n_checks, h.n_vars), dtype=np.uint8)
    dense[h.edge_checks, h.edge_vars] = 1
    return dense


# alist format

def parse_alist(text: bytes | str) -> ParityCheckMatrix:
    """Parse an alist description into a :class:`ParityCheckMatrix`.

    Raises:
        AlistParseError: with the 1-based line number of the offending line.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")

    lines = [
        (number, line.split())
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]
    cursor = iter(lines)

    def next_line(what: str) -> tuple[int, list[int]]:
        try:
            number, tokens = next(cursor)
        except StopIteration:
            last = lines[-1][0] if lines else 0
            raise AlistParseError(f"unexpected end of file, expected {what}", last + 1) from None
        try:
            return number, [int(t) for t in tokens]
        except ValueError:
            raise AlistParseError(f"non-integer token in {what}", number) from None

    number, header = next_line("header 'N M'")
    if len(header) != 2 or header[0] < 1 or header[1] < 1:
        raise AlistParseError("malformed header, expected 'N M' with N, M >= 1", number)
    n_vars, n_checks = header

    number, maxima = next_line("maximum degrees")
    if len(maxima) != 2 or min(maxima) < 0:
        raise AlistParseError("malformed maximum-degree line", number)
    max_col, max_row = maxima

    number, col_degrees = next_line("column degrees")
    if len(col_degrees) != n_vars:
        raise AlistParseError(f"expected {n_vars} column degrees, got {len(col_degrees)}", number)
    if any(d < 0 or d > max_col for d in col_degrees):
        raise AlistParseError("column degree outside [0, max_col_degree]", number)

    number, row_degrees = next_line("row degrees")
    if len(row_degrees) != n_checks:
        raise AlistParseError(f"expected {n_checks} row degrees, got {len(row_degrees)}", number)
    if any(d < 0 or d > max_row for d in row_degrees):
        raise AlistParseError("row degree outside [0, max_row_degree]", number)

    def read_lists(count, degrees, bound, width, what):
        lists = []
        for index in range(count):
            number, values = next_line(f"{what} {index + 1} neighbor list")
            if len(values) > max(width, degrees[index]):
                raise AlistParseError(f"too many entries for {what} {index + 1}", number)
            neighbors = [v for v in values if v != 0]
            if len(neighbors) != degrees[index]:
                raise AlistParseError(
                    f"{what} {index + 1} declares degree {degrees[index]} "
                    f"but lists {len(neighbors)} neighbors", number
                )
            if any(v < 0 or v > bound for v in neighbors):
                raise AlistParseError(f"{what} {index + 1}: neighbor index out of range 1..{bound}", number)
            if len(set(neighbors)) != len(neighbors):
                raise AlistParseError(f"{what} {index + 1}: duplicate neighbor", number)
            lists.append((number, sorted(v - 1 for v in neighbors)))
        return lists

    var_lists = read_lists(n_vars, col_degrees, n_checks, max_col, "variable")
    check_lists = read_lists(n_checks, row_degrees, n_vars, max_row, "check")

    for j, (number, row) in enumerate(check_lists):
        if not row:
            raise AlistParseError(f"check {j + 1} has degree 0", number)

    try:
        h = ParityCheckMatrix.from_rows(n_vars, (row for _, row in check_lists))
    except CodeError as e:
        raise AlistParseError(str(e), check_lists[0][0] if check_lists else 1) from e

    for i, (number, col) in enumerate(var_lists):
        if tuple(col) != h.cols[i]:
            raise AlistParseError(f"variable {i + 1} neighbor list disagrees with check lists", number)

    return h


def emit_alist(h: ParityCheckMatrix) -> bytes:
    """Serialize ``h`` in alist format with zero padding."""
    max_col = int(h.var_degrees.max(initial=0))
    max_row = int(h.check_degrees.max(initial=0))

    def padded(values: tuple[int, ...], width: int) -> str:
        entries = [v + 1 for v in values] + [0] * (width - len(values))
        return " ".join(str(e) for e in entries)

    lines = [
        f"{h.n_vars} {h.n_checks}",
        f"{max_col} {max_row}",
        " ".join(str(d) for d in h.var_degrees.tolist()),
        " ".join(str(d) for d in h.check_degrees.tolist()),
    ]
    lines.extend(padded(col, max_col) for col in h.cols)
    lines.extend(padded(row, max_row) for row in h.rows)
    return ("\n".join(lines) + "\n").encode("ascii")


# Syndromes

def _as_word(h: ParityCheckMatrix, w) -> np.ndarray:
    word = np.asarray(w, dtype=np.uint8)
    if word.shape != (h.n_vars,):
        raise CodeError(f"word length {word.size} does not match code length {h.n_vars}")
    return word


def syndrome(h: ParityCheckMatrix, w) -> np.ndarray:
    """Return the length-M syndrome of ``w`` (XOR over each N(j))."""
    word = _as_word(h, w)
    sums = np.add.reduceat(word[h.edge_vars].astype(np.int64), h.check_ptr[:-1])
    return (sums & 1).astype(np.uint8)


def is_codeword(h: ParityCheckMatrix, w) -> bool:
    return not syndrome(h, w).any()


# GF(2) elimination on bit-packed rows

def _rref_gf2(dense: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2); returns (nonzero rows, pivot columns)."""
    m, n = dense.shape
    packed = np.packbits(dense.astype(np.uint8), axis=1)
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        byte = col >> 3
        mask = np.uint8(0x80 >> (col & 7))
        hits = np.flatnonzero(packed[row:, byte] & mask)
        if hits.size == 0:
            continue
        pivot = row + int(hits[0])
        if pivot != row:
            packed[[row, pivot]] = packed[[pivot, row]]
        others = np.flatnonzero(packed[:, byte] & mask)
        others = others[others != row]
        packed[others] ^= packed[row]
        pivots.append(col)
        row += 1
    return np.unpackbits(packed[:row], axis=1, count=n), pivots


def rank_gf2(h: ParityCheckMatrix) -> int:
    _, pivots = _rref_gf2(to_dense(h))
    return len(pivots)


def derive_generator(h: ParityCheckMatrix) -> GeneratorMatrix:
    """Basis of the null space of H, k = N - rank_GF2(H) rows."""
    reduced, pivots = _rref_gf2(to_dense(h))
    pivot_set = set(pivots)
    free = [c for c in range(h.n_vars) if c not in pivot_set]

    basis = np.zeros((len(free), h.n_vars), dtype=np.uint8)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for r, p in enumerate(pivots):
            basis[t, p] = reduced[r, f]

    logger.debug(f"Derived generator: N={h.n_vars} rank={len(pivots)} k={len(free)}")
    return GeneratorMatrix(n_vars=h.n_vars, basis=_frozen(basis))


def encode(g: GeneratorMatrix, msg) -> BinaryWord:
    """Map a length-k message to the codeword ``msg @ G`` over GF(2)."""
    message = np.asarray(msg, dtype=np.int64)
    if message.shape != (g.k,):
        raise CodeError(f"message length {message.size} does not match k={g.k}")
    return ((message @ g.basis.astype(np.int64)) & 1).astype(np.uint8)


def ml_decode_bruteforce(g: GeneratorMatrix, gamma, chunk_bits: int = 14) -> BinaryWord:
    """Exact ML decoding by enumerating all 2^k codewords.

    Ties are broken towards the lexicographically smallest codeword.
    """
    if g.k > ML_BRUTEFORCE_MAX_K:
        raise CodeError(f"k={g.k} exceeds the enumeration limit {ML_BRUTEFORCE_MAX_K}")
    llr = np.asarray(gamma, dtype=np.float64)
    if llr.shape != (g.n_vars,):
        raise CodeError(f"LLR length {llr.size} does not match code length {g.n_vars}")

    basis = g.basis.astype(np.int64)
    total = 1 << g.k
    chunk = 1 << min(chunk_bits, g.k)
    shifts = np.arange(g.k, dtype=np.int64)

    best_value = np.inf
    best_word: tuple[int, ...] | None = None
    for start in range(0, total, chunk):
        index = np.arange(start, min(start + chunk, total), dtype=np.int64)
        messages = (index[:, None] >> shifts[None, :]) & 1
        words = (messages @ basis) & 1
        values = words @ llr
        low = float(values.min())
        tol = 1e-12 * (1.0 + abs(low))
        chunk_best = min(tuple(row) for row in words[values <= low + tol].tolist())
        if best_word is None or low < best_value - tol:
            best_value, best_word = low, chunk_best
        elif low <= best_value + tol:
            best_value, best_word = min(best_value, low), min(best_word, chunk_best)

    return np.array(best_word, dtype=np.uint8)


# Code construction and lookup

def regular_code(n: int, dv: int, dc: int, seed: int = 0) -> ParityCheckMatrix:
    """Gallager (dv, dc)-regular code: one consecutive band, dv - 1 permuted bands."""
    if n % dc:
        raise CodeError(f"n={n} is not a multiple of dc={dc}")
    rng = np.random.default_rng(seed)
    band = n // dc
    rows = [list(range(r * dc, (r + 1) * dc)) for r in range(band)]
    for _ in range(dv - 1):
        perm = rng.permutation(n)
        rows.extend(sorted(perm[r * dc:(r + 1) * dc].tolist()) for r in range(band))
    return ParityCheckMatrix.from_rows(n, rows)


def degree_profile(h: ParityCheckMatrix) -> dict[str, dict[int, int]]:
    """Histograms ``{degree: count}`` for variables and checks."""
    return {
        "variables": dict(sorted(Counter(h.var_degrees.tolist()).items())),
        "checks": dict(sorted(Counter(h.check_degrees.tolist()).items())),
    }


CODE_REGISTRY: dict[str, Callable[[], ParityCheckMatrix]] = {
    "spc3": lambda: ParityCheckMatrix.from_rows(3, [[0, 1, 2]]),
    "hamming7": lambda: ParityCheckMatrix.from_rows(7, [[0, 1, 2, 4], [0, 1, 3, 5], [0, 2, 3, 6]]),
    "regular96": lambda: regular_code(96, 3, 6, seed=96),
    "regular204": lambda: regular_code(204, 3, 6, seed=204),
}


def load_code(ref: str | Path) -> ParityCheckMatrix:
    """Resolve a registry name or read an alist file.

    Raises:
        FileNotFoundError: ``ref`` is neither a registry name nor an existing file.
        AlistParseError: the file is not valid alist.
    """
    if str(ref) in CODE_REGISTRY:
        return CODE_REGISTRY[str(ref)]()
    path = Path(ref)
    h = parse_alist(path.read_bytes())
    logger.info(f"Loaded code {path.name}: N={h.n_vars} M={h.n_checks}")
    return h
