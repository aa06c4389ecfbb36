"""
Exact Rational Matrices

Rank, determinant, inversion and kernel dimension over the rationals, with no
floating point anywhere. Matrices store their nonzero entries sparsely and
switch to dense rows once the fill ratio passes the configured threshold.

Sparse elimination pivots on the shortest available row and hands the
remaining block to fraction-free (Bareiss) elimination on integer rows as soon
as fill-in makes it dense.
"""

import logging
from fractions import Fraction
from math import lcm
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

from frobenius_toolkit.utils.config import get_settings

logger = logging.getLogger(__name__)

DENSE_FILL_RATIO = get_settings().dense_fill

Entry = Tuple[int, int]


class SingularMatrixError(ValueError):
    """Raised when a matrix that must be invertible is singular."""

    def __init__(self, kernel_dimension: int, message: Optional[str] = None):
        self.kernel_dimension = kernel_dimension
        super().__init__(message or f"matrix is singular (kernel dimension {kernel_dimension})")


class EliminationResult(NamedTuple):
    rank: int
    determinant: Optional[Fraction]


class RationalMatrix:
    """Immutable rows x cols matrix over the rationals."""

    __slots__ = ("rows", "cols", "_entries", "_dense")

    def __init__(self, rows: int, cols: int, entries: Optional[Dict[Entry, object]] = None):
        if rows < 0 or cols < 0:
            raise ValueError(f"Matrix shape must be non-negative, got {rows}x{cols}")
        cleaned: Dict[Entry, Fraction] = {}
        for (r, c), value in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"Entry ({r}, {c}) outside a {rows}x{cols} matrix")
            value = Fraction(value)
            if value:
                cleaned[(r, c)] = value
        self.rows = rows
        self.cols = cols
        if rows * cols and len(cleaned) > DENSE_FILL_RATIO * rows * cols:
            dense = [[Fraction(0)] * cols for _ in range(rows)]
            for (r, c), value in cleaned.items():
                dense[r][c] = value
            self._dense: Optional[Tuple[Tuple[Fraction, ...], ...]] = tuple(tuple(row) for row in dense)
            self._entries: Optional[Dict[Entry, Fraction]] = None
        else:
            self._dense = None
            self._entries = cleaned

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> "RationalMatrix":
        """Build a matrix from a list of equal-length rows."""
        n_rows = len(rows)
        n_cols = len(rows[0]) if n_rows else 0
        entries = {}
        for r, row in enumerate(rows):
            if len(row) != n_cols:
                raise ValueError("All rows must have the same length")
            for c, value in enumerate(row):
                if value:
                    entries[(r, c)] = value
        return cls(n_rows, n_cols, entries)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols)

    @property
    def is_dense(self) -> bool:
        return self._dense is not None

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def nnz(self) -> int:
        return sum(1 for _ in self.items())

    def entry(self, r: int, c: int) -> Fraction:
        if self._dense is not None:
            return self._dense[r][c]
        return self._entries.get((r, c), Fraction(0))

    def items(self) -> Iterator[Tuple[Entry, Fraction]]:
        """Nonzero entries in row-major order."""
        if self._dense is not None:
            for r, row in enumerate(self._dense):
                for c, value in enumerate(row):
                    if value:
                        yield (r, c), value
        else:
            for key in sorted(self._entries):
                yield key, self._entries[key]

    def to_rows(self) -> List[List[Fraction]]:
        if self._dense is not None:
            return [list(row) for row in self._dense]
        dense = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), value in self._entries.items():
            dense[r][c] = value
        return dense

    def sparse_rows(self) -> List[Dict[int, Fraction]]:
        result: List[Dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (r, c), value in self.items():
            result[r][c] = value
        return result

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.items()})

    def scale(self, factor: object) -> "RationalMatrix":
        factor = Fraction(factor)
        return RationalMatrix(self.rows, self.cols, {k: v * factor for k, v in self.items()})

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        right = other.sparse_rows()
        product: Dict[Entry, Fraction] = {}
        for (r, k), value in self.items():
            for c, other_value in right[k].items():
                product[(r, c)] = product.get((r, c), Fraction(0)) + value * other_value
        return RationalMatrix(self.rows, other.cols, product)

    __matmul__ = matmul

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("Cannot add matrices of different shapes")
        total = dict(self.items())
        for key, value in other.items():
            total[key] = total.get(key, Fraction(0)) + value
        return RationalMatrix(self.rows, self.cols, total)

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and dict(self.items()) == dict(other.items())

    __hash__ = None

    def __repr__(self) -> str:
        storage = "dense" if self.is_dense else "sparse"
        return f"RationalMatrix({self.rows}x{self.cols}, nnz={self.nnz}, {storage})"

    def is_skew_symmetric(self) -> bool:
        if not self.is_square:
            return False
        return all(self.entry(c, r) == -value for (r, c), value in self.items()) and all(
            not self.entry(i, i) for i in range(self.rows)
        )

    def submatrix(self, row_indices: Sequence[int], col_indices: Sequence[int]) -> "RationalMatrix":
        row_pos = {r: i for i, r in enumerate(row_indices)}
        col_pos = {c: j for j, c in enumerate(col_indices)}
        entries = {
            (row_pos[r], col_pos[c]): value
            for (r, c), value in self.items()
            if r in row_pos and c in col_pos
        }
        return RationalMatrix(len(row_indices), len(col_indices), entries)


def _permutation_sign(order: Sequence[int]) -> int:
    position = {value: index for index, value in enumerate(sorted(order))}
    perm = [position[value] for value in order]
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _bareiss(rows: List[List[Fraction]], n_cols: int) -> Tuple[int, Fraction]:
    """
    Fraction-free elimination of a dense block.

    Each row is first cleared of denominators, so the sweep itself runs on
    Python integers; every division below is exact.

    Returns:
        (rank, determinant), the determinant only meaningful for square input.
    """
    scale = 1
    a: List[List[int]] = []
    for row in rows:
        multiplier = 1
        for value in row:
            multiplier = lcm(multiplier, value.denominator)
        a.append([int(value * multiplier) for value in row])
        scale *= multiplier

    n_rows = len(a)
    prev = 1
    sign = 1
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pivot = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            a[r], a[pivot] = a[pivot], a[r]
            sign = -sign
        pivot_row = a[r]
        p = pivot_row[c]
        for i in range(r + 1, n_rows):
            row = a[i]
            factor = row[c]
            for j in range(c + 1, n_cols):
                row[j] = (row[j] * p - factor * pivot_row[j]) // prev
            row[c] = 0
        prev = p
        r += 1

    if n_rows == n_cols and r == n_rows:
        determinant = Fraction(sign * a[n_rows - 1][n_cols - 1], scale) if n_rows else Fraction(1)
    else:
        determinant = Fraction(0)
    return r, determinant


class _SparseRows:
    """Mutable sparse rows with a column index, used during elimination."""

    def __init__(self, rows: List[Dict[int, Fraction]]):
        self.rows = rows
        self.column_rows: Dict[int, Set[int]] = {}
        for r, row in enumerate(rows):
            for c in row:
                self.column_rows.setdefault(c, set()).add(r)

    def rows_in_column(self, c: int) -> Set[int]:
        return self.column_rows.get(c, set())

    def subtract(self, target: int, source: int, factor: Fraction) -> int:
        """row[target] -= factor * row[source]; returns the change in stored entries."""
        row = self.rows[target]
        delta = 0
        for c, value in self.rows[source].items():
            new = row.get(c, 0) - factor * value
            if new:
                if c not in row:
                    self.column_rows.setdefault(c, set()).add(target)
                    delta += 1
                row[c] = new
            elif c in row:
                del row[c]
                self.column_rows[c].discard(target)
                delta -= 1
        return delta


def _sparse_eliminate(rows: List[Dict[int, Fraction]], n_cols: int, square: bool) -> Tuple[int, Fraction]:
    work = _SparseRows(rows)
    active = set(range(len(rows)))
    pivot_rows: List[int] = []
    pivot_product = Fraction(1)
    full_pivots = True
    stored = sum(len(row) for row in rows)

    for c in range(n_cols):
        candidates = [r for r in work.rows_in_column(c) if r in active]
        if not candidates:
            full_pivots = False
            continue
        p = min(candidates, key=lambda r: (len(work.rows[r]), r))
        active.discard(p)
        pivot_rows.append(p)
        stored -= len(work.rows[p])
        pivot_value = work.rows[p][c]
        pivot_product *= pivot_value
        for r in candidates:
            if r != p:
                stored += work.subtract(r, p, work.rows[r][c] / pivot_value)

        remaining_cols = n_cols - c - 1
        if active and remaining_cols and stored > DENSE_FILL_RATIO * len(active) * remaining_cols:
            ordered = sorted(active)
            block = [[work.rows[r].get(cc, Fraction(0)) for cc in range(c + 1, n_cols)] for r in ordered]
            logger.debug(f"Switching to dense elimination on a {len(ordered)}x{remaining_cols} block")
            block_rank, block_det = _bareiss(block, remaining_cols)
            rank = len(pivot_rows) + block_rank
            if not square or not full_pivots:
                return rank, Fraction(0)
            return rank, _permutation_sign(pivot_rows + ordered) * pivot_product * block_det

    rank = len(pivot_rows)
    if square and rank == len(rows):
        return rank, _permutation_sign(pivot_rows) * pivot_product
    return rank, Fraction(0)


def eliminate(m: RationalMatrix) -> EliminationResult:
    """
    Exact rank of any matrix, and the determinant when it is square.

    Args:
        m: Matrix to eliminate.

    Returns:
        EliminationResult: rank, and determinant (None for non-square input).
    """
    if m.rows == 0 or m.cols == 0:
        return EliminationResult(0, Fraction(1) if m.is_square else None)
    if m.is_dense:
        rank, determinant = _bareiss(m.to_rows(), m.cols)
    else:
        rank, determinant = _sparse_eliminate(m.sparse_rows(), m.cols, m.is_square)
    return EliminationResult(rank, determinant if m.is_square else None)


def rank(m: RationalMatrix) -> int:
    return eliminate(m).rank


def determinant(m: RationalMatrix) -> Fraction:
    if not m.is_square:
        raise ValueError(f"Determinant of a non-square {m.rows}x{m.cols} matrix")
    return eliminate(m).determinant


def kernel_dimension(m: RationalMatrix) -> int:
    """Dimension of the right kernel: cols - rank."""
    return m.cols - eliminate(m).rank


def invert(m: RationalMatrix) -> RationalMatrix:
    """
    Exact inverse by sparse Gauss-Jordan elimination.

    Raises:
        SingularMatrixError: if m is singular; carries the kernel dimension.
    """
    if not m.is_square:
        raise ValueError(f"Cannot invert a non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    rows = m.sparse_rows()
    for r in range(n):
        rows[r][n + r] = Fraction(1)
    work = _SparseRows(rows)
    active = set(range(n))
    pivot_of_column: Dict[int, int] = {}

    for c in range(n):
        candidates = [r for r in work.rows_in_column(c) if r in active]
        if not candidates:
            raise SingularMatrixError(kernel_dimension(m))
        p = min(candidates, key=lambda r: (len(work.rows[r]), r))
        active.discard(p)
        pivot_of_column[c] = p
        pivot_row = work.rows[p]
        pivot_value = pivot_row[c]
        for key in pivot_row:
            pivot_row[key] /= pivot_value
        for r in list(work.rows_in_column(c)):
            if r != p:
                work.subtract(r, p, work.rows[r][c])

    inverse = {}
    for c, p in pivot_of_column.items():
        for cc, value in work.rows[p].items():
            if cc >= n:
                inverse[(c, cc - n)] = value
    return RationalMatrix(n, n, inverse)


def block_inverse_shortcut(q: RationalMatrix) -> RationalMatrix:
    """
    Inverse of [[0, I], [-I, Q]] written down directly as [[Q, -I], [I, 0]].

    This is the dual-basis inversion for a non-Lagrangian complement and
    needs no elimination.
    """
    if not q.is_square:
        raise ValueError("Q must be square")
    size = q.rows
    entries: Dict[Entry, Fraction] = {}
    for (r, c), value in q.items():
        entries[(r, c)] = value
    for i in range(size):
        entries[(i, size + i)] = Fraction(-1)
        entries[(size + i, i)] = Fraction(1)
    return RationalMatrix(2 * size, 2 * size, entries)
