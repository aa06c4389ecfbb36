"""
sl(n) Supports and Kirillov Forms

A subalgebra of sl(n) containing the Cartan subalgebra is described by its
support: the off-diagonal index pairs (i, j) whose matrix units e_ij it
contains. Its basis is those e_ij (lexicographic) followed by
eps_k = e_kk - I/n for k = 1..n-1.

This module builds parabolic, seaweed and custom supports, the bracket on the
basis, functionals and the Kirillov form B_F(x, y) = F([x, y]).
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from frobenius_toolkit.linalg.rational_matrix import RationalMatrix, eliminate
from frobenius_toolkit.utils.helpers import format_rational, parse_rational

logger = logging.getLogger(__name__)


class SupportError(ValueError):
    """Raised for invalid sizes, compositions or non-closed supports."""


class IndexPair(NamedTuple):
    i: int
    j: int


class BasisElement(NamedTuple):
    """
    Basis vector of a subalgebra of sl(n).

    Off-diagonal units are (False, i, j); eps_k is (True, k, k). Tuple order
    is the canonical basis order: matrix units lexicographically, then eps.
    """

    cartan: bool
    i: int
    j: int

    @classmethod
    def e(cls, i: int, j: int) -> "BasisElement":
        if i == j:
            raise SupportError(f"e{i}{j} is diagonal; use eps")
        return cls(False, i, j)

    @classmethod
    def eps(cls, k: int) -> "BasisElement":
        return cls(True, k, k)

    @property
    def label(self) -> str:
        if self.cartan:
            return f"ε{self.i}"
        if self.i < 10 and self.j < 10:
            return f"e{self.i}{self.j}"
        return f"e{self.i},{self.j}"

    def to_json(self) -> list:
        if self.cartan:
            return ["eps", self.i]
        return ["e", self.i, self.j]

    @classmethod
    def from_json(cls, data: Sequence) -> "BasisElement":
        if data[0] == "eps":
            return cls.eps(int(data[1]))
        if data[0] == "e":
            return cls.e(int(data[1]), int(data[2]))
        raise ValueError(f"Unknown basis element {data!r}")


Combination = Dict[BasisElement, Fraction]


def diagonal_to_eps(diagonal: Sequence[object]) -> Combination:
    """
    Express a traceless diagonal matrix over eps_1..eps_{n-1}.

    Since eps_1 + ... + eps_n = 0, the eps_k coefficient is h_k - h_n.
    """
    n = len(diagonal)
    last = Fraction(diagonal[-1])
    result = {}
    for k in range(1, n):
        coefficient = Fraction(diagonal[k - 1]) - last
        if coefficient:
            result[BasisElement.eps(k)] = coefficient
    return result


def eps_to_diagonal(coefficients: Mapping[int, object], n: int) -> Tuple[Fraction, ...]:
    """Inverse of diagonal_to_eps: sum c_k eps_k as a traceless diagonal."""
    values = [Fraction(coefficients.get(k, 0)) for k in range(1, n)]
    shift = sum(values, Fraction(0)) / n
    return tuple([value - shift for value in values] + [-shift])


def bracket(a: BasisElement, b: BasisElement, n: int) -> Combination:
    """
    [a, b] in sl(n), with diagonal output re-expressed over the eps basis.

    [e_ij, e_kl] = d_jk e_il - d_li e_kj;  [eps_k, e_ij] = (d_ki - d_kj) e_ij.
    """
    if a.cartan and b.cartan:
        return {}
    if a.cartan:
        coefficient = int(a.i == b.i) - int(a.i == b.j)
        return {b: Fraction(coefficient)} if coefficient else {}
    if b.cartan:
        coefficient = int(b.i == a.i) - int(b.i == a.j)
        return {a: Fraction(-coefficient)} if coefficient else {}

    i, j = a.i, a.j
    k, l = b.i, b.j
    result: Combination = {}
    diagonal = [0] * n
    if j == k:
        if i == l:
            diagonal[i - 1] += 1
        else:
            result[BasisElement.e(i, l)] = Fraction(1)
    if l == i:
        if k == j:
            diagonal[k - 1] -= 1
        else:
            key = BasisElement.e(k, j)
            result[key] = result.get(key, Fraction(0)) - 1
    if any(diagonal):
        result.update(diagonal_to_eps(diagonal))
    return {key: value for key, value in result.items() if value}


@dataclass(frozen=True)
class LieSupport:
    """
    Support of a subalgebra of sl(n) that contains the Cartan subalgebra.

    kind is "parabolic", "seaweed" or "custom". Parabolic and seaweed supports
    carry their top and bottom compositions.
    """

    n: int
    pairs: FrozenSet[IndexPair]
    kind: str = "custom"
    top: Tuple[int, ...] = ()
    bottom: Tuple[int, ...] = ()
    m: Optional[int] = None

    def __post_init__(self):
        if self.n < 2:
            raise SupportError(f"sl(n) needs n >= 2, got {self.n}")
        for i, j in self.pairs:
            if i == j or not (1 <= i <= self.n and 1 <= j <= self.n):
                raise SupportError(f"Invalid index pair ({i}, {j}) for n = {self.n}")
        successors: Dict[int, List[int]] = {}
        for i, j in self.pairs:
            successors.setdefault(i, []).append(j)
        for i, j in self.pairs:
            for k in successors.get(j, ()):
                if k != i and (i, k) not in self.pairs:
                    raise SupportError(f"Support not closed: ({i},{j}) and ({j},{k}) need ({i},{k})")

    @property
    def dimension(self) -> int:
        return len(self.pairs) + self.n - 1

    @property
    def is_seaweed(self) -> bool:
        return self.kind in ("parabolic", "seaweed")

    @cached_property
    def offdiagonal(self) -> Tuple[IndexPair, ...]:
        return tuple(sorted(IndexPair(i, j) for i, j in self.pairs))

    @cached_property
    def basis(self) -> Tuple[BasisElement, ...]:
        units = [BasisElement.e(i, j) for i, j in self.offdiagonal]
        return tuple(units + [BasisElement.eps(k) for k in range(1, self.n)])

    def contains(self, i: int, j: int) -> bool:
        return i == j or (i, j) in self.pairs

    def describe(self) -> str:
        if self.kind == "parabolic":
            return f"P({self.n},{self.m})"
        if self.kind == "seaweed":
            top = ",".join(str(a) for a in self.top)
            bottom = ",".join(str(b) for b in self.bottom)
            return f"seaweed({top}|{bottom})"
        return f"custom(n={self.n}, {len(self.pairs)} pairs)"

    def to_json(self) -> dict:
        document = {"n": self.n, "kind": self.kind, "pairs": [list(p) for p in self.offdiagonal]}
        if self.kind == "parabolic":
            document["m"] = self.m
        if self.is_seaweed:
            document["top"] = list(self.top)
            document["bottom"] = list(self.bottom)
        return document

    @classmethod
    def from_json(cls, data: Mapping) -> "LieSupport":
        kind = data.get("kind", "custom")
        if kind == "parabolic":
            support = parabolic_support(int(data["n"]), int(data["m"]))
        elif kind == "seaweed":
            support = seaweed_support(data["top"], data["bottom"])
        else:
            return custom_support(int(data["n"]), [tuple(p) for p in data["pairs"]])
        if "pairs" in data and {tuple(p) for p in data["pairs"]} != set(support.pairs):
            raise SupportError(f"Stored pairs do not match {support.describe()}")
        return support


def parabolic_support(n: int, m: int) -> LieSupport:
    """
    Support of P(n, m): all off-diagonal pairs except i >= m+1 with j <= m.

    Args:
        n: Matrix size.
        m: Size of the upper-left block, 1 <= m < n.

    Returns:
        LieSupport: Support of dimension n^2 - m(n-m) - 1.
    """
    if not 1 <= m < n:
        raise SupportError(f"Parabolic P(n,m) needs 1 <= m < n, got n={n}, m={m}")
    pairs = frozenset(
        IndexPair(i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j and not (i >= m + 1 and j <= m)
    )
    return LieSupport(n=n, pairs=pairs, kind="parabolic", top=(n,), bottom=(m, n - m), m=m)


def _block_index(composition: Sequence[int]) -> List[int]:
    blocks = []
    for block, size in enumerate(composition):
        blocks.extend([block] * size)
    return blocks


def seaweed_support(top: Sequence[int], bottom: Sequence[int]) -> LieSupport:
    """
    Seaweed support: i < j inside a block of top, i > j inside a block of bottom.

    A seaweed with top (n) and bottom (m, n-m) is returned as P(n, m).
    """
    top = tuple(int(a) for a in top)
    bottom = tuple(int(b) for b in bottom)
    if not top or not bottom or min(top + bottom) < 1:
        raise SupportError(f"Compositions must have positive parts: {top} / {bottom}")
    n = sum(top)
    if sum(bottom) != n:
        raise SupportError(f"Compositions sum to different sizes: {sum(top)} and {sum(bottom)}")
    if top == (n,) and len(bottom) == 2:
        return parabolic_support(n, bottom[0])
    top_block = _block_index(top)
    bottom_block = _block_index(bottom)
    pairs = set()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i < j and top_block[i - 1] == top_block[j - 1]:
                pairs.add(IndexPair(i, j))
            elif i > j and bottom_block[i - 1] == bottom_block[j - 1]:
                pairs.add(IndexPair(i, j))
    return LieSupport(n=n, pairs=frozenset(pairs), kind="seaweed", top=top, bottom=bottom)


def custom_support(n: int, pairs: Iterable[Sequence[int]], has_cartan: bool = True) -> LieSupport:
    """Validated custom support; the Cartan subalgebra is always included."""
    if not has_cartan:
        raise SupportError("Supports without the Cartan subalgebra are not supported")
    return LieSupport(n=n, pairs=frozenset(IndexPair(int(i), int(j)) for i, j in pairs))


def bracket_closed(g: LieSupport) -> bool:
    """Exhaustively check that brackets of basis elements stay in g."""
    basis = g.basis
    for a_index, a in enumerate(basis):
        for b in basis[a_index + 1:]:
            for term in bracket(a, b, g.n):
                if not term.cartan and (term.i, term.j) not in g.pairs:
                    return False
    return True


@dataclass(frozen=True)
class Functional:
    """
    Linear functional F(x) = sum c_ij x_ij on sl(n).

    Diagonal coefficients are allowed; on eps_k they give c_kk - (sum_l c_ll)/n.
    """

    coefficients: Dict[IndexPair, Fraction] = field(default_factory=dict)

    @classmethod
    def from_support(cls, pairs: Iterable[Sequence[int]]) -> "Functional":
        """The functional F_S with coefficient 1 on every pair of S."""
        return cls({IndexPair(int(i), int(j)): Fraction(1) for i, j in pairs})

    def offdiagonal_support(self) -> FrozenSet[IndexPair]:
        return frozenset(p for p, c in self.coefficients.items() if c and p.i != p.j)

    def value(self, x: BasisElement, n: int) -> Fraction:
        if not x.cartan:
            return Fraction(self.coefficients.get(IndexPair(x.i, x.j), 0))
        trace = sum((Fraction(c) for p, c in self.coefficients.items() if p.i == p.j), Fraction(0))
        return Fraction(self.coefficients.get(IndexPair(x.i, x.i), 0)) - trace / n

    def evaluate(self, combination: Mapping[BasisElement, Fraction], n: int) -> Fraction:
        return sum((c * self.value(x, n) for x, c in combination.items()), Fraction(0))

    def to_json(self) -> dict:
        return {
            "coefficients": [
                [list(p), format_rational(c)] for p, c in sorted(self.coefficients.items()) if c
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Functional":
        return cls({IndexPair(int(p[0]), int(p[1])): parse_rational(c) for p, c in data["coefficients"]})


@dataclass(frozen=True)
class KirillovMatrix:
    """Matrix of B_F over the canonical basis of g."""

    basis: Tuple[BasisElement, ...]
    matrix: RationalMatrix

    @cached_property
    def index(self) -> Dict[BasisElement, int]:
        return {x: k for k, x in enumerate(self.basis)}

    def value(self, a: BasisElement, b: BasisElement) -> Fraction:
        return self.matrix.entry(self.index[a], self.index[b])

    def pairing(self, x: Mapping[BasisElement, Fraction], y: Mapping[BasisElement, Fraction]) -> Fraction:
        """B_F extended bilinearly to combinations."""
        total = Fraction(0)
        for a, ca in x.items():
            for b, cb in y.items():
                total += ca * cb * self.value(a, b)
        return total

    def to_json(self) -> dict:
        return {
            "basis": [x.to_json() for x in self.basis],
            "entries": [[r, c, format_rational(v)] for (r, c), v in self.matrix.items() if r < c],
        }


def kirillov_matrix(g: LieSupport, f: Functional) -> KirillovMatrix:
    """
    Skew matrix with entry (a, b) = F([x_a, x_b]) over g's canonical basis.

    Raises:
        SupportError: if F has off-diagonal coefficients outside g.
    """
    outside = [p for p in f.offdiagonal_support() if p not in g.pairs]
    if outside:
        raise SupportError(f"Functional has coefficients outside {g.describe()}: {sorted(outside)}")
    basis = g.basis
    values = {x: f.value(x, g.n) for x in basis}
    entries = {}
    for a_index, a in enumerate(basis):
        for b_index in range(a_index + 1, len(basis)):
            value = Fraction(0)
            for x, c in bracket(a, basis[b_index], g.n).items():
                value += c * values[x]
            if value:
                entries[(a_index, b_index)] = value
                entries[(b_index, a_index)] = -value
    return KirillovMatrix(basis=basis, matrix=RationalMatrix(len(basis), len(basis), entries))


@dataclass(frozen=True)
class FrobeniusCertificate:
    frobenius: bool
    dimension: int
    rank: int
    kernel_dimension: int
    determinant: Optional[Fraction]

    def to_json(self) -> dict:
        return {
            "frobenius": self.frobenius,
            "dimension": self.dimension,
            "rank": self.rank,
            "kernel_dimension": self.kernel_dimension,
            "determinant": None if self.determinant is None else format_rational(self.determinant),
        }


def is_frobenius(g: LieSupport, f: Functional) -> FrobeniusCertificate:
    """Certify whether B_F is nondegenerate on g by exact elimination."""
    km = kirillov_matrix(g, f)
    result = eliminate(km.matrix)
    kernel = g.dimension - result.rank
    logger.debug(f"{g.describe()}: rank {result.rank} of {g.dimension}")
    return FrobeniusCertificate(
        frobenius=kernel == 0,
        dimension=g.dimension,
        rank=result.rank,
        kernel_dimension=kernel,
        determinant=result.determinant,
    )


def random_functional(g: LieSupport, rng: random.Random) -> Functional:
    """Integer coefficients in [-10n, 10n] on every pair of g and on the diagonal."""
    bound = 10 * g.n
    coefficients = {p: Fraction(rng.randint(-bound, bound)) for p in g.offdiagonal}
    for k in range(1, g.n + 1):
        coefficients[IndexPair(k, k)] = Fraction(rng.randint(-bound, bound))
    return Functional(coefficients)


def algebra_index_estimate(g: LieSupport, samples: int, seed: int) -> int:
    """
    Upper bound on the index of g: the smallest kernel dimension over sampled functionals.

    Args:
        g: Support to sample on.
        samples: Number of random functionals (>= 1).
        seed: Seed of the generator.

    Returns:
        int: Minimum kernel dimension seen; exact with overwhelming probability.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    rng = random.Random(seed)
    best = g.dimension
    for sample in range(samples):
        certificate = is_frobenius(g, random_functional(g, rng))
        best = min(best, certificate.kernel_dimension)
        if best == 0:
            break
    logger.debug(f"Index estimate for {g.describe()}: {best} after {sample + 1} samples")
    return best
