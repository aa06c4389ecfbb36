"""
Functional Gallery

Families of small functionals F_S (|S| = n - 1, gamma(S) a tree) on
parabolic and seaweed subalgebras of sl(n):

- cyclic: built from the cyclic order 1, m+1, 2m+1, ... (mod n) by the
  alternating string procedure;
- prime and subprime: the superdiagonal chain, and the m-th superdiagonal
  plus the first subdiagonal of the upper block;
- upper: the upper-triangular variant obtained by striking the cyclic
  sequence;
- dk: the corner-antidiagonal functional of a seaweed, whose graph is the
  meander.

For a tree S it also builds the dual basis d_s, the element D_S, the
path-count eigenvalue rule, the cyclic reduction recursion and the meander
index.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx

from frobenius_toolkit.algebra.sln import (
    BasisElement,
    Combination,
    Functional,
    IndexPair,
    LieSupport,
    bracket,
    diagonal_to_eps,
    eps_to_diagonal,
    parabolic_support,
)
from frobenius_toolkit.linalg.rational_matrix import RationalMatrix, determinant, rank
from frobenius_toolkit.utils.helpers import format_rational

logger = logging.getLogger(__name__)

FAMILIES = ("cyclic", "prime", "subprime", "upper", "dk")


class FunctionalFamilyError(ValueError):
    """Raised when a family is asked for outside its domain."""


class ConsistencyError(RuntimeError):
    """Two independent constructions of the same object disagree."""


def _as_pairs(pairs: Iterable[Sequence[int]]) -> FrozenSet[IndexPair]:
    return frozenset(IndexPair(int(i), int(j)) for i, j in pairs)


def _require_coprime(n: int, m: int) -> None:
    if not 1 <= m < n:
        raise FunctionalFamilyError(f"Need 1 <= m < n, got n={n}, m={m}")
    if gcd(n, m) != 1:
        raise FunctionalFamilyError(f"(n, m) = ({n}, {m}) is not coprime")


@dataclass(frozen=True)
class SmallGraph:
    """gamma(S): vertices 1..n with an arrow i -> j for every (i, j) in S."""

    n: int
    arcs: FrozenSet[IndexPair]

    def digraph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(1, self.n + 1))
        graph.add_edges_from(self.arcs)
        return graph

    def multigraph(self) -> nx.MultiGraph:
        """Undirected view that keeps i -> j and j -> i as two edges."""
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(1, self.n + 1))
        graph.add_edges_from(self.arcs)
        return graph

    def in_degrees(self) -> Dict[int, int]:
        degrees = {v: 0 for v in range(1, self.n + 1)}
        for _, j in self.arcs:
            degrees[j] += 1
        return degrees

    def predecessor(self, v: int) -> Optional[int]:
        sources = [i for i, j in self.arcs if j == v]
        return sources[0] if len(sources) == 1 else None

    def to_json(self) -> dict:
        return {"n": self.n, "arcs": [list(a) for a in sorted(self.arcs)]}


def gamma_graph(n: int, S: Iterable[Sequence[int]]) -> SmallGraph:
    arcs = _as_pairs(S)
    for i, j in arcs:
        if i == j or not (1 <= i <= n and 1 <= j <= n):
            raise FunctionalFamilyError(f"Invalid pair ({i}, {j}) for n = {n}")
    return SmallGraph(n=n, arcs=arcs)


def is_tree(g: SmallGraph) -> bool:
    """Underlying undirected graph is a tree."""
    return len(g.arcs) == g.n - 1 and nx.is_connected(g.multigraph())


class RootedTreeCheck(NamedTuple):
    rooted: bool
    root: Optional[int]


def is_rooted_tree(g: SmallGraph) -> RootedTreeCheck:
    """A tree with exactly one vertex of in-degree 0 and all others of in-degree 1."""
    if not is_tree(g):
        return RootedTreeCheck(False, None)
    degrees = g.in_degrees()
    roots = [v for v, d in degrees.items() if d == 0]
    if len(roots) == 1 and all(d <= 1 for d in degrees.values()):
        return RootedTreeCheck(True, roots[0])
    return RootedTreeCheck(False, None)


# --- cyclic family -------------------------------------------------------

def cyclic_sequence(n: int, m: int) -> List[int]:
    """1, m+1, 2m+1, ..., (n-1)m+1 reduced mod n, with n standing for 0."""
    return [(k * m) % n + 1 for k in range(n)]


def _ascending_strings(cycle: Sequence[int]) -> List[Tuple[int, ...]]:
    """Split a cyclic sequence into maximal ascending runs, starting at the first drop."""
    size = len(cycle)
    if size == 1:
        return [tuple(cycle)]
    drops = [p for p in range(size) if cycle[p] < cycle[p - 1]]
    strings = []
    for index, start in enumerate(drops):
        end = drops[(index + 1) % len(drops)]
        run = []
        p = start
        while True:
            run.append(cycle[p])
            p = (p + 1) % size
            if p == end:
                break
        strings.append(tuple(run))
    return strings


@dataclass(frozen=True)
class CycleRecord:
    level: int
    direction: str
    cycle: Tuple[int, ...]
    strings: Tuple[Tuple[int, ...], ...]
    arcs: Tuple[IndexPair, ...]

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "direction": self.direction,
            "cycle": list(self.cycle),
            "strings": [list(s) for s in self.strings],
            "arcs": [list(a) for a in self.arcs],
        }


class CyclicSupport(NamedTuple):
    support: FrozenSet[IndexPair]
    trace: Tuple[CycleRecord, ...]


def cyclic_support(n: int, m: int) -> CyclicSupport:
    """
    Cyclic functional of P(n, m) by the alternating string procedure.

    The cyclic sequence is cut into maximal ascending strings. On ascending
    levels each string contributes arrows a -> b between neighbours and the
    next cycle is formed by the first entries of the strings; on descending
    levels arrows run from larger to smaller and the next cycle is formed by
    the last entries. Levels alternate until one string remains.

    Args:
        n: Matrix size.
        m: Parabolic block size, coprime to n.

    Returns:
        CyclicSupport: the n - 1 pairs of S and the per-level construction log.
    """
    _require_coprime(n, m)
    cycle = tuple(cyclic_sequence(n, m))
    ascending = True
    arcs = set()
    trace = []
    level = 1
    while True:
        strings = _ascending_strings(cycle)
        added = []
        for string in strings:
            for a, b in zip(string, string[1:]):
                added.append(IndexPair(a, b) if ascending else IndexPair(b, a))
        arcs.update(added)
        trace.append(CycleRecord(level, "ascending" if ascending else "descending", cycle, tuple(strings), tuple(added)))
        if len(strings) == 1:
            break
        cycle = tuple(s[0] for s in strings) if ascending else tuple(s[-1] for s in strings)
        ascending = not ascending
        level += 1
    if len(arcs) != n - 1:
        raise ConsistencyError(f"Cyclic construction for ({n},{m}) produced {len(arcs)} pairs")
    return CyclicSupport(frozenset(arcs), tuple(trace))


class ReductionStep(NamedTuple):
    n: int
    m: int
    kind: str


def cyclic_reduce(n: int, m: int) -> ReductionStep:
    """(n-m, m) when n > 2m (stable), (m, 2m-n) when n < 2m (unstable)."""
    _require_coprime(n, m)
    if (n, m) == (2, 1):
        raise FunctionalFamilyError("(2, 1) is the end of the reduction")
    if n > 2 * m:
        return ReductionStep(n - m, m, "stable")
    return ReductionStep(m, 2 * m - n, "unstable")


def cyclic_reduction_chain(n: int, m: int) -> List[ReductionStep]:
    """Every reduction step from (n, m) down to (2, 1)."""
    steps = []
    while (n, m) != (2, 1):
        step = cyclic_reduce(n, m)
        steps.append(step)
        n, m = step.n, step.m
    return steps


def cyclic_support_recursive(n: int, m: int) -> FrozenSet[IndexPair]:
    """gamma(n, m) from gamma(n', m'): relabel on unstable steps, then add i -> i+m."""
    _require_coprime(n, m)
    if m == 1:
        return prime_support(n)
    step = cyclic_reduce(n, m)
    inner = cyclic_support_recursive(step.n, step.m)
    if step.kind == "stable":
        added = {IndexPair(i, i + m) for i in range(n - 2 * m + 1, n - m + 1)}
        return frozenset(inner) | added
    relabeled = {IndexPair(m + 1 - a, m + 1 - b) for a, b in inner}
    return frozenset(relabeled | {IndexPair(i, i + m) for i in range(1, n - m + 1)})


def _root_by_recursion(n: int, m: int) -> int:
    if m == 1:
        return 1
    step = cyclic_reduce(n, m)
    inner = _root_by_recursion(step.n, step.m)
    return inner if step.kind == "stable" else m + 1 - inner


def cyclic_root(n: int, m: int) -> int:
    """
    Root of gamma(n, m), by recursion and by inspecting the tree.

    Raises:
        ConsistencyError: if the two disagree.
    """
    by_recursion = _root_by_recursion(n, m)
    check = is_rooted_tree(gamma_graph(n, cyclic_support(n, m).support))
    if not check.rooted or check.root != by_recursion:
        raise ConsistencyError(f"Root of ({n},{m}): recursion gives {by_recursion}, tree gives {check.root}")
    return by_recursion


# --- other families ------------------------------------------------------

def prime_support(n: int) -> FrozenSet[IndexPair]:
    """The superdiagonal chain (1,2), (2,3), ..., (n-1,n)."""
    if n < 2:
        raise FunctionalFamilyError(f"Need n >= 2, got {n}")
    return frozenset(IndexPair(i, i + 1) for i in range(1, n))


def subprime_support(n: int, m: int) -> FrozenSet[IndexPair]:
    """(i, i+m) for i = 1..n-m together with (i+1, i) for i = 1..m-1."""
    if not 1 < m < n:
        raise FunctionalFamilyError(f"Subprime needs 1 < m < n, got n={n}, m={m}")
    pairs = {IndexPair(i, i + m) for i in range(1, n - m + 1)}
    pairs |= {IndexPair(i + 1, i) for i in range(1, m)}
    return frozenset(pairs)


@dataclass(frozen=True)
class StrikeRecord:
    n: int
    m: int
    direction: str
    sequence: Tuple[int, ...]
    struck: Tuple[int, ...]
    pairs: Tuple[IndexPair, ...]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "direction": self.direction,
            "sequence": list(self.sequence),
            "struck": list(self.struck),
            "pairs": [list(p) for p in self.pairs],
        }


class UpperTriangularSupport(NamedTuple):
    support: FrozenSet[IndexPair]
    trace: Tuple[StrikeRecord, ...]


def upper_triangular_support(n: int, m: int) -> UpperTriangularSupport:
    """
    Upper-triangular modification of the cyclic functional.

    Works on the cyclic sequence with its original values. While the current
    (n, m) is not (2, 1), strike k = m entries if n > 2m, else k = n - m:
    going forward the k largest, each giving (predecessor, j); going backward
    the k smallest, each giving (j, predecessor). The predecessor is always
    the cyclic predecessor in the current sequence. (n, m) then becomes
    (n-m, m) or (m, n-m), and the direction reverses whenever the new pair is
    not stable. The last two entries a < b give (a, b).

    The strike order reads the blocks of P(n, n-m), which is where the
    returned set is Frobenius; family_support moves it onto P(n, m) with
    antidiagonal_flip. For m = 1 and m = n - 1 the set is the
    superdiagonal chain, which the flip fixes.
    """
    _require_coprime(n, m)
    sequence = cyclic_sequence(n, m)
    current_n, current_m = n, m
    forward = n > 2 * m
    pairs: List[IndexPair] = []
    trace: List[StrikeRecord] = []
    while current_n > 2:
        if current_n > 2 * current_m:
            k = current_m
            following = (current_n - current_m, current_m)
        else:
            k = current_n - current_m
            following = (current_m, current_n - current_m)
        ordered = sorted(sequence)
        struck = ordered[-k:] if forward else ordered[:k]
        position = {value: index for index, value in enumerate(sequence)}
        taken = []
        for j in struck:
            predecessor = sequence[position[j] - 1]
            taken.append(IndexPair(predecessor, j) if forward else IndexPair(j, predecessor))
        trace.append(StrikeRecord(current_n, current_m, "forward" if forward else "backward",
                                  tuple(sequence), tuple(struck), tuple(taken)))
        pairs.extend(taken)
        struck_set = set(struck)
        sequence = [value for value in sequence if value not in struck_set]
        current_n, current_m = following
        if not current_n > 2 * current_m:
            forward = not forward
    a, b = sorted(sequence)
    pairs.append(IndexPair(a, b))
    trace.append(StrikeRecord(2, 1, "terminal", tuple(sequence), (), (IndexPair(a, b),)))
    return UpperTriangularSupport(frozenset(pairs), tuple(trace))


def dk_support(g: LieSupport) -> FrozenSet[IndexPair]:
    """
    Corner-antidiagonal functional of a seaweed.

    Inside each top block [s, s+a-1] take the pairs i < j with
    i + j = 2s + a - 1; inside each bottom block [t, t+b-1] the pairs i > j
    with i + j = 2t + b - 1.
    """
    if not g.is_seaweed:
        raise FunctionalFamilyError(f"{g.describe()} is not a seaweed support")
    pairs = set()
    start = 1
    for size in g.top:
        for i in range(start, start + size):
            j = 2 * start + size - 1 - i
            if i < j:
                pairs.add(IndexPair(i, j))
        start += size
    start = 1
    for size in g.bottom:
        for i in range(start, start + size):
            j = 2 * start + size - 1 - i
            if i > j:
                pairs.add(IndexPair(i, j))
        start += size
    return frozenset(pairs)


def family_support(family: str, n: int, m: int) -> FrozenSet[IndexPair]:
    """S for a named family on P(n, m)."""
    if family == "cyclic":
        return cyclic_support(n, m).support
    if family == "prime":
        return prime_support(n)
    if family == "subprime":
        return subprime_support(n, m)
    if family == "upper":
        return antidiagonal_flip(n, upper_triangular_support(n, m).support)
    if family == "dk":
        return dk_support(parabolic_support(n, m))
    raise FunctionalFamilyError(f"Unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def support_matrix_rank(n: int, S: Iterable[Sequence[int]]) -> int:
    """Rank of S viewed as an n x n 0/1 matrix; conjugate supports have equal rank."""
    return rank(RationalMatrix(n, n, {(i - 1, j - 1): 1 for i, j in S}))


def antidiagonal_flip(n: int, S: Iterable[Sequence[int]]) -> FrozenSet[IndexPair]:
    """(i, j) -> (n+1-j, n+1-i), carrying P(n, m) onto P(n, n-m)."""
    return frozenset(IndexPair(n + 1 - j, n + 1 - i) for i, j in S)


# --- dual basis and principal element ------------------------------------

@dataclass(frozen=True)
class DualBasisElement:
    """d_s with B(d_s, e_s') = delta_{s,s'}, stored as eps_k coefficients."""

    s: IndexPair
    coefficients: Dict[int, Fraction]

    @property
    def label(self) -> str:
        i, j = self.s
        return f"d{i}{j}" if i < 10 and j < 10 else f"d{i},{j}"

    def combination(self) -> Combination:
        return {BasisElement.eps(k): c for k, c in sorted(self.coefficients.items()) if c}

    def to_json(self) -> dict:
        return {
            "s": list(self.s),
            "coefficients": [[k, format_rational(c)] for k, c in sorted(self.coefficients.items())],
        }


def _require_tree(n: int, S: Iterable[Sequence[int]]) -> SmallGraph:
    graph = gamma_graph(n, S)
    if not is_tree(graph):
        raise FunctionalFamilyError(f"gamma(S) is not a tree for S = {sorted(graph.arcs)}")
    return graph


def dual_basis(n: int, S: Iterable[Sequence[int]]) -> List[DualBasisElement]:
    """
    Dual basis to the e_s, s in S, inside the Cartan subalgebra.

    Removing the edge s = (i, j) from the tree leaves the component C of i;
    d_s is the sum of eps_k over C, or minus the sum over the component of j
    when C contains n.

    Raises:
        FunctionalFamilyError: if gamma(S) is not a tree.
    """
    graph = _require_tree(n, S)
    tree = nx.Graph()
    tree.add_nodes_from(range(1, n + 1))
    tree.add_edges_from(graph.arcs)
    duals = []
    for s in sorted(graph.arcs):
        i, j = s
        tree.remove_edge(i, j)
        component = nx.node_connected_component(tree, i)
        if n in component:
            coefficients = {k: Fraction(-1) for k in nx.node_connected_component(tree, j)}
        else:
            coefficients = {k: Fraction(1) for k in component}
        tree.add_edge(i, j)
        duals.append(DualBasisElement(s=s, coefficients=coefficients))

    f_s = Functional.from_support(graph.arcs)
    for d in duals:
        for s in graph.arcs:
            value = Fraction(0)
            for eps, c in d.combination().items():
                value += c * f_s.evaluate(bracket(eps, BasisElement.e(*s), n), n)
            if value != (1 if s == d.s else 0):
                raise ConsistencyError(f"B({d.label}, e{s.i}{s.j}) = {value}")
    return duals


def dual_basis_determinant(n: int, S: Iterable[Sequence[int]]) -> Fraction:
    """Determinant of the matrix expressing the d_s over eps_1..eps_{n-1} (always +-1)."""
    duals = dual_basis(n, S)
    entries = {(row, k - 1): c for row, d in enumerate(duals) for k, c in d.coefficients.items()}
    return determinant(RationalMatrix(n - 1, n - 1, entries))


@dataclass(frozen=True)
class PrincipalElement:
    """Traceless diagonal element; ad-eigenvalue on e_ij is diagonal[i] - diagonal[j]."""

    diagonal: Tuple[Fraction, ...]

    def __post_init__(self):
        if sum(self.diagonal, Fraction(0)) != 0:
            raise ValueError("Principal element must be traceless")

    @property
    def n(self) -> int:
        return len(self.diagonal)

    def eigenvalue(self, i: int, j: int) -> Fraction:
        return self.diagonal[i - 1] - self.diagonal[j - 1]

    def eigenvalue_of(self, x: BasisElement) -> Fraction:
        return Fraction(0) if x.cartan else self.eigenvalue(x.i, x.j)

    def to_eps(self) -> Combination:
        return diagonal_to_eps(self.diagonal)

    def integer_form(self) -> Tuple[Tuple[int, ...], Fraction]:
        """
        (c, shift) with diagonal = diag(c) - shift * I and c_n = 0.

        Raises:
            ValueError: if the differences are not integers.
        """
        last = self.diagonal[-1]
        offsets = [value - last for value in self.diagonal]
        if any(offset.denominator != 1 for offset in offsets):
            raise ValueError("ad-eigenvalues are not integers")
        integers = tuple(int(offset) for offset in offsets)
        return integers, Fraction(sum(integers), self.n)

    def format_text(self) -> str:
        try:
            integers, shift = self.integer_form()
        except ValueError:
            return "diag(" + ",".join(format_rational(v) for v in self.diagonal) + ")"
        text = "diag(" + ",".join(str(c) for c in integers) + ")"
        if shift > 0:
            text += f" - {format_rational(shift)}*I"
        elif shift < 0:
            text += f" + {format_rational(-shift)}*I"
        return text

    def to_json(self) -> dict:
        document = {"n": self.n, "diagonal": [format_rational(v) for v in self.diagonal]}
        try:
            integers, shift = self.integer_form()
            document["integer_part"] = list(integers)
            document["shift"] = format_rational(shift)
        except ValueError:
            pass
        return document

    @classmethod
    def from_json(cls, data: dict) -> "PrincipalElement":
        return cls(tuple(Fraction(v) for v in data["diagonal"]))


def principal_candidate(n: int, S: Iterable[Sequence[int]]) -> PrincipalElement:
    """
    D_S, computed as the sum of the dual basis and by propagating
    c_i - c_j = 1 along arrows from c_1 = 0; the two must agree.

    Raises:
        FunctionalFamilyError: if gamma(S) is not a tree.
        ConsistencyError: if the two constructions disagree.
    """
    graph = _require_tree(n, S)
    totals: Dict[int, Fraction] = {}
    for d in dual_basis(n, graph.arcs):
        for k, c in d.coefficients.items():
            totals[k] = totals.get(k, Fraction(0)) + c
    via_duals = eps_to_diagonal(totals, n)

    values = {1: 0}
    undirected = graph.multigraph()
    arcs = graph.arcs
    for u, v in nx.bfs_edges(undirected, 1):
        values[v] = values[u] - 1 if (u, v) in arcs else values[u] + 1
    shift = Fraction(sum(values.values()), n)
    via_rule = tuple(Fraction(values[k]) - shift for k in range(1, n + 1))

    if via_duals != via_rule:
        raise ConsistencyError(f"Dual-basis sum {via_duals} differs from path rule {via_rule}")
    return PrincipalElement(via_rule)


def eigenvalue_on(g: SmallGraph, p: Sequence[int]) -> int:
    """
    Eigenvalue of ad(D_S) on e_ij read off the tree: arrows traversed along
    the path from i to j in their own direction minus those traversed against it.
    """
    i, j = int(p[0]), int(p[1])
    if i == j:
        raise FunctionalFamilyError("eigenvalue_on needs i != j")
    if not is_tree(g):
        raise FunctionalFamilyError("gamma(S) is not a tree")
    path = nx.shortest_path(g.multigraph(), i, j)
    value = 0
    for u, v in zip(path, path[1:]):
        value += 1 if (u, v) in g.arcs else -1
    return value


def check_principal(g: LieSupport, S: Iterable[Sequence[int]], d: PrincipalElement) -> bool:
    """F_S([D, x]) = F_S(x) for every basis element x of g."""
    f_s = Functional.from_support(S)
    d_combination = d.to_eps()
    for x in g.basis:
        commutator: Combination = {}
        for eps, c in d_combination.items():
            for term, value in bracket(eps, x, g.n).items():
                commutator[term] = commutator.get(term, Fraction(0)) + c * value
        if f_s.evaluate(commutator, g.n) != f_s.value(x, g.n):
            return False
    return True


def eigenvalue_census(g: LieSupport, d: PrincipalElement) -> Counter:
    """Multiset of ad(D)-eigenvalues over the basis of g."""
    return Counter(d.eigenvalue_of(x) for x in g.basis)


def trace_identity_holds(g: LieSupport, census: Counter) -> bool:
    """Sum of the eigenvalues equals half the dimension."""
    total = sum((value * count for value, count in census.items()), Fraction(0))
    return total * 2 == g.dimension


def eigenvalue_symmetry_holds(census: Counter) -> bool:
    return all(census[value] == census[1 - value] for value in list(census))


def is_unbroken_string(census: Counter) -> bool:
    """Integer eigenvalues with no gaps between the smallest and the largest."""
    values = set(census)
    if any(Fraction(v).denominator != 1 for v in values):
        return False
    low, high = int(min(values)), int(max(values))
    return values == set(range(low, high + 1))


# --- meanders ------------------------------------------------------------

class MeanderCensus(NamedTuple):
    loops: int
    chains: int
    isolated: int

    @property
    def index(self) -> int:
        return 2 * self.loops + self.chains + self.isolated - 1


def meander_census(g: LieSupport) -> MeanderCensus:
    """Loops, chains and isolated vertices of the meander gamma(dk_support(g))."""
    meander = gamma_graph(g.n, dk_support(g)).multigraph()
    loops = chains = isolated = 0
    for component in nx.connected_components(meander):
        edges = meander.subgraph(component).number_of_edges()
        if edges == 0:
            isolated += 1
        elif edges == len(component):
            loops += 1
        elif edges == len(component) - 1:
            chains += 1
        else:
            raise ConsistencyError(f"Meander component {sorted(component)} is neither a loop nor a chain")
    return MeanderCensus(loops, chains, isolated)


def meander_index(g: LieSupport) -> int:
    """Index of a seaweed: 2 * loops + chains + isolated vertices - 1."""
    return meander_census(g).index
