"""
Admissible Triples and Degenerations

An admissible triple (S1, S2, T) for sl(n) is a bijection T between sets of
simple-root labels in {1..n-1} that preserves adjacency and is nilpotent.
The maximal ones come from coprime (n, m) with T(i) = i + m mod n. A root
progression orders the simple roots along the cyclic sequence of (n, m);
conjugating by exp(t h) and letting t grow removes exactly the mapped pairs
along which the weights lambda_i = h_i - h_{i+1} strictly increase.

The r-matrix term attached to a triple is represented only by its mapped
root pairs.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from frobenius_toolkit.algebra.functionals import (
    FunctionalFamilyError,
    PrincipalElement,
    cyclic_sequence,
    cyclic_support,
    principal_candidate,
)
from frobenius_toolkit.utils.helpers import format_rational

logger = logging.getLogger(__name__)

RootPair = Tuple[int, int]


class DegenerationError(ValueError):
    """Raised for divergent limits, inconsistent keep-sets and missing progressions."""


@dataclass(frozen=True)
class AdmissibleTriple:
    """(S1, S2, T) for sl(n); t lists the pairs (i, T(i)) sorted by i."""

    n: int
    s1: FrozenSet[int]
    s2: FrozenSet[int]
    t: Tuple[RootPair, ...]

    @property
    def mapping(self) -> Dict[int, int]:
        return dict(self.t)

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[int, int]) -> "AdmissibleTriple":
        pairs = tuple(sorted((int(i), int(j)) for i, j in mapping.items()))
        return cls(n=n, s1=frozenset(i for i, _ in pairs), s2=frozenset(j for _, j in pairs), t=pairs)

    def restrict(self, subset: Iterable[int]) -> "AdmissibleTriple":
        keep = set(subset)
        return AdmissibleTriple.from_mapping(self.n, {i: j for i, j in self.t if i in keep})

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "s1": sorted(self.s1),
            "s2": sorted(self.s2),
            "t": [list(pair) for pair in self.t],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "AdmissibleTriple":
        triple = cls.from_mapping(int(data["n"]), {int(i): int(j) for i, j in data["t"]})
        if set(data.get("s1", triple.s1)) != triple.s1 or set(data.get("s2", triple.s2)) != triple.s2:
            raise DegenerationError("s1/s2 disagree with the listed map")
        return triple


@dataclass(frozen=True)
class TripleValidation:
    valid: bool
    violations: Tuple[str, ...]


def validate_triple(triple: AdmissibleTriple) -> TripleValidation:
    """
    Check that T is a bijection S1 -> S2 inside {1..n-1}, that every orbit
    leaves S1 and that T preserves adjacency.

    Returns:
        TripleValidation: valid flag and one message per violation.
    """
    violations: List[str] = []
    labels = set(range(1, triple.n))
    mapping = triple.mapping
    if not triple.s1 <= labels or not triple.s2 <= labels:
        violations.append(f"labels outside 1..{triple.n - 1}")
    if set(mapping) != set(triple.s1):
        violations.append("T is not defined exactly on S1")
    if sorted(mapping.values()) != sorted(triple.s2) or len(set(mapping.values())) != len(mapping):
        violations.append("T is not a bijection onto S2")

    for start in sorted(mapping):
        seen = {start}
        current = mapping[start]
        while current in mapping:
            if current in seen:
                violations.append(f"orbit of {start} never leaves S1")
                break
            seen.add(current)
            current = mapping[current]

    for i in sorted(mapping):
        j = i + 1
        if j in mapping and abs(mapping[i] - mapping[j]) != 1:
            violations.append(f"T({i})={mapping[i]} and T({j})={mapping[j]} are not adjacent")
    return TripleValidation(valid=not violations, violations=tuple(violations))


def maximal_triple(n: int, m: int) -> AdmissibleTriple:
    """
    S1 = {1..n-1} minus {n-m}, S2 = {1..n-1} minus {m}, T(i) = i + m mod n.

    Raises:
        FunctionalFamilyError: If (n, m) is not coprime.
    """
    if not 1 <= m < n:
        raise FunctionalFamilyError(f"Need 1 <= m < n, got n={n}, m={m}")
    if gcd(n, m) != 1:
        raise FunctionalFamilyError(f"(n, m) = ({n}, {m}) is not coprime; no maximal triple")
    mapping = {i: (i + m) % n for i in range(1, n) if i != n - m}
    triple = AdmissibleTriple.from_mapping(n, mapping)
    check = validate_triple(triple)
    if not check.valid:
        raise DegenerationError(f"maximal_triple({n}, {m}) failed validation: {'; '.join(check.violations)}")
    return triple


def triple_precedes(a: AdmissibleTriple, b: AdmissibleTriple) -> bool:
    """a precedes b when T_a is the restriction of T_b to S1(a)."""
    if a.n != b.n:
        return False
    larger = b.mapping
    return all(i in larger and larger[i] == j for i, j in a.t)


def t_chain(triple: AdmissibleTriple) -> List[int]:
    """
    The labels 1..n-1 in T-order, for triples whose arrows form one path.

    Raises:
        DegenerationError: If the T-arrows do not form a single path through all labels.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(range(1, triple.n))
    graph.add_edges_from(triple.t)
    if graph.number_of_nodes() == 0:
        return []
    if (
        not nx.is_weakly_connected(graph)
        or not nx.is_directed_acyclic_graph(graph)
        or any(graph.in_degree(v) > 1 or graph.out_degree(v) > 1 for v in graph)
    ):
        raise DegenerationError("T does not trace a single chain through all simple roots")
    return list(nx.topological_sort(graph))


# --- progressions and limits ---------------------------------------------

def _diagonal(h: Union[PrincipalElement, Sequence[object]]) -> Tuple[Fraction, ...]:
    values = h.diagonal if isinstance(h, PrincipalElement) else h
    return tuple(Fraction(v) for v in values)


def root_weights(h: Union[PrincipalElement, Sequence[object]]) -> Dict[int, Fraction]:
    """lambda_i = h_i - h_{i+1} for i = 1..n-1."""
    diagonal = _diagonal(h)
    return {i: diagonal[i - 1] - diagonal[i] for i in range(1, len(diagonal))}


@dataclass(frozen=True)
class RootProgression:
    """
    Simple roots in the linear order along which direction * lambda is
    nondecreasing. direction = -1 records the renumbering i -> n - i that
    turns the order into one with nondecreasing lambda.
    """

    n: int
    m: int
    order: Tuple[int, ...]
    direction: int
    weights: Tuple[Tuple[int, Fraction], ...]
    rotation: int

    @property
    def mapped_pairs(self) -> Tuple[RootPair, ...]:
        return tuple(zip(self.order, self.order[1:]))

    @property
    def descents(self) -> Tuple[RootPair, ...]:
        return tuple(pair for pair in self.mapped_pairs if pair[0] > pair[1])

    def as_triple(self) -> AdmissibleTriple:
        return AdmissibleTriple.from_mapping(self.n, dict(self.mapped_pairs))

    def format_text(self) -> str:
        return " -> ".join(str(label) for label in self.order)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "order": list(self.order),
            "direction": self.direction,
            "rotation": self.rotation,
            "weights": [[label, format_rational(value)] for label, value in self.weights],
            "mapped_pairs": [list(pair) for pair in self.mapped_pairs],
        }


def _nondecreasing(values: Sequence[Fraction]) -> bool:
    return all(a <= b for a, b in zip(values, values[1:]))


def root_progression(n: int, m: int, h: Optional[PrincipalElement] = None) -> RootProgression:
    """
    Cut the cyclic sequence of (n, m), with n deleted, at the first rotation
    along which direction * lambda is nondecreasing, trying direction +1 first.

    Args:
        n: Matrix size.
        m: Block size, coprime to n.
        h: Cartan element; the principal element of the cyclic functional by default.

    Raises:
        DegenerationError: If no rotation works in either direction.
    """
    if h is None:
        h = principal_candidate(n, cyclic_support(n, m).support)
    weights = root_weights(h)
    cycle = [label for label in cyclic_sequence(n, m) if label != n]
    for direction in (1, -1):
        for rotation in range(len(cycle)):
            order = cycle[rotation:] + cycle[:rotation]
            if _nondecreasing([direction * weights[label] for label in order]):
                logger.debug(f"Progression of ({n},{m}): rotation {rotation}, direction {direction}")
                return RootProgression(
                    n=n,
                    m=m,
                    order=tuple(order),
                    direction=direction,
                    weights=tuple(sorted(weights.items())),
                    rotation=rotation,
                )
    logger.warning(f"No monotone rotation of the cyclic sequence for ({n},{m})")
    raise DegenerationError(f"No root progression with monotone weights for ({n}, {m})")


@dataclass(frozen=True)
class DegenerationResult:
    progression: RootProgression
    kept: Tuple[RootPair, ...]
    removed: Tuple[RootPair, ...]
    pair_weights: Tuple[Tuple[RootPair, Fraction], ...]

    def as_triple(self) -> AdmissibleTriple:
        return AdmissibleTriple.from_mapping(self.progression.n, dict(self.kept))

    def to_json(self) -> dict:
        return {
            "progression": self.progression.to_json(),
            "kept": [list(pair) for pair in self.kept],
            "removed": [list(pair) for pair in self.removed],
            "pair_weights": [[list(pair), format_rational(w)] for pair, w in self.pair_weights],
        }


def degeneration_limit(
    progression: RootProgression, h: Union[PrincipalElement, Sequence[object]]
) -> DegenerationResult:
    """
    Limit of exp(t h) alpha exp(-t h) as t grows, on the mapped pairs.

    The pair (i, j) scales by exp(t * w) with w = direction * (lambda_i - lambda_j):
    pairs with w < 0 vanish, pairs with w = 0 survive.

    Raises:
        DegenerationError: If some pair has w > 0, so the limit diverges.
    """
    diagonal = _diagonal(h)
    if len(diagonal) != progression.n:
        raise DegenerationError(f"h has size {len(diagonal)}, progression needs {progression.n}")
    weights = root_weights(diagonal)
    kept, removed, pair_weights = [], [], []
    for i, j in progression.mapped_pairs:
        w = progression.direction * (weights[i] - weights[j])
        pair_weights.append(((i, j), w))
        if w > 0:
            raise DegenerationError(f"Limit diverges on the mapping {i} -> {j} (weight {format_rational(w)})")
        (removed if w < 0 else kept).append((i, j))
    if removed:
        logger.info(f"Degeneration removes {', '.join(f'{i}->{j}' for i, j in removed)}")
    return DegenerationResult(
        progression=progression, kept=tuple(kept), removed=tuple(removed), pair_weights=tuple(pair_weights)
    )


def find_separating_h(progression: RootProgression, keep: Iterable[Sequence[int]]) -> Tuple[int, ...]:
    """
    Integer diagonal h whose weights are constant along kept pairs and step up
    by one across every other mapped pair, so degeneration_limit keeps exactly keep.

    Raises:
        DegenerationError: If keep names a pair that is not mapped by the progression.
    """
    keep_set = {(int(i), int(j)) for i, j in keep}
    mapped = set(progression.mapped_pairs)
    stray = keep_set - mapped
    if stray:
        raise DegenerationError(f"Pairs {sorted(stray)} are not mapped by the progression")
    level: Dict[int, int] = {progression.order[0]: 0} if progression.order else {}
    for i, j in progression.mapped_pairs:
        level[j] = level[i] + (0 if (i, j) in keep_set else 1)
    h = [0]
    for i in range(1, progression.n):
        h.append(h[-1] - progression.direction * level[i])
    return tuple(h)
