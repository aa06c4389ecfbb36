"""
Local Rings of Graphs

The full local ring of a graph has one nilpotent generator per edge, with
x_e x_e' = 0 whenever e and e' share a vertex. It is determined by its
conflict relation, which is the line graph. dim J^k is the number of
k-edge matchings, so the nilpotence index is mn + 1. The reduced ring maps
an arrow u -> v to u ^ v in the exterior algebra.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from frobenius_toolkit.graphs.matching import GraphStructureError
from frobenius_toolkit.linalg.rational_matrix import RationalMatrix, rank

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RingPresentation:
    """Generators with the set of generator pairs whose product vanishes."""

    generators: Tuple[str, ...]
    conflicts: FrozenSet[FrozenSet[str]]

    def conflict_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.generators)
        graph.add_edges_from(tuple(pair) for pair in self.conflicts)
        return graph

    def is_r3(self) -> bool:
        return len(self.generators) == 3 and len(self.conflicts) == 3

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "conflicts": sorted(sorted(pair) for pair in self.conflicts),
        }

    @classmethod
    def from_json(cls, data) -> "RingPresentation":
        generators = tuple(data["generators"])
        conflicts = frozenset(frozenset(pair) for pair in data["conflicts"])
        for pair in conflicts:
            if len(pair) != 2 or not pair <= set(generators):
                raise GraphStructureError(f"Bad conflict pair {sorted(pair)}")
        return cls(generators=generators, conflicts=conflicts)


@dataclass(frozen=True)
class ZeroSubalgebra:
    generators: Tuple[str, ...]


@dataclass(frozen=True)
class AmbiguousR3:
    """The ring of the triangle and of the three-pointed star."""

    presentation: RingPresentation

    def to_json(self) -> dict:
        return {"result": "AmbiguousR3", "presentation": self.presentation.to_json()}


def _edge_label(u: Hashable, v: Hashable) -> str:
    a, b = sorted(str(getattr(x, "label", x)) for x in (u, v))
    return f"{a}-{b}"


def present(g: nx.Graph) -> RingPresentation:
    """Generators are edge labels "u-v"; edges sharing a vertex conflict."""
    if g.is_directed():
        g = g.to_undirected()
    labels = {frozenset(edge): _edge_label(*edge) for edge in g.edges()}
    line = nx.line_graph(nx.Graph(g))
    conflicts = frozenset(
        frozenset((labels[frozenset(a)], labels[frozenset(b)])) for a, b in line.edges()
    )
    return RingPresentation(generators=tuple(sorted(labels.values())), conflicts=conflicts)


def _masks(p: RingPresentation) -> List[int]:
    index = {x: k for k, x in enumerate(p.generators)}
    masks = [1 << k for k in range(len(p.generators))]
    for pair in p.conflicts:
        a, b = (index[x] for x in pair)
        masks[a] |= 1 << b
        masks[b] |= 1 << a
    return masks


def radical_power_dims(p: RingPresentation) -> List[int]:
    """
    [dim J, dim J^2, ...] up to the last nonzero power.

    dim J^k counts the k-subsets of pairwise non-conflicting generators.
    """
    closed = _masks(p)

    @lru_cache(maxsize=None)
    def counts(mask: int) -> Tuple[int, ...]:
        if not mask:
            return (1,)
        low = (mask & -mask).bit_length() - 1
        without = counts(mask & ~(1 << low))
        with_low = counts(mask & ~closed[low])
        size = max(len(without), len(with_low) + 1)
        total = [0] * size
        for k, value in enumerate(without):
            total[k] += value
        for k, value in enumerate(with_low):
            total[k + 1] += value
        return tuple(total)

    dims = list(counts((1 << len(p.generators)) - 1)[1:])
    while dims and dims[-1] == 0:
        dims.pop()
    return dims


def nilpotence_index(p: RingPresentation) -> int:
    return len(radical_power_dims(p)) + 1


def graph_connected(p: RingPresentation) -> bool:
    """
    J splits as J1 + J2 with all cross products nonzero exactly when the
    generators split into two groups with no conflict between them.
    """
    if len(p.generators) <= 1:
        return True
    return nx.is_connected(p.conflict_graph())


def zero_subalgebras(p: RingPresentation) -> List[ZeroSubalgebra]:
    """Maximal sets of pairwise conflicting generators."""
    cliques = [tuple(sorted(c)) for c in nx.find_cliques(p.conflict_graph())]
    return [ZeroSubalgebra(generators=c) for c in sorted(cliques)]


def _star_candidates(p: RingPresentation) -> List[FrozenSet[str]]:
    candidates = set()
    for z in zero_subalgebras(p):
        clique = frozenset(z.generators)
        candidates.add(clique)
        if len(clique) == 3:
            candidates.update(frozenset(pair) for pair in combinations(sorted(clique), 2))
    candidates.update(frozenset((x,)) for x in p.generators)
    return sorted(candidates, key=lambda c: (-len(c), sorted(c)))


def reconstruct(p: RingPresentation) -> Union[nx.Graph, AmbiguousR3]:
    """
    Recover the graph from its ring.

    Vertices are zero subalgebras chosen among the maximal ones, the
    two-element pieces of three-element ones and single generators, so that
    each generator lies in exactly two of them and each conflicting pair in
    exactly one. The generator joins the two vertices it lies in.

    Raises:
        GraphStructureError: If the presentation is not graph connected or
            is not the ring of any graph.
    """
    if not graph_connected(p):
        raise GraphStructureError("Only graph-connected rings are reconstructed; split the graph first")
    if p.is_r3():
        return AmbiguousR3(presentation=p)
    result = nx.Graph()
    if not p.generators:
        return result
    if len(p.generators) == 1:
        result.add_edge(0, 1, generator=p.generators[0])
        return result

    candidates = _star_candidates(p)
    containing: Dict[str, List[int]] = {x: [] for x in p.generators}
    for k, candidate in enumerate(candidates):
        for x in candidate:
            containing[x].append(k)
    cover_count = {x: 0 for x in p.generators}
    pair_count = {pair: 0 for pair in p.conflicts}
    chosen: List[int] = []

    def fits(candidate: FrozenSet[str]) -> bool:
        if any(cover_count[x] >= 2 for x in candidate):
            return False
        return all(pair_count[frozenset(pair)] == 0 for pair in combinations(candidate, 2))

    def apply(candidate: FrozenSet[str], step: int) -> None:
        for x in candidate:
            cover_count[x] += step
        for pair in combinations(candidate, 2):
            pair_count[frozenset(pair)] += step

    def search() -> bool:
        open_generators = [x for x in p.generators if cover_count[x] < 2]
        if not open_generators:
            return all(count == 1 for count in pair_count.values())
        target = min(open_generators, key=lambda x: (len(containing[x]), x))
        for k in containing[target]:
            if k in chosen or not fits(candidates[k]):
                continue
            chosen.append(k)
            apply(candidates[k], 1)
            if search():
                return True
            apply(candidates[k], -1)
            chosen.pop()
        return False

    if not search():
        raise GraphStructureError("Presentation is not the local ring of a graph")
    vertex_of = {k: v for v, k in enumerate(sorted(chosen))}
    for x in p.generators:
        a, b = [vertex_of[k] for k in containing[x] if k in vertex_of]
        result.add_edge(a, b, generator=x)
    logger.debug(f"Reconstructed {result.number_of_nodes()} vertices from {len(p.generators)} generators")
    return result


def _orientation_sign(sequence: Sequence[Hashable], order: Dict[Hashable, int]) -> int:
    positions = [order[v] for v in sequence]
    inversions = sum(1 for a, b in combinations(range(len(positions)), 2) if positions[a] > positions[b])
    return -1 if inversions % 2 else 1


def _matchings(edges: Sequence[Tuple[Hashable, Hashable]], k: int):
    def extend(start: int, used: FrozenSet[Hashable], picked: Tuple[Tuple[Hashable, Hashable], ...]):
        if len(picked) == k:
            yield picked
            return
        for index in range(start, len(edges)):
            u, v = edges[index]
            if u in used or v in used:
                continue
            yield from extend(index + 1, used | {u, v}, picked + ((u, v),))

    yield from extend(0, frozenset(), ())


def reduced_radical_dims(g: nx.DiGraph, max_degree: Optional[int] = None) -> List[int]:
    """
    Degreewise dimensions of the image of the local ring in the exterior algebra.

    An arrow u -> v maps to u ^ v, so a k-matching maps to a signed basis
    2k-vector. The degree-k dimension is the exact rank of those vectors.

    Raises:
        GraphStructureError: If g carries no orientation.
    """
    if not g.is_directed():
        raise GraphStructureError("Reduced ring needs an orientation (nx.DiGraph)")
    vertices = sorted(g.nodes, key=lambda v: (type(v).__name__, v))
    order = {v: k for k, v in enumerate(vertices)}
    edges = sorted(g.edges(), key=lambda e: (order[e[0]], order[e[1]]))
    dims: List[int] = []
    k = 1
    while max_degree is None or k <= max_degree:
        rows = []
        columns: Dict[FrozenSet[Hashable], int] = {}
        for matching in _matchings(edges, k):
            sequence = [v for edge in matching for v in edge]
            support = frozenset(sequence)
            column = columns.setdefault(support, len(columns))
            rows.append((column, _orientation_sign(sequence, order)))
        if not rows:
            break
        matrix = RationalMatrix(len(rows), len(columns), {(r, c): s for r, (c, s) in enumerate(rows)})
        dims.append(rank(matrix))
        k += 1
    return dims
