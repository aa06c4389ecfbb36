"""
Matching Numbers and Graph Ranks

Graphs are plain networkx graphs: ``nx.Graph`` for the undirected |Γ| and
``nx.DiGraph`` when an orientation is needed. This module computes matching
numbers (forest pruning, a brute-force oracle, Hopcroft-Karp on bipartite
graphs), vertex covers, the graph index vx - 2 mn and the rank of the skew
adjacency matrix.
"""

import logging
import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Tuple

import networkx as nx

from frobenius_toolkit.linalg.rational_matrix import RationalMatrix, rank
from frobenius_toolkit.utils.config import get_settings

logger = logging.getLogger(__name__)

Edge = FrozenSet[Hashable]


class GraphStructureError(ValueError):
    """Raised when a graph does not have the shape an operation needs."""


def _sort_key(vertex):
    return (type(vertex).__name__, vertex)


def _edge(u, v) -> Edge:
    return frozenset((u, v))


@dataclass(frozen=True)
class MatchingCertificate:
    """A set of pairwise disjoint edges; number is its size."""

    edges: FrozenSet[Edge]

    def __post_init__(self):
        seen = set()
        for edge in self.edges:
            if len(edge) != 2 or seen & edge:
                raise GraphStructureError(f"Edges of a matching must be disjoint: {sorted(map(tuple, self.edges), key=str)}")
            seen |= edge

    @property
    def number(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> FrozenSet[Hashable]:
        return frozenset(v for edge in self.edges for v in edge)

    def sorted_edges(self) -> List[Tuple[Hashable, Hashable]]:
        return sorted((tuple(sorted(edge, key=_sort_key)) for edge in self.edges),
                      key=lambda pair: tuple(map(_sort_key, pair)))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[Hashable, Hashable]]) -> "MatchingCertificate":
        return cls(frozenset(_edge(u, v) for u, v in pairs))


def _require_simple(g: nx.Graph) -> None:
    if g.is_directed() or g.is_multigraph():
        raise GraphStructureError("Expected a simple undirected graph")
    if nx.number_of_selfloops(g):
        raise GraphStructureError("Self-loops are not allowed")


def _is_forest(g: nx.Graph) -> bool:
    return g.number_of_nodes() == 0 or nx.is_forest(g)


def matching_number_pruned(g: nx.Graph) -> MatchingCertificate:
    """
    Maximum matching of a forest by pruning.

    Each round picks the least vertex v that has a leaf neighbour and at most
    one non-leaf neighbour (one always exists at the end of a longest path),
    takes the edge from v to its least leaf and deletes v with all its leaves.
    This covers the isolated edge, the star, the terminal chain of length two
    and the general branch vertex with its terminal edges.

    Args:
        g: Undirected forest.

    Returns:
        MatchingCertificate: A maximum matching.

    Raises:
        GraphStructureError: If g is not a forest.
    """
    _require_simple(g)
    if not _is_forest(g):
        raise GraphStructureError("Pruning needs a forest")
    work = g.copy()
    chosen = []
    while work.number_of_edges():
        work.remove_nodes_from([v for v in list(work) if work.degree(v) == 0])
        for v in sorted(work, key=_sort_key):
            leaves = sorted((u for u in work[v] if work.degree(u) == 1), key=_sort_key)
            if not leaves:
                continue
            inner = [u for u in work[v] if work.degree(u) > 1]
            if len(inner) > 1:
                continue
            if work.degree(v) == 1:
                kind = "isolated-edge"
            elif not inner:
                kind = "star"
            elif work.degree(v) == 2:
                kind = "chain"
            else:
                kind = "branch"
            chosen.append((v, leaves[0]))
            logger.debug(f"Pruned {kind} at {v}")
            work.remove_nodes_from([v] + leaves)
            break
        else:
            raise GraphStructureError("No prunable vertex found; the input is not a forest")
    return MatchingCertificate.from_pairs(chosen)


def matching_number_bruteforce(g: nx.Graph, max_edges: Optional[int] = None) -> MatchingCertificate:
    """
    Exhaustive maximum matching over all edge subsets (branch and bound).

    Raises:
        GraphStructureError: If g has more than max_edges edges
            (FROBENIUS_BRUTEFORCE_EDGES by default).
    """
    _require_simple(g)
    bound = get_settings().bruteforce_edges if max_edges is None else max_edges
    edges = sorted((tuple(sorted(e, key=_sort_key)) for e in g.edges()),
                   key=lambda pair: tuple(map(_sort_key, pair)))
    if len(edges) > bound:
        raise GraphStructureError(f"Brute force limited to {bound} edges, graph has {len(edges)}")
    best: List[Tuple[Hashable, Hashable]] = []
    chosen: List[Tuple[Hashable, Hashable]] = []
    used = set()

    def extend(index: int) -> None:
        nonlocal best
        if len(chosen) + (len(edges) - index) <= len(best):
            return
        if index == len(edges):
            best = list(chosen)
            return
        u, v = edges[index]
        if u not in used and v not in used:
            chosen.append((u, v))
            used.update((u, v))
            extend(index + 1)
            chosen.pop()
            used.difference_update((u, v))
        extend(index + 1)

    extend(0)
    return MatchingCertificate.from_pairs(best)


def _bipartite_sides(g: nx.Graph) -> List[Hashable]:
    if not nx.is_bipartite(g):
        raise GraphStructureError("Graph is not bipartite")
    coloring = nx.bipartite.color(g)
    return [v for v, side in coloring.items() if side == 0]


def bipartite_matching(g: nx.Graph) -> MatchingCertificate:
    """Hopcroft-Karp maximum matching of a bipartite graph."""
    _require_simple(g)
    top = _bipartite_sides(g)
    mate = nx.bipartite.hopcroft_karp_matching(g, top_nodes=top)
    return MatchingCertificate.from_pairs((u, mate[u]) for u in top if u in mate)


def minimum_vertex_cover_bipartite(g: nx.Graph) -> FrozenSet[Hashable]:
    """Vertex cover of size mn(g) from a maximum matching and alternating reachability."""
    _require_simple(g)
    top = _bipartite_sides(g)
    mate = nx.bipartite.hopcroft_karp_matching(g, top_nodes=top)
    cover = frozenset(nx.bipartite.to_vertex_cover(g, mate, top_nodes=top))
    for u, v in g.edges():
        if u not in cover and v not in cover:
            raise GraphStructureError(f"Edge ({u}, {v}) left uncovered")
    return cover


def cover_number_bipartite(g: nx.Graph) -> int:
    """
    Cover number of a bipartite graph, which equals its matching number.

    Raises:
        GraphStructureError: If g is not bipartite.
    """
    cover = minimum_vertex_cover_bipartite(g)
    matching = bipartite_matching(g)
    if len(cover) != matching.number:
        raise GraphStructureError(f"Cover of size {len(cover)} against matching of size {matching.number}")
    return len(cover)


def matching_number(g: nx.Graph) -> MatchingCertificate:
    """Maximum matching: pruning on forests, Hopcroft-Karp on bipartite graphs, blossom otherwise."""
    _require_simple(g)
    if _is_forest(g):
        return matching_number_pruned(g)
    if nx.is_bipartite(g):
        return bipartite_matching(g)
    return MatchingCertificate.from_pairs(nx.max_weight_matching(g, maxcardinality=True))


def graph_index(g: nx.Graph) -> int:
    """vx(g) - 2 mn(g)."""
    return g.number_of_nodes() - 2 * matching_number(g).number


def _undirected(g: nx.DiGraph) -> nx.Graph:
    if not g.is_directed():
        raise GraphStructureError("An orientation (nx.DiGraph) is required")
    for u, v in g.edges():
        if g.has_edge(v, u):
            raise GraphStructureError(f"Both orientations present on edge ({u}, {v})")
    return g.to_undirected()


def skew_adjacency_matrix(g: nx.DiGraph, order: Optional[List[Hashable]] = None) -> Tuple[RationalMatrix, List[Hashable]]:
    """
    M(g) with +1 at (u, v) and -1 at (v, u) for every arrow u -> v.

    Returns:
        Tuple of the matrix and the vertex order used for rows and columns.
    """
    _undirected(g)
    vertices = list(order) if order is not None else sorted(g.nodes, key=_sort_key)
    position = {v: k for k, v in enumerate(vertices)}
    entries = {}
    for u, v in g.edges():
        entries[(position[u], position[v])] = 1
        entries[(position[v], position[u])] = -1
    return RationalMatrix(len(vertices), len(vertices), entries), vertices


def skew_adjacency_rank(g: nx.DiGraph) -> int:
    matrix, _ = skew_adjacency_matrix(g)
    return rank(matrix)


def orientation_conjugator(o1: nx.DiGraph, o2: nx.DiGraph) -> Dict[Hashable, int]:
    """
    Signs D (each +-1) with D M(o1) D = M(o2), for two orientations of one forest.

    In each component the least vertex gets +1 and the sign flips across every
    edge the two orientations disagree on.

    Raises:
        GraphStructureError: If the orientations differ in edges or are not forests.
    """
    first, second = _undirected(o1), _undirected(o2)
    if set(map(frozenset, first.edges())) != set(map(frozenset, second.edges())) or set(first) != set(second):
        raise GraphStructureError("Orientations are not of the same graph")
    if not _is_forest(first):
        raise GraphStructureError("Sign conjugation is only guaranteed on forests")
    signs: Dict[Hashable, int] = {}
    for component in nx.connected_components(first):
        start = min(component, key=_sort_key)
        signs[start] = 1
        for u, v in nx.bfs_edges(first, start):
            agree = o1.has_edge(u, v) == o2.has_edge(u, v)
            signs[v] = signs[u] if agree else -signs[u]
    return signs


def random_tree(n_vertices: int, rng: random.Random) -> nx.Graph:
    """Uniform labelled tree on 0..n-1 from a random Pruefer sequence."""
    if n_vertices < 1:
        raise ValueError(f"A tree needs at least one vertex, got {n_vertices}")
    if n_vertices == 1:
        return nx.empty_graph(1)
    return nx.from_prufer_sequence([rng.randrange(n_vertices) for _ in range(n_vertices - 2)])


def random_forest(n_edges: int, rng: random.Random) -> nx.Graph:
    """Disjoint union of random trees with n_edges edges in total, plus an isolated vertex or two."""
    forest = nx.empty_graph(rng.randint(0, 2))
    remaining = n_edges
    while remaining > 0:
        size = rng.randint(1, remaining)
        forest = nx.disjoint_union(forest, random_tree(size + 1, rng))
        remaining -= size
    return forest


def random_orientation(g: nx.Graph, rng: random.Random) -> nx.DiGraph:
    oriented = nx.DiGraph()
    oriented.add_nodes_from(g.nodes)
    for u, v in g.edges():
        oriented.add_edge(*((u, v) if rng.random() < 0.5 else (v, u)))
    return oriented


def categorical_product(g: nx.Graph, h: nx.Graph) -> nx.Graph:
    """(a, x) ~ (b, y) iff a ~ b in g and x ~ y in h."""
    return nx.tensor_product(g, h)
