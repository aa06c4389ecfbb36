"""
Form Graph

For a small functional F_S (gamma(S) a tree) the Kirillov form B_S is
organised by a directed graph Γ(S):

- one vertex e_ij for every off-diagonal pair of the support;
- one vertex d_s for every s in S;
- an arrow e_ij -> e_jl whenever (i, l) is in S, and d_s -> e_s.

B_S(v, w) = 1 exactly along the arrows, so the rank of B_S is the rank of
the skew adjacency matrix of Γ(S). Components are split into eigenpairs
(m, 1 - m) of the principal element.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

import networkx as nx

from frobenius_toolkit.algebra.functionals import (
    ConsistencyError,
    PrincipalElement,
    cyclic_reduce,
    cyclic_support,
    dual_basis,
    gamma_graph,
    is_tree,
)
from frobenius_toolkit.algebra.sln import (
    BasisElement,
    Functional,
    IndexPair,
    LieSupport,
    bracket,
    parabolic_support,
)
from frobenius_toolkit.graphs.matching import (
    GraphStructureError,
    MatchingCertificate,
    matching_number,
    skew_adjacency_rank,
)
from frobenius_toolkit.utils.helpers import format_rational

logger = logging.getLogger(__name__)


class FormVertex(NamedTuple):
    """kind is "e" for a matrix unit e_ij and "d" for a dual element d_s."""

    kind: str
    i: int
    j: int

    @classmethod
    def unit(cls, i: int, j: int) -> "FormVertex":
        return cls("e", i, j)

    @classmethod
    def dual(cls, s: Sequence[int]) -> "FormVertex":
        return cls("d", int(s[0]), int(s[1]))

    @property
    def pair(self) -> IndexPair:
        return IndexPair(self.i, self.j)

    @property
    def label(self) -> str:
        if self.i < 10 and self.j < 10:
            return f"{self.kind}{self.i}{self.j}"
        return f"{self.kind}{self.i},{self.j}"


def canonical_key(vertex: FormVertex) -> Tuple[bool, int, int]:
    """Matrix units lexicographically, then duals by s."""
    return (vertex.kind == "d", vertex.i, vertex.j)


@dataclass(eq=False)
class FormGraph:
    g: LieSupport
    S: FrozenSet[IndexPair]
    graph: nx.DiGraph

    @property
    def vertices(self) -> List[FormVertex]:
        return sorted(self.graph.nodes, key=canonical_key)

    @property
    def arcs(self) -> Set[Tuple[FormVertex, FormVertex]]:
        return set(self.graph.edges())

    def undirected(self) -> nx.Graph:
        return self.graph.to_undirected()

    def components(self) -> List[List[FormVertex]]:
        """Weak components, each sorted canonically, ordered by their least vertex."""
        parts = [sorted(c, key=canonical_key) for c in nx.weakly_connected_components(self.graph)]
        return sorted(parts, key=lambda part: canonical_key(part[0]))

    def subgraph(self, component: Iterable[FormVertex]) -> nx.DiGraph:
        return self.graph.subgraph(component).copy()


def _check_preconditions(g: LieSupport, S: FrozenSet[IndexPair]) -> None:
    outside = sorted(s for s in S if s not in g.pairs)
    if outside:
        raise GraphStructureError(f"S has pairs outside {g.describe()}: {outside}")
    if not is_tree(gamma_graph(g.n, S)):
        raise GraphStructureError(f"gamma(S) is not a tree for S = {sorted(S)}")


def _support_arcs(g: LieSupport, s: IndexPair) -> List[Tuple[FormVertex, FormVertex]]:
    i, l = s
    arcs = []
    for j in range(1, g.n + 1):
        if j in (i, l):
            continue
        if (i, j) in g.pairs and (j, l) in g.pairs:
            arcs.append((FormVertex.unit(i, j), FormVertex.unit(j, l)))
    return arcs


def build_form_graph(g: LieSupport, S: Iterable[Sequence[int]]) -> FormGraph:
    """
    Γ(S) on the support g.

    Raises:
        GraphStructureError: If S is not inside g or gamma(S) is not a tree.
    """
    support = frozenset(IndexPair(int(i), int(j)) for i, j in S)
    _check_preconditions(g, support)
    graph = nx.DiGraph()
    graph.add_nodes_from(FormVertex.unit(i, j) for i, j in g.offdiagonal)
    for s in sorted(support):
        graph.add_edge(FormVertex.dual(s), FormVertex.unit(*s))
        graph.add_edges_from(_support_arcs(g, s))
    if graph.number_of_nodes() != g.dimension:
        raise ConsistencyError(f"Γ(S) has {graph.number_of_nodes()} vertices, dim g = {g.dimension}")
    logger.debug(f"Γ(S) on {g.describe()}: {graph.number_of_nodes()} vertices, {graph.number_of_edges()} arcs")
    return FormGraph(g=g, S=support, graph=graph)


def audit_arc_semantics(fg: FormGraph) -> bool:
    """
    B_S(v, w) is 1 along every arrow v -> w and 0 on every other ordered pair
    (apart from the reversed arrows, where skew symmetry gives -1).
    """
    n = fg.g.n
    f_s = Functional.from_support(fg.S)
    duals = {d.s: d.combination() for d in dual_basis(n, fg.S)}

    def as_combination(v: FormVertex) -> Dict[BasisElement, Fraction]:
        if v.kind == "e":
            return {BasisElement.e(v.i, v.j): Fraction(1)}
        return duals[v.pair]

    vertices = fg.vertices
    combos = {v: as_combination(v) for v in vertices}
    for a_index, v in enumerate(vertices):
        for w in vertices[a_index + 1:]:
            value = Fraction(0)
            for x, cx in combos[v].items():
                for y, cy in combos[w].items():
                    value += cx * cy * f_s.evaluate(bracket(x, y, n), n)
            expected = 1 if fg.graph.has_edge(v, w) else -1 if fg.graph.has_edge(w, v) else 0
            if value != expected:
                logger.warning(f"B_S({v.label}, {w.label}) = {value}, expected {expected}")
                return False
    return True


def vertex_eigenvalue(v: FormVertex, d: PrincipalElement) -> Fraction:
    return Fraction(0) if v.kind == "d" else d.eigenvalue(v.i, v.j)


def component_root(fg: FormGraph, component: Sequence[FormVertex]) -> Optional[FormVertex]:
    """The unique vertex of in-degree 0 when the component is a rooted tree."""
    sub = fg.graph.subgraph(component)
    if sub.number_of_edges() != len(component) - 1 or not nx.is_weakly_connected(sub):
        return None
    roots = [v for v in component if sub.in_degree(v) == 0]
    if len(roots) == 1 and all(sub.in_degree(v) <= 1 for v in component):
        return roots[0]
    return None


class EigenpairComponent(NamedTuple):
    index: int
    vertices: Tuple[FormVertex, ...]
    root: Optional[FormVertex]
    eigenpair: Tuple[Fraction, Fraction]


def eigenpair_components(fg: FormGraph, d: PrincipalElement) -> List[EigenpairComponent]:
    """
    Components labelled by their eigenpair (m, 1 - m), m read at the root
    (or at the least vertex of an unrooted component).

    Raises:
        GraphStructureError: If a component carries an eigenvalue outside its pair.
    """
    labelled = []
    for index, component in enumerate(fg.components()):
        root = component_root(fg, component)
        anchor = root if root is not None else component[0]
        m = vertex_eigenvalue(anchor, d)
        for v in component:
            if vertex_eigenvalue(v, d) not in (m, 1 - m):
                raise GraphStructureError(
                    f"Vertex {v.label} has eigenvalue {vertex_eigenvalue(v, d)} in component of pair ({m}, {1 - m})"
                )
        labelled.append(EigenpairComponent(index, tuple(component), root, (m, 1 - m)))
    return labelled


def rooted_components_check(fg: FormGraph) -> bool:
    """Every component is a tree with a single vertex of in-degree 0."""
    return all(component_root(fg, component) is not None for component in fg.components())


def components_bipartite(fg: FormGraph) -> bool:
    return nx.is_bipartite(fg.undirected())


class PerfectMatching(NamedTuple):
    exists: bool
    unique: bool
    matching: MatchingCertificate


def perfect_matching_unique(fg: FormGraph) -> PerfectMatching:
    """
    Perfect matching of |Γ(S)| by leaf stripping: the edge at a leaf is forced,
    so when the stripping succeeds the matching is the only one.

    Raises:
        GraphStructureError: If some component is not a tree.
    """
    work = fg.undirected()
    if not nx.is_forest(work):
        raise GraphStructureError("Leaf stripping needs every component to be a tree")
    chosen = []
    while work.number_of_nodes():
        if any(work.degree(v) == 0 for v in work):
            return PerfectMatching(False, False, MatchingCertificate.from_pairs(chosen))
        leaf = min((v for v in work if work.degree(v) == 1), key=canonical_key)
        (partner,) = list(work[leaf])
        chosen.append((leaf, partner))
        work.remove_nodes_from([leaf, partner])
    return PerfectMatching(True, True, MatchingCertificate.from_pairs(chosen))


def component_rank(fg: FormGraph, component: Sequence[FormVertex]) -> int:
    """2 mn on tree components; exact elimination of the skew adjacency matrix otherwise."""
    sub = fg.subgraph(component)
    undirected = sub.to_undirected()
    if nx.is_tree(undirected):
        return 2 * matching_number(undirected).number
    return skew_adjacency_rank(sub)


def form_rank(fg: FormGraph) -> int:
    return sum(component_rank(fg, component) for component in fg.components())


def form_index(fg: FormGraph) -> int:
    """idx(|Γ(S)|) = vx - 2 mn."""
    return fg.graph.number_of_nodes() - 2 * matching_number(fg.undirected()).number


def component_summary(fg: FormGraph, d: PrincipalElement) -> List[dict]:
    """One JSON-ready row per component: vertices, arcs, eigenpair, root, mn and rank."""
    rows = []
    for component in eigenpair_components(fg, d):
        sub = fg.subgraph(component.vertices)
        undirected = sub.to_undirected()
        arcs = sorted(sub.edges(), key=lambda arc: (canonical_key(arc[0]), canonical_key(arc[1])))
        rows.append({
            "component": component.index,
            "vertices": [v.label for v in component.vertices],
            "arcs": [[a.label, b.label] for a, b in arcs],
            "eigenpair": [format_rational(component.eigenpair[0]), format_rational(component.eigenpair[1])],
            "root": None if component.root is None else component.root.label,
            "mn": matching_number(undirected).number,
            "rank": component_rank(fg, component.vertices),
        })
    return rows


# --- recursive rebuild of the cyclic Γ(n, m) ------------------------------

def _relabel(vertex: FormVertex, m: int) -> FormVertex:
    return FormVertex(vertex.kind, m + 1 - vertex.i, m + 1 - vertex.j)


def _removed_blocks(n: int, m: int) -> Tuple[List[IndexPair], List[IndexPair]]:
    """
    The two blocks a reduction step deletes from P(n, m): rows n-m+1..n of
    columns m+1..n, then rows 1..n-m of columns n-m+1..n.
    """
    first = [IndexPair(k, l) for k in range(n - m + 1, n + 1) for l in range(m + 1, n + 1)]
    second = [IndexPair(j, k) for j in range(1, n - m + 1) for k in range(n - m + 1, n + 1)]
    return first, second


def _predecessors(g: LieSupport, S: FrozenSet[IndexPair], pair: IndexPair) -> List[IndexPair]:
    """Every (j, k) of g with an arrow e_jk -> e_kl onto pair = (k, l)."""
    k, l = pair
    return [
        IndexPair(j, k)
        for j in range(1, g.n + 1)
        if j not in (k, l) and (j, l) in S and (j, k) in g.pairs
    ]


def rebuild_form_graph(n: int, m: int) -> FormGraph:
    """
    Γ(n, m) of the cyclic functional built from Γ(n', m') of the reduced pair.

    Γ(2, 1) is the single link d12 -> e12. Otherwise Γ(n', m') is embedded
    (relabelled by a -> m+1-a after an unstable step) and every off-diagonal
    (k, l) of the first removed block is attached through its predecessor
    (j, k) in the second block: as a terminal chain e_ij -> e_jk -> e_kl when
    (j, k) has a predecessor (i, j) in Γ(n', m'), else as an isolated link
    e_jk -> e_kl. Each new s of S adds the link d_s -> e_s.

    Raises:
        ConsistencyError: If a predecessor is missing, not unique or outside
            the block it should lie in.
    """
    if (n, m) == (2, 1):
        return build_form_graph(parabolic_support(2, 1), [(1, 2)])
    step = cyclic_reduce(n, m)
    inner = rebuild_form_graph(step.n, step.m)
    g = parabolic_support(n, m)

    stable = step.kind == "stable"
    if stable:
        added = {IndexPair(i, i + m) for i in range(n - 2 * m + 1, n - m + 1)}
    else:
        added = {IndexPair(i, i + m) for i in range(1, n - m + 1)}

    def embed(vertex: FormVertex) -> FormVertex:
        return vertex if stable else _relabel(vertex, m)

    graph = nx.DiGraph()
    graph.add_nodes_from(embed(v) for v in inner.graph.nodes)
    graph.add_edges_from((embed(u), embed(v)) for u, v in inner.graph.edges())
    old_units = {v.pair for v in graph.nodes if v.kind == "e"}
    if not old_units <= g.pairs:
        raise ConsistencyError(f"Γ({step.n},{step.m}) does not embed in P({n},{m})")

    S = frozenset(embed(FormVertex.dual(s)).pair for s in inner.S) | added
    first, second = _removed_blocks(n, m)
    second_block = set(second)
    if {p for p in second if p in S} != added:
        raise ConsistencyError(f"New pairs of S for ({n},{m}) are not the second block's pairs of S")

    kinds: Counter = Counter()
    for k, l in first:
        if k == l:
            continue
        found = _predecessors(g, S, IndexPair(k, l))
        if len(found) != 1 or found[0] not in second_block or found[0] in S:
            raise ConsistencyError(f"e{k},{l} has predecessors {found} in P({n},{m})")
        j = found[0].i
        graph.add_edge(FormVertex.unit(j, k), FormVertex.unit(k, l))
        above = _predecessors(g, S, IndexPair(j, k))
        if not above:
            kinds["link"] += 1
            continue
        if len(above) != 1 or above[0] not in old_units:
            raise ConsistencyError(f"e{j},{k} has predecessors {above} outside Γ({step.n},{step.m})")
        graph.add_edge(FormVertex.unit(*above[0]), FormVertex.unit(j, k))
        kinds["chain"] += 1
    for s in sorted(added):
        graph.add_edge(FormVertex.dual(s), FormVertex.unit(*s))
        kinds["dual"] += 1

    logger.debug(f"Rebuilt Γ({n},{m}) from Γ({step.n},{step.m}) ({step.kind}): {dict(kinds)}")
    return FormGraph(g=g, S=S, graph=graph)


def form_graph_rebuild_matches(n: int, m: int) -> bool:
    """The recursive Γ(n, m) equals the direct construction on the cyclic support."""
    try:
        rebuilt = rebuild_form_graph(n, m)
    except ConsistencyError as e:
        logger.error(f"Recursive Γ({n},{m}) could not be built: {str(e)}")
        return False
    direct = build_form_graph(parabolic_support(n, m), cyclic_support(n, m).support)
    same = (
        rebuilt.S == direct.S
        and set(rebuilt.graph.nodes) == set(direct.graph.nodes)
        and rebuilt.arcs == direct.arcs
    )
    if not same:
        logger.warning(f"Recursive Γ({n},{m}) differs from the direct construction")
    return same
