"""
Graphviz DOT emission for γ(S), Γ(S) and plain graphs.
"""

from typing import Iterable, Iterator, Optional

import networkx as nx

from frobenius_toolkit.algebra.functionals import PrincipalElement, SmallGraph
from frobenius_toolkit.graphs.form_graph import FormGraph, canonical_key, component_root, vertex_eigenvalue
from frobenius_toolkit.utils.helpers import format_rational


def _gvquote(s) -> str:
    return '"{}"'.format(str(s).replace('"', r'\"'))


def _header(command: Optional[str]) -> Iterator[str]:
    yield f"// generated by: {command or 'frobenius-toolkit'}\n"


def _render(lines: Iterable[str]) -> str:
    return "".join(lines)


def gamma_dot(g: SmallGraph, command: Optional[str] = None) -> str:
    """γ(S) on vertices 1..n with one arrow i -> j per pair of S."""

    def lines() -> Iterator[str]:
        yield from _header(command)
        yield "digraph gamma {\n"
        yield "  rankdir=LR;\n"
        for v in range(1, g.n + 1):
            yield f"  {_gvquote(v)};\n"
        for i, j in sorted(g.arcs):
            yield f"  {_gvquote(i)} -> {_gvquote(j)};\n"
        yield "}\n"

    return _render(lines())


def form_graph_dot(fg: FormGraph, d: Optional[PrincipalElement] = None, command: Optional[str] = None) -> str:
    """
    Γ(S) with one cluster per component; roots are drawn as boxes and, when d
    is given, every vertex is labelled with its ad(d)-eigenvalue.
    """

    def lines() -> Iterator[str]:
        yield from _header(command)
        yield "digraph form_graph {\n"
        yield "  node [shape=ellipse];\n"
        for index, component in enumerate(fg.components()):
            root = component_root(fg, component)
            yield f"  subgraph cluster_{index} {{\n"
            yield f"    label={_gvquote(f'component {index}')};\n"
            for v in component:
                label = v.label
                if d is not None:
                    label += f" ({format_rational(vertex_eigenvalue(v, d))})"
                shape = " shape=box" if v == root else ""
                yield f"    {_gvquote(v.label)} [label={_gvquote(label)}{shape}];\n"
            for u, v in sorted(fg.subgraph(component).edges(), key=lambda e: (canonical_key(e[0]), canonical_key(e[1]))):
                yield f"    {_gvquote(u.label)} -> {_gvquote(v.label)};\n"
            yield "  }\n"
        yield "}\n"

    return _render(lines())


def graph_dot(g: nx.Graph, name: str = "G", command: Optional[str] = None) -> str:
    """Any networkx graph, directed or not, with stringified vertex labels."""
    arrow = "->" if g.is_directed() else "--"
    kind = "digraph" if g.is_directed() else "graph"

    def lines() -> Iterator[str]:
        yield from _header(command)
        yield f"{kind} {_gvquote(name)} {{\n"
        for v in sorted(g.nodes, key=str):
            yield f"  {_gvquote(getattr(v, 'label', v))};\n"
        for u, v in sorted(g.edges(), key=lambda e: (str(e[0]), str(e[1]))):
            yield f"  {_gvquote(getattr(u, 'label', u))} {arrow} {_gvquote(getattr(v, 'label', v))};\n"
        yield "}\n"

    return _render(lines())
