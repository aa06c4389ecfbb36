"""
Classical Yang-Baxter r-matrices

A Frobenius functional F on g gives a skew solution r of the classical
Yang-Baxter equation from the inverse of its Kirillov form. Three
constructions are provided and agree exactly:

- r_from_inverse: invert B_F (r_matrix_for builds B_F from a support first);
- r_from_lagrangian: split g by the parity of the principal element's
  eigenvalues and dualize one half against the other;
- r_from_peeling: detach terminal chains of Γ(S) until only links remain.

Every construction satisfies R . B_F = WEDGE_SCALE * I, where R is the
coefficient matrix of r (a ^ b read as a (x) b - b (x) a).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, Mapping, NamedTuple, Sequence, Tuple

import networkx as nx

from frobenius_toolkit.algebra.functionals import (
    PrincipalElement,
    cyclic_support,
    dual_basis,
)
from frobenius_toolkit.algebra.sln import (
    BasisElement,
    Combination,
    Functional,
    KirillovMatrix,
    LieSupport,
    bracket,
    kirillov_matrix,
)
from frobenius_toolkit.graphs.form_graph import FormGraph, FormVertex, canonical_key, component_root
from frobenius_toolkit.graphs.matching import GraphStructureError
from frobenius_toolkit.linalg.rational_matrix import RationalMatrix, SingularMatrixError, invert
from frobenius_toolkit.utils.helpers import format_rational

logger = logging.getLogger(__name__)

# Scalar c in R . B = c * I shared by every construction below.
WEDGE_SCALE = Fraction(-1)


class RMatrixError(ValueError):
    """Raised when an r-matrix cannot be built from the given data."""


def _term_text(coefficient: Fraction, body: str, first: bool) -> str:
    if coefficient == 1:
        return body if first else f" + {body}"
    if coefficient == -1:
        return f"-{body}" if first else f" - {body}"
    if coefficient < 0:
        return f"-{format_rational(-coefficient)}{body}" if first else f" - {format_rational(-coefficient)}{body}"
    return f"{format_rational(coefficient)}{body}" if first else f" + {format_rational(coefficient)}{body}"


@dataclass
class WedgeTwo:
    """sum c_ab a ^ b, stored with a < b in canonical basis order."""

    terms: Dict[Tuple[BasisElement, BasisElement], Fraction] = field(default_factory=dict)

    def add(self, a: BasisElement, b: BasisElement, coefficient) -> None:
        if a == b or not coefficient:
            return
        key, sign = ((a, b), 1) if a < b else ((b, a), -1)
        value = self.terms.get(key, Fraction(0)) + sign * Fraction(coefficient)
        if value:
            self.terms[key] = value
        else:
            self.terms.pop(key, None)

    def add_wedge(self, x: Mapping[BasisElement, Fraction], y: Mapping[BasisElement, Fraction], coefficient=1) -> None:
        for a, ca in x.items():
            for b, cb in y.items():
                self.add(a, b, Fraction(coefficient) * ca * cb)

    @classmethod
    def wedge(cls, x: Mapping[BasisElement, Fraction], y: Mapping[BasisElement, Fraction]) -> "WedgeTwo":
        result = cls()
        result.add_wedge(x, y)
        return result

    def __add__(self, other: "WedgeTwo") -> "WedgeTwo":
        result = WedgeTwo(dict(self.terms))
        for (a, b), c in other.terms.items():
            result.add(a, b, c)
        return result

    def scale(self, factor) -> "WedgeTwo":
        factor = Fraction(factor)
        return WedgeTwo({k: c * factor for k, c in self.terms.items()} if factor else {})

    def __eq__(self, other) -> bool:
        return isinstance(other, WedgeTwo) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def elements(self) -> List[BasisElement]:
        return sorted({x for pair in self.terms for x in pair})

    def to_json(self) -> dict:
        return {
            "terms": [
                [[a.to_json(), b.to_json()], format_rational(c)] for (a, b), c in sorted(self.terms.items())
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "WedgeTwo":
        result = cls()
        for (a, b), c in data["terms"]:
            result.add(BasisElement.from_json(a), BasisElement.from_json(b), Fraction(c))
        return result


def format_wedge(r: WedgeTwo) -> str:
    """Human-readable sum, e.g. "ε1∧e12 + e13∧e32"."""
    if r.is_zero():
        return "0"
    pieces = []
    for k, ((a, b), c) in enumerate(sorted(r.terms.items())):
        pieces.append(_term_text(c, f"{a.label}∧{b.label}", k == 0))
    return "".join(pieces)


@dataclass
class WedgeThree:
    """Components of [r, r] at index triples p < q < s."""

    terms: Dict[Tuple[BasisElement, BasisElement, BasisElement], Fraction] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.terms

    def to_json(self) -> dict:
        return {
            "terms": [
                [[x.to_json() for x in key], format_rational(c)] for key, c in sorted(self.terms.items())
            ]
        }


def coefficient_matrix(r: WedgeTwo, basis: Sequence[BasisElement]) -> RationalMatrix:
    """Skew matrix R with R[a, b] = c_ab and R[b, a] = -c_ab."""
    index = {x: k for k, x in enumerate(basis)}
    entries = {}
    for (a, b), c in r.terms.items():
        if a not in index or b not in index:
            raise RMatrixError(f"r has a term {a.label}∧{b.label} outside the basis")
        entries[(index[a], index[b])] = c
        entries[(index[b], index[a])] = -c
    return RationalMatrix(len(basis), len(basis), entries)


def defining_property_holds(r: WedgeTwo, km: KirillovMatrix) -> bool:
    """R . B = WEDGE_SCALE * I exactly."""
    size = len(km.basis)
    product = coefficient_matrix(r, km.basis) @ km.matrix
    return product == RationalMatrix.identity(size).scale(WEDGE_SCALE)


def r_from_inverse(km: KirillovMatrix) -> WedgeTwo:
    """
    r = WEDGE_SCALE * sum_{a<b} (B^-1)_ab x_a ^ x_b.

    Raises:
        SingularMatrixError: If B is singular.
    """
    inverse = invert(km.matrix)
    r = WedgeTwo()
    for (row, col), value in inverse.items():
        if row < col:
            r.add(km.basis[row], km.basis[col], WEDGE_SCALE * value)
    return r


# --- Lagrangian split ----------------------------------------------------

@dataclass
class LagrangianSplit:
    """
    even spans the sum of the even eigenspaces; odd[k] is the element of the
    odd part with B(even[k], odd[k']) = delta_kk'.
    """

    even: List[Combination]
    odd: List[Combination]
    blocks: Dict[Fraction, int]


def _eigenvalue_of(x: BasisElement, d: PrincipalElement) -> Fraction:
    value = d.eigenvalue_of(x)
    if value.denominator != 1:
        raise RMatrixError(f"ad(D) eigenvalue {value} on {x.label} is not an integer")
    return value


def lagrangian_split(g: LieSupport, d: PrincipalElement, f: Functional) -> LagrangianSplit:
    """
    Split g by the parity of ad(D)-eigenvalues and dualize the odd half.

    Each even eigenspace f_m pairs only with f_{1-m}, so the pairing matrix
    is inverted one (m, 1-m) block at a time.

    Raises:
        RMatrixError: If an eigenvalue is not an integer.
        SingularMatrixError: If some block pairing is singular.
    """
    km = kirillov_matrix(g, f)
    by_eigenvalue: Dict[Fraction, List[BasisElement]] = {}
    for x in g.basis:
        by_eigenvalue.setdefault(_eigenvalue_of(x, d), []).append(x)

    even: List[Combination] = []
    odd: List[Combination] = []
    blocks: Dict[Fraction, int] = {}
    for m in sorted(by_eigenvalue):
        if m % 2:
            continue
        xs = by_eigenvalue[m]
        ys = by_eigenvalue.get(1 - m, [])
        if len(xs) != len(ys):
            raise SingularMatrixError(abs(len(xs) - len(ys)), f"Eigenspaces {m} and {1 - m} have dimensions {len(xs)} and {len(ys)}")
        pairing = RationalMatrix(len(xs), len(ys), {
            (i, j): km.value(x, y) for i, x in enumerate(xs) for j, y in enumerate(ys) if km.value(x, y)
        })
        inverse = invert(pairing)
        for i, x in enumerate(xs):
            even.append({x: Fraction(1)})
            dual = {ys[k]: inverse.entry(k, i) for k in range(len(ys)) if inverse.entry(k, i)}
            odd.append(dual)
        blocks[m] = len(xs)
    covered = sum(2 * size for size in blocks.values())
    if covered != g.dimension:
        raise SingularMatrixError(g.dimension - covered, f"Split covers {covered} of {g.dimension} dimensions")
    logger.debug(f"Lagrangian split of {g.describe()}: blocks {dict((format_rational(k), v) for k, v in blocks.items())}")
    return LagrangianSplit(even=even, odd=odd, blocks=blocks)


def r_from_lagrangian(ls: LagrangianSplit) -> WedgeTwo:
    """r = sum x_k ^ x_k'."""
    r = WedgeTwo()
    for x, y in zip(ls.even, ls.odd):
        r.add_wedge(x, y)
    return r


def split_is_lagrangian(ls: LagrangianSplit, km: KirillovMatrix) -> bool:
    """B vanishes on even x even and odd x odd and pairs even[k] with odd[k] to 1."""
    for half in (ls.even, ls.odd):
        for a, x in enumerate(half):
            for y in half[a + 1:]:
                if km.pairing(x, y):
                    return False
    for a, x in enumerate(ls.even):
        for b, y in enumerate(ls.odd):
            if km.pairing(x, y) != (1 if a == b else 0):
                return False
    return True


def even_part_closed(g: LieSupport, d: PrincipalElement) -> bool:
    """[f_even, f_even] lies in f_even and [f_even, f_odd] in f_odd."""
    parity = {x: _eigenvalue_of(x, d) % 2 for x in g.basis}
    for x in g.basis:
        if parity[x]:
            continue
        for y in g.basis:
            for z in bracket(x, y, g.n):
                if parity[z] != parity[y]:
                    return False
    return True


# --- peeling Γ(S) --------------------------------------------------------

class PeelingStep(NamedTuple):
    leaf: FormVertex
    partner: FormVertex
    updated: Tuple[Tuple[FormVertex, str, str], ...]


@dataclass
class PeelingResult:
    r: WedgeTwo
    links: List[Tuple[int, str, str]]
    steps: List[PeelingStep]

    def format(self) -> str:
        """Links grouped by component, the root's link first within each component."""
        if not self.links:
            return "0"
        ordered = []
        for component in sorted({c for c, _, _ in self.links}):
            ordered.extend(reversed([(a, b) for c, a, b in self.links if c == component]))
        return " + ".join(f"{a}∧{b}" for a, b in ordered)

    def component_text(self, component: int) -> str:
        return " + ".join(f"{a}∧{b}" for c, a, b in reversed(self.links) if c == component)


def _vector_text(vector: Mapping[FormVertex, Fraction]) -> str:
    terms = sorted(((v, c) for v, c in vector.items() if c), key=lambda item: canonical_key(item[0]))
    text = "".join(_term_text(c, v.label, k == 0).replace(" ", "") for k, (v, c) in enumerate(terms))
    return text if len(terms) == 1 and terms[0][1] == 1 else f"({text})"


def peel_form_graph(fg: FormGraph) -> PeelingResult:
    """
    Reduce every tree component of Γ(S) to links x -> x'.

    The deepest current leaf l (depth measured in the original component from
    its root, ties broken canonically) is paired with its neighbour p. Every
    other neighbour x of p is replaced by x - (B(x, p) / B(l, p)) l, which
    leaves x orthogonal to p without changing its other pairings. The link
    contributes a ^ b, ordered so that B(a, b) = 1.

    Raises:
        GraphStructureError: If a component is not a tree or has no perfect matching.
    """
    duals = {d.s: d.combination() for d in dual_basis(fg.g.n, fg.S)}

    def expand(vector: Mapping[FormVertex, Fraction]) -> Combination:
        combination: Combination = {}
        for v, c in vector.items():
            base = {BasisElement.e(v.i, v.j): Fraction(1)} if v.kind == "e" else duals[v.pair]
            for x, cx in base.items():
                combination[x] = combination.get(x, Fraction(0)) + c * cx
        return {x: c for x, c in combination.items() if c}

    r = WedgeTwo()
    links: List[Tuple[int, str, str]] = []
    steps: List[PeelingStep] = []
    for index, component in enumerate(fg.components()):
        sub = fg.subgraph(component)
        undirected = sub.to_undirected()
        if not nx.is_tree(undirected):
            raise GraphStructureError(f"Component {index} of Γ(S) is not a tree")
        root = component_root(fg, component) or component[0]
        depth = nx.single_source_shortest_path_length(undirected, root)

        pairing = nx.Graph()
        pairing.add_nodes_from(component)
        for u, v in sub.edges():
            pairing.add_edge(u, v, value=Fraction(1), tail=u)
        vectors = {v: {v: Fraction(1)} for v in component}

        def b_value(x: FormVertex, y: FormVertex) -> Fraction:
            data = pairing.edges[x, y]
            return data["value"] if data["tail"] == x else -data["value"]

        while pairing.number_of_nodes():
            if any(pairing.degree(v) == 0 for v in pairing):
                raise GraphStructureError(f"Component {index} of Γ(S) has no perfect matching")
            leaf = min((v for v in pairing if pairing.degree(v) == 1),
                       key=lambda v: (-depth[v], canonical_key(v)))
            (partner,) = list(pairing[leaf])
            leaf_value = b_value(leaf, partner)
            updated = []
            for x in sorted(pairing[partner], key=canonical_key):
                if x == leaf:
                    continue
                factor = -b_value(x, partner) / leaf_value
                before = _vector_text(vectors[x])
                for v, c in vectors[leaf].items():
                    vectors[x][v] = vectors[x].get(v, Fraction(0)) + factor * c
                vectors[x] = {v: c for v, c in vectors[x].items() if c}
                updated.append((x, before, _vector_text(vectors[x])))
            a, b = (leaf, partner) if leaf_value == 1 else (partner, leaf)
            if abs(leaf_value) != 1:
                raise GraphStructureError(f"Link {a.label}-{b.label} pairs to {leaf_value}")
            r.add_wedge(expand(vectors[a]), expand(vectors[b]))
            links.append((index, _vector_text(vectors[a]), _vector_text(vectors[b])))
            steps.append(PeelingStep(leaf, partner, tuple(updated)))
            for x, before, after in updated:
                logger.debug(f"Peeling {leaf.label}-{partner.label}: {before} -> {after}")
            pairing.remove_nodes_from([leaf, partner])
    return PeelingResult(r=r, links=links, steps=steps)


def r_from_peeling(fg: FormGraph) -> WedgeTwo:
    return peel_form_graph(fg).r


# --- closed forms --------------------------------------------------------

def _eps_sum(indices: Iterable[int]) -> Combination:
    return {BasisElement.eps(k): Fraction(1) for k in indices}


def _unit(i: int, j: int) -> Combination:
    return {BasisElement.e(i, j): Fraction(1)}


def closed_form_r_n1(n: int) -> WedgeTwo:
    """sum_p d_p ^ e_{p,p+1} + sum_{i<j} sum_{m=1}^{j-i-1} e_{i,j-m+1} ^ e_{j,i+m}, with d_p = eps_1 + ... + eps_p."""
    if n < 2:
        raise RMatrixError(f"r(n,1) needs n >= 2, got {n}")
    r = WedgeTwo()
    for p in range(1, n):
        r.add_wedge(_eps_sum(range(1, p + 1)), _unit(p, p + 1))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for m in range(1, j - i):
                r.add_wedge(_unit(i, j - m + 1), _unit(j, i + m))
    return r


def closed_form_r_n2(n: int) -> WedgeTwo:
    """
    r for the cyclic functional of P(n, 2), n odd:

    sum over s != (2,1) of d_s ^ e_s, plus d_21 ^ (e_21 + sum_{k>=2} e_{2k,2k-1}),
    plus, over i < j with j != i+2 and not (j = i+1 with i even),
    e_ij ^ sum_{k>=0} e_{j+2k, i+2k+2}; every sum stops once an index exceeds n.
    """
    if n < 3 or n % 2 == 0:
        raise RMatrixError(f"r(n,2) needs odd n >= 3, got {n}")
    duals = {d.s: d.combination() for d in dual_basis(n, cyclic_support(n, 2).support)}
    r = WedgeTwo()
    for s, d_s in duals.items():
        if s == (2, 1):
            continue
        r.add_wedge(d_s, _unit(*s))
    tail = dict(_unit(2, 1))
    for k in range(2, n // 2 + 1):
        tail[BasisElement.e(2 * k, 2 * k - 1)] = Fraction(1)
    r.add_wedge(duals[(2, 1)], tail)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if j == i + 2 or (j == i + 1 and i % 2 == 0):
                continue
            partner: Combination = {}
            k = 0
            while j + 2 * k <= n and i + 2 * k + 2 <= n:
                partner[BasisElement.e(j + 2 * k, i + 2 * k + 2)] = Fraction(1)
                k += 1
            if partner:
                r.add_wedge(_unit(i, j), partner)
    return r


def principal_element_n2(n: int) -> PrincipalElement:
    """diag(0, 1, -1, 0, -2, -1, -3, ...) + (n-1)(n-3)/(4n) I for P(n, 2), n odd."""
    if n < 3 or n % 2 == 0:
        raise RMatrixError(f"P(n,2) needs odd n >= 3, got {n}")
    values = []
    for index in range(1, n + 1):
        k = index // 2
        values.append(Fraction(-k) if index % 2 else Fraction(2 - k))
    shift = Fraction((n - 1) * (n - 3), 4 * n)
    return PrincipalElement(tuple(v + shift for v in values))


# --- CYBE ----------------------------------------------------------------

def _integer_scale(values: Iterable[Fraction]) -> int:
    scale = 1
    for value in values:
        scale = lcm(scale, value.denominator)
    return scale


def cybe_check(r: WedgeTwo, g: LieSupport) -> WedgeThree:
    """
    Components of [r12, r13] + [r12, r23] + [r13, r23] at index triples p < q < s.

    With R the skew coefficient matrix of r and T[x, y, z] = sum f^x_ac R^ay R^cz,
    the (p, q, s) component is T[p,q,s] + T[q,s,p] + T[s,p,q]. Zero output
    certifies the classical Yang-Baxter equation.
    """
    basis = g.basis
    index = {x: k for k, x in enumerate(basis)}
    scale = _integer_scale(r.terms.values())
    rows: Dict[int, Dict[int, int]] = {}
    for (a, b), c in r.terms.items():
        if a not in index or b not in index:
            raise RMatrixError(f"r has a term {a.label}∧{b.label} outside {g.describe()}")
        value = int(c * scale)
        rows.setdefault(index[a], {})[index[b]] = value
        rows.setdefault(index[b], {})[index[a]] = -value

    active = sorted(rows)
    t: Dict[Tuple[int, int, int], int] = {}
    for a in active:
        for c in active:
            if a == c:
                continue
            for element, coefficient in bracket(basis[a], basis[c], g.n).items():
                if element not in index:
                    raise RMatrixError(f"[{basis[a].label}, {basis[c].label}] leaves {g.describe()}")
                if coefficient.denominator != 1:
                    raise RMatrixError("Structure constants must be integers")
                x = index[element]
                f = int(coefficient)
                for y, r_ay in rows[a].items():
                    for z, r_cz in rows[c].items():
                        key = (x, y, z)
                        t[key] = t.get(key, 0) + f * r_ay * r_cz

    result = WedgeThree()
    candidates = {tuple(sorted(key)) for key in t if len(set(key)) == 3}
    for p, q, s in sorted(candidates):
        total = t.get((p, q, s), 0) + t.get((q, s, p), 0) + t.get((s, p, q), 0)
        if total:
            result.terms[(basis[p], basis[q], basis[s])] = Fraction(total, scale * scale)
    if result.terms:
        logger.debug(f"CYBE fails on {g.describe()} at {len(result.terms)} triples")
    return result


def r_matrix_for(support: Iterable[Sequence[int]], g: LieSupport) -> WedgeTwo:
    """r from the inverse of B_F for F = F_S on g."""
    return r_from_inverse(kirillov_matrix(g, Functional.from_support(support)))
