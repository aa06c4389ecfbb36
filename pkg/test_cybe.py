"""
Tests for r-matrices: the inverse, Lagrangian and peeling constructions,
the closed forms and the classical Yang-Baxter check.
"""

import sys
from fractions import Fraction
from math import gcd

import networkx as nx
import pytest

from frobenius_toolkit.algebra.cybe import (
    RMatrixError,
    WedgeTwo,
    closed_form_r_n1,
    closed_form_r_n2,
    coefficient_matrix,
    cybe_check,
    defining_property_holds,
    even_part_closed,
    format_wedge,
    lagrangian_split,
    peel_form_graph,
    principal_element_n2,
    r_from_inverse,
    r_from_lagrangian,
    r_from_peeling,
    r_matrix_for,
    split_is_lagrangian,
)
from frobenius_toolkit.algebra.functionals import cyclic_support, prime_support, principal_candidate
from frobenius_toolkit.algebra.sln import (
    BasisElement,
    Functional,
    custom_support,
    kirillov_matrix,
    parabolic_support,
)
from frobenius_toolkit.graphs.form_graph import FormGraph, FormVertex, build_form_graph
from frobenius_toolkit.graphs.matching import GraphStructureError
from frobenius_toolkit.linalg.rational_matrix import SingularMatrixError

E = BasisElement.e
EPS = BasisElement.eps


def _combo(*elements):
    return {x: Fraction(1) for x in elements}


def _cyclic(n, m):
    g = parabolic_support(n, m)
    S = cyclic_support(n, m).support
    return g, S, kirillov_matrix(g, Functional.from_support(S))


def _coprime_pairs(n_max):
    return [(n, m) for n in range(2, n_max + 1) for m in range(1, n) if gcd(n, m) == 1]


def _component_with(fg, vertex):
    return [k for k, c in enumerate(fg.components()) if vertex in c][0]


def test_p21():
    g = parabolic_support(2, 1)
    r = r_from_inverse(kirillov_matrix(g, Functional.from_support([(1, 2)])))
    assert r == WedgeTwo.wedge(_combo(EPS(1)), _combo(E(1, 2)))
    assert format_wedge(r) == "-e12∧ε1"


def test_wedge_is_antisymmetric():
    r = WedgeTwo()
    r.add(E(1, 2), E(2, 1), 3)
    r.add(E(2, 1), E(1, 2), 3)
    assert r.is_zero()
    r.add(EPS(1), EPS(1), 5)
    assert r.is_zero()
    assert WedgeTwo.from_json(closed_form_r_n1(4).to_json()) == closed_form_r_n1(4)


def test_r_4_3_matches_printed_formula():
    expected = (
        WedgeTwo.wedge(_combo(E(3, 2)), _combo(E(2, 1), E(3, 4)))
        + WedgeTwo.wedge(_combo(E(1, 3)), _combo(E(3, 4)))
        + WedgeTwo.wedge(_combo(EPS(2)), _combo(E(2, 3)))
        + WedgeTwo.wedge(_combo(EPS(2), EPS(3)), _combo(E(3, 1)))
        + WedgeTwo.wedge(_combo(EPS(1), EPS(2), EPS(3)), _combo(E(1, 4)))
        + WedgeTwo.wedge(_combo(E(1, 2)), _combo(E(2, 4)))
    )
    g, S, km = _cyclic(4, 3)
    assert r_from_inverse(km) == expected
    assert r_from_peeling(build_form_graph(g, S)) == expected
    assert defining_property_holds(expected, km)


def test_peeling_4_3_chain():
    g, S, _ = _cyclic(4, 3)
    fg = build_form_graph(g, S)
    result = peel_form_graph(fg)
    index = _component_with(fg, FormVertex.unit(3, 2))
    assert result.component_text(index) == "e32∧(e21+e34) + e13∧e34"
    first = [step for step in result.steps if step.leaf == FormVertex.unit(3, 4)][0]
    assert first.partner == FormVertex.unit(1, 3)
    assert first.updated == ((FormVertex.unit(2, 1), "e21", "(e21+e34)"),)


def test_peeling_7_3_root_component():
    g, S, _ = _cyclic(7, 3)
    fg = build_form_graph(g, S)
    result = peel_form_graph(fg)
    index = _component_with(fg, FormVertex.unit(3, 2))
    assert result.component_text(index) == (
        "(e32+e65)∧(e21+e34+e54+e67) + e26∧e65 + e15∧e54 + e13∧(e34+e67) + e46∧e67"
    )
    assert len(result.links) == 18
    print("✓ Γ(7,3) root component peels to its five links")


def test_constructions_agree_on_cyclic_functionals():
    for n, m in _coprime_pairs(8):
        g, S, km = _cyclic(n, m)
        r = r_from_inverse(km)
        assert defining_property_holds(r, km), (n, m)
        assert r_matrix_for(S, g) == r, (n, m)
        assert r_from_peeling(build_form_graph(g, S)) == r, (n, m)
        split = lagrangian_split(g, principal_candidate(n, S), Functional.from_support(S))
        assert r_from_lagrangian(split) == r, (n, m)


def test_lagrangian_split_7_3():
    g, S, km = _cyclic(7, 3)
    d = principal_candidate(7, S)
    split = lagrangian_split(g, d, Functional.from_support(S))
    assert len(split.even) == len(split.odd) == 18
    assert sum(split.blocks.values()) == 18
    assert split_is_lagrangian(split, km)
    assert even_part_closed(g, d)


def test_coefficient_matrix_is_skew():
    _, _, km = _cyclic(5, 2)
    matrix = coefficient_matrix(r_from_inverse(km), km.basis)
    assert matrix.is_skew_symmetric()
    assert not defining_property_holds(r_from_inverse(km).scale(2), km)


def test_inverse_of_singular_form():
    g = parabolic_support(4, 2)
    with pytest.raises(SingularMatrixError):
        r_from_inverse(kirillov_matrix(g, Functional.from_support([(1, 2), (3, 4)])))


def test_cybe_holds_for_frobenius_functionals():
    for n, m in _coprime_pairs(8):
        g, _, km = _cyclic(n, m)
        assert cybe_check(r_from_inverse(km), g).is_zero(), (n, m)
    g = parabolic_support(6, 1)
    assert cybe_check(closed_form_r_n1(6), g).is_zero()


def test_cybe_fails_for_sl2_casimir_part():
    g = custom_support(2, [(1, 2), (2, 1)])
    r = WedgeTwo.wedge(_combo(E(1, 2)), _combo(E(2, 1)))
    failure = cybe_check(r, g)
    assert not failure.is_zero()
    assert failure.terms == {(E(1, 2), E(2, 1), EPS(1)): Fraction(2)}


def test_closed_form_n1():
    for n in range(2, 10):
        g = parabolic_support(n, 1)
        km = kirillov_matrix(g, Functional.from_support(prime_support(n)))
        assert closed_form_r_n1(n) == r_from_inverse(km), n
    assert format_wedge(closed_form_r_n1(2)) == "-e12∧ε1"


def test_closed_form_n2():
    for n in (3, 5, 7, 9):
        _, _, km = _cyclic(n, 2)
        assert closed_form_r_n2(n) == r_from_inverse(km), n
    with pytest.raises(RMatrixError):
        closed_form_r_n2(4)


def test_principal_element_n2():
    d = principal_element_n2(5)
    assert d.diagonal == tuple(Fraction(v) + Fraction(2, 5) for v in (0, 1, -1, 0, -2))
    for n in (3, 5, 7, 9):
        assert principal_element_n2(n) == principal_candidate(n, cyclic_support(n, 2).support), n


def test_peeling_rejects_cycles():
    graph = nx.DiGraph()
    units = [FormVertex.unit(1, 2), FormVertex.unit(2, 3), FormVertex.unit(1, 3)]
    graph.add_edges_from([(units[0], units[1]), (units[1], units[2]), (units[2], units[0])])
    fake = FormGraph(parabolic_support(3, 1), frozenset(prime_support(3)), graph)
    with pytest.raises(GraphStructureError):
        peel_form_graph(fake)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
