"""
Tests for the functional families, dual bases, principal elements and meanders.
"""

import random
import sys
from fractions import Fraction
from math import gcd

import pytest

from frobenius_toolkit.algebra.functionals import (
    FunctionalFamilyError,
    PrincipalElement,
    ReductionStep,
    antidiagonal_flip,
    check_principal,
    cyclic_reduction_chain,
    cyclic_root,
    cyclic_sequence,
    cyclic_support,
    cyclic_support_recursive,
    dk_support,
    dual_basis,
    dual_basis_determinant,
    eigenvalue_census,
    eigenvalue_on,
    eigenvalue_symmetry_holds,
    family_support,
    gamma_graph,
    is_rooted_tree,
    is_unbroken_string,
    meander_census,
    meander_index,
    prime_support,
    principal_candidate,
    subprime_support,
    support_matrix_rank,
    trace_identity_holds,
    upper_triangular_support,
)
from frobenius_toolkit.algebra.sln import (
    Functional,
    algebra_index_estimate,
    is_frobenius,
    parabolic_support,
    seaweed_support,
)

CYCLIC_7_3 = {(1, 4), (2, 3), (2, 5), (3, 1), (3, 6), (4, 7)}
DK_7_3 = {(1, 7), (2, 6), (3, 5), (3, 1), (7, 4), (6, 5)}


def _coprime_pairs(n_max):
    return [(n, m) for n in range(2, n_max + 1) for m in range(1, n) if gcd(n, m) == 1]


def test_cyclic_sequence():
    assert cyclic_sequence(7, 3) == [1, 4, 7, 3, 6, 2, 5]
    assert cyclic_sequence(5, 2) == [1, 3, 5, 2, 4]


def test_cyclic_13_5_trace():
    support, trace = cyclic_support(13, 5)
    assert trace[0].strings == ((1, 6, 11), (3, 8, 13), (5, 10), (2, 7, 12), (4, 9))
    assert trace[1].direction == "descending"
    assert trace[1].strings == ((1, 3, 5), (2, 4))
    assert trace[2].arcs == ((4, 5),)
    assert len(support) == 12
    print("✓ (13,5) construction log matches the worked example")


def test_cyclic_anchors():
    assert cyclic_support(7, 3).support == CYCLIC_7_3
    assert cyclic_support(5, 2).support == {(1, 3), (3, 5), (2, 4), (2, 1)}
    assert cyclic_support(5, 3).support == {(3, 2), (2, 1), (1, 4), (2, 5)}
    assert cyclic_support(3, 2).support == {(1, 3), (2, 1)}
    assert cyclic_support(2, 1).support == {(1, 2)}


def test_cyclic_requires_coprime():
    with pytest.raises(FunctionalFamilyError):
        cyclic_support(6, 4)
    with pytest.raises(FunctionalFamilyError):
        cyclic_support(4, 4)


def test_cyclic_matches_recursion():
    for n, m in _coprime_pairs(12):
        assert cyclic_support(n, m).support == cyclic_support_recursive(n, m), (n, m)


def test_cyclic_is_rooted_tree():
    for n, m in _coprime_pairs(12):
        check = is_rooted_tree(gamma_graph(n, cyclic_support(n, m).support))
        assert check.rooted, (n, m)


def test_cyclic_roots():
    assert cyclic_root(7, 3) == 2
    assert cyclic_root(5, 2) == 2
    assert cyclic_root(5, 3) == 3
    assert cyclic_root(17, 6) == 6
    graph = gamma_graph(5, cyclic_support(5, 3).support)
    assert sum(1 for i, _ in graph.arcs if i == 3) == 1


def test_reduction_chain():
    assert cyclic_reduction_chain(7, 3) == [
        ReductionStep(4, 3, "stable"),
        ReductionStep(3, 2, "unstable"),
        ReductionStep(2, 1, "unstable"),
    ]
    assert cyclic_reduction_chain(2, 1) == []


def test_cyclic_functionals_are_frobenius():
    for n, m in _coprime_pairs(10):
        certificate = is_frobenius(parabolic_support(n, m), Functional.from_support(cyclic_support(n, m).support))
        assert certificate.frobenius, (n, m)


def test_prime_and_subprime():
    assert prime_support(4) == {(1, 2), (2, 3), (3, 4)}
    assert subprime_support(5, 3) == {(1, 4), (2, 5), (2, 1), (3, 2)}
    with pytest.raises(FunctionalFamilyError):
        subprime_support(5, 1)
    for n in range(2, 8):
        assert is_frobenius(parabolic_support(n, 1), Functional.from_support(prime_support(n))).frobenius


def test_upper_triangular_12_5():
    support, trace = upper_triangular_support(12, 5)
    assert support == {
        (3, 8), (4, 9), (5, 10), (6, 11), (7, 12),
        (1, 3), (2, 4), (3, 5), (4, 6), (6, 7), (5, 6),
    }
    assert trace[0].direction == "forward"
    assert trace[1].direction == "backward"
    assert trace[-1].pairs == ((5, 6),)
    assert is_frobenius(parabolic_support(12, 7), Functional.from_support(support)).frobenius
    moved = family_support("upper", 12, 5)
    assert moved == antidiagonal_flip(12, support)
    assert is_frobenius(parabolic_support(12, 5), Functional.from_support(moved)).frobenius


def test_upper_triangular_is_frobenius_on_both_parabolics():
    for n, m in _coprime_pairs(10):
        support = upper_triangular_support(n, m).support
        assert is_frobenius(parabolic_support(n, n - m), Functional.from_support(support)).frobenius, (n, m)
        moved = family_support("upper", n, m)
        assert all(i < j for i, j in moved)
        assert is_frobenius(parabolic_support(n, m), Functional.from_support(moved)).frobenius, (n, m)


def test_upper_triangular_chain_cases():
    for n in range(2, 9):
        assert upper_triangular_support(n, 1).support == prime_support(n)
        assert upper_triangular_support(n, n - 1).support == prime_support(n)
        assert family_support("upper", n, 1) == prime_support(n)


def test_upper_triangular_shape():
    assert upper_triangular_support(5, 2).support == {(2, 4), (3, 5), (1, 2), (2, 3)}
    assert upper_triangular_support(5, 3).support == {(1, 3), (2, 4), (4, 5), (3, 4)}
    for n, m in _coprime_pairs(9):
        support, trace = upper_triangular_support(n, m)
        assert len(support) == n - 1
        assert all(i < j for i, j in support)
        assert trace[-1].pairs == ((m, m + 1),)


def test_dk_support():
    assert dk_support(parabolic_support(7, 3)) == DK_7_3
    assert dk_support(parabolic_support(4, 1)) == {(1, 4), (2, 3), (4, 2)}
    assert antidiagonal_flip(7, DK_7_3) == dk_support(parabolic_support(7, 4))


def test_family_support_dispatch():
    assert family_support("cyclic", 7, 3) == CYCLIC_7_3
    assert family_support("dk", 7, 3) == DK_7_3
    with pytest.raises(FunctionalFamilyError):
        family_support("spiral", 7, 3)


def test_support_matrix_rank():
    assert support_matrix_rank(5, prime_support(5)) == 4
    assert support_matrix_rank(3, {(1, 2), (1, 3)}) == 1


def test_gamma_graph_checks():
    assert is_rooted_tree(gamma_graph(1, [])) == (True, 1)
    assert not is_rooted_tree(gamma_graph(3, [(1, 2), (3, 2)])).rooted
    assert not is_rooted_tree(gamma_graph(3, [(1, 2), (2, 1)])).rooted
    with pytest.raises(FunctionalFamilyError):
        gamma_graph(3, [(1, 4)])


def test_dual_basis_examples():
    duals = {d.s: d.coefficients for d in dual_basis(3, [(1, 3), (2, 1)])}
    assert duals[(1, 3)] == {1: 1, 2: 1}
    assert duals[(2, 1)] == {2: 1}

    for d in dual_basis(6, prime_support(6)):
        assert d.coefficients == {k: 1 for k in range(1, d.s.i + 1)}

    for n in (5, 7, 9):
        duals = {d.s: d.coefficients for d in dual_basis(n, cyclic_support(n, 2).support)}
        assert duals[(2, 1)] == {k: 1 for k in range(2, n, 2)}


def test_dual_basis_needs_tree():
    with pytest.raises(FunctionalFamilyError):
        dual_basis(4, [(1, 2), (2, 1), (3, 4)])


def test_dual_basis_determinant_is_unit():
    for n, m in _coprime_pairs(9):
        assert abs(dual_basis_determinant(n, cyclic_support(n, m).support)) == 1


def test_principal_element_text():
    cyclic = principal_candidate(7, CYCLIC_7_3)
    assert cyclic.integer_form() == ((2, 4, 3, 1, 3, 2, 0), Fraction(15, 7))
    assert cyclic.format_text() == "diag(2,4,3,1,3,2,0) - 15/7*I"
    dk = principal_candidate(7, DK_7_3)
    assert dk.format_text() == "diag(1,3,2,-1,1,2,0) - 8/7*I"
    assert PrincipalElement.from_json(dk.to_json()) == dk


def test_principal_element_of_p21():
    d = principal_candidate(2, [(1, 2)])
    assert d.diagonal == (Fraction(1, 2), Fraction(-1, 2))


def test_principal_element_properties():
    for n, m in _coprime_pairs(10):
        g = parabolic_support(n, m)
        support = cyclic_support(n, m).support
        d = principal_candidate(n, support)
        assert check_principal(g, support, d), (n, m)
        census = eigenvalue_census(g, d)
        assert trace_identity_holds(g, census)
        assert eigenvalue_symmetry_holds(census)
        assert is_unbroken_string(census)


def test_trace_identity_for_7_3():
    g = parabolic_support(7, 3)
    census = eigenvalue_census(g, principal_candidate(7, CYCLIC_7_3))
    assert sum(value * count for value, count in census.items()) == 18


def test_cyclic_and_dk_spectra_agree_on_7_3():
    g = parabolic_support(7, 3)
    cyclic = eigenvalue_census(g, principal_candidate(7, CYCLIC_7_3))
    dk = eigenvalue_census(g, principal_candidate(7, DK_7_3))
    assert cyclic == dk
    assert cyclic[0] == 8 and cyclic[4] == 1 and cyclic[-3] == 1


def test_principal_check_fails_for_wrong_element():
    g = parabolic_support(3, 2)
    wrong = PrincipalElement((Fraction(1), Fraction(0), Fraction(-1)))
    assert not check_principal(g, [(1, 3), (2, 1)], wrong)


def test_eigenvalue_path_rule():
    graph = gamma_graph(7, CYCLIC_7_3)
    d = principal_candidate(7, CYCLIC_7_3)
    for i in range(1, 8):
        for j in range(1, 8):
            if i != j:
                assert eigenvalue_on(graph, (i, j)) == d.eigenvalue(i, j)
    assert eigenvalue_on(graph, (3, 2)) == -1


def test_meander_index():
    for n, m in _coprime_pairs(10):
        assert meander_index(parabolic_support(n, m)) == 0
    assert meander_index(parabolic_support(4, 2)) == 1
    assert meander_index(parabolic_support(6, 4)) == 1
    assert meander_index(seaweed_support([1, 1], [1, 1])) == 1
    assert meander_census(seaweed_support([1, 1], [1, 1])).isolated == 2
    assert meander_index(seaweed_support([2], [2])) == 1
    assert meander_index(seaweed_support([3], [3])) == 2


def _random_composition(n, rng):
    cuts = sorted(rng.sample(range(1, n), rng.randint(0, n - 1)))
    bounds = [0] + cuts + [n]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def test_meander_index_matches_sampled_index():
    rng = random.Random(11)
    for trial in range(50):
        n = rng.randint(2, 8)
        g = seaweed_support(_random_composition(n, rng), _random_composition(n, rng))
        assert meander_index(g) == algebra_index_estimate(g, samples=6, seed=trial), g.describe()


def test_meander_rejects_custom():
    from frobenius_toolkit.algebra.sln import custom_support

    with pytest.raises(FunctionalFamilyError):
        meander_index(custom_support(3, [(1, 2)]))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
