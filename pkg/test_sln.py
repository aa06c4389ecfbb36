"""
Tests for sl(n) supports, the bracket and the Kirillov form.
"""

import sys
from fractions import Fraction
from itertools import combinations

import pytest

from frobenius_toolkit.algebra.sln import (
    BasisElement,
    Functional,
    LieSupport,
    SupportError,
    algebra_index_estimate,
    bracket,
    bracket_closed,
    custom_support,
    diagonal_to_eps,
    eps_to_diagonal,
    is_frobenius,
    kirillov_matrix,
    parabolic_support,
    seaweed_support,
)
from frobenius_toolkit.linalg.rational_matrix import RationalMatrix


def test_parabolic_dimensions():
    assert parabolic_support(7, 3).dimension == 36
    assert parabolic_support(4, 1).dimension == 12
    assert parabolic_support(2, 1).dimension == 2
    for n in range(2, 13):
        for m in range(1, n):
            assert parabolic_support(n, m).dimension == n * n - m * (n - m) - 1
    print("✓ parabolic dimensions")


def test_parabolic_excludes_lower_left_block():
    g = parabolic_support(5, 2)
    assert g.contains(2, 1)
    assert g.contains(5, 3)
    assert not g.contains(3, 1)
    assert not g.contains(5, 2)
    assert g.describe() == "P(5,2)"


def test_basis_order_and_labels():
    g = parabolic_support(2, 1)
    assert g.basis == (BasisElement.e(1, 2), BasisElement.eps(1))
    assert [x.label for x in g.basis] == ["e12", "ε1"]
    assert BasisElement.e(1, 10).label == "e1,10"


def test_bracket_of_matrix_units():
    e = BasisElement.e
    assert bracket(e(1, 2), e(2, 3), 3) == {e(1, 3): 1}
    assert bracket(e(2, 3), e(1, 2), 3) == {e(1, 3): -1}
    assert bracket(e(1, 2), e(3, 4), 4) == {}
    assert bracket(e(1, 2), e(2, 1), 2) == {BasisElement.eps(1): 2}
    assert bracket(e(1, 2), e(2, 1), 3) == {BasisElement.eps(1): 1, BasisElement.eps(2): -1}


def test_bracket_with_cartan():
    e, eps = BasisElement.e, BasisElement.eps
    assert bracket(eps(1), e(1, 2), 3) == {e(1, 2): 1}
    assert bracket(eps(2), e(1, 2), 3) == {e(1, 2): -1}
    assert bracket(e(1, 2), eps(1), 3) == {e(1, 2): -1}
    assert bracket(eps(1), eps(2), 3) == {}


def test_diagonal_eps_conversion():
    diagonal = (Fraction(2), Fraction(-1), Fraction(-1))
    combination = diagonal_to_eps(diagonal)
    assert combination == {BasisElement.eps(1): 3}
    assert eps_to_diagonal({1: 3}, 3) == diagonal


def test_kirillov_matrix_of_p21():
    g = parabolic_support(2, 1)
    km = kirillov_matrix(g, Functional.from_support([(1, 2)]))
    assert km.matrix == RationalMatrix.from_rows([[0, -1], [1, 0]])
    assert km.value(BasisElement.eps(1), BasisElement.e(1, 2)) == 1
    certificate = is_frobenius(g, Functional.from_support([(1, 2)]))
    assert certificate.frobenius
    assert certificate.kernel_dimension == 0


def test_kirillov_matrix_is_skew():
    g = parabolic_support(5, 2)
    km = kirillov_matrix(g, Functional.from_support([(2, 1), (1, 3), (2, 4), (3, 5)]))
    assert km.matrix.is_skew_symmetric()


def test_functional_outside_support_is_rejected():
    with pytest.raises(SupportError):
        kirillov_matrix(parabolic_support(3, 1), Functional.from_support([(2, 1)]))


def test_cyclic_functional_on_p52_is_frobenius():
    g = parabolic_support(5, 2)
    certificate = is_frobenius(g, Functional.from_support([(2, 1), (1, 3), (2, 4), (3, 5)]))
    assert certificate.frobenius
    assert certificate.rank == g.dimension


def test_sl2_is_not_frobenius():
    g = custom_support(2, [(1, 2), (2, 1)])
    certificate = is_frobenius(g, Functional.from_support([(1, 2)]))
    assert not certificate.frobenius
    assert certificate.kernel_dimension == 1


def test_index_estimates():
    assert algebra_index_estimate(parabolic_support(4, 2), samples=10, seed=0) == 1
    assert algebra_index_estimate(custom_support(2, []), samples=3, seed=0) == 1
    assert algebra_index_estimate(parabolic_support(5, 2), samples=5, seed=1) == 0


def test_small_supports_are_never_frobenius():
    for n in range(2, 6):
        for m in range(1, n):
            g = parabolic_support(n, m)
            for size in range(n - 1):
                for support in combinations(g.offdiagonal, size):
                    certificate = is_frobenius(g, Functional.from_support(support))
                    assert not certificate.frobenius, (n, m, support)
                    assert certificate.kernel_dimension >= n - 1 - size


def test_seaweed_support():
    g = seaweed_support([2, 2], [1, 3])
    assert g.kind == "seaweed"
    assert g.pairs == {(1, 2), (3, 4), (3, 2), (4, 2), (4, 3)}
    assert seaweed_support([4], [1, 3]) == parabolic_support(4, 1)
    with pytest.raises(SupportError):
        seaweed_support([2, 2], [1, 2])


def test_custom_support_validation():
    with pytest.raises(SupportError):
        custom_support(3, [(1, 2), (2, 3)])
    with pytest.raises(SupportError):
        custom_support(3, [(1, 4)])
    with pytest.raises(SupportError):
        custom_support(1, [])
    with pytest.raises(SupportError):
        custom_support(3, [(1, 2)], has_cartan=False)


def test_bracket_closed():
    assert bracket_closed(parabolic_support(6, 2))
    assert bracket_closed(seaweed_support([3, 1], [1, 3]))
    assert bracket_closed(custom_support(3, [(1, 2), (2, 3), (1, 3)]))


def test_json_round_trip():
    for g in (parabolic_support(6, 4), seaweed_support([2, 3], [4, 1]), custom_support(3, [(1, 3)])):
        assert LieSupport.from_json(g.to_json()) == g
    f = Functional({(1, 2): Fraction(1, 3), (2, 2): Fraction(-2)})
    assert Functional.from_json(f.to_json()) == f
    assert BasisElement.from_json(["eps", 2]) == BasisElement.eps(2)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
