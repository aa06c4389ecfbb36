"""
Tests for admissible triples, root progressions and degenerations.
"""

import sys
from itertools import combinations
from math import gcd

import pytest

from frobenius_toolkit.algebra.functionals import FunctionalFamilyError, cyclic_support, principal_candidate
from frobenius_toolkit.algebra.mcybe import (
    AdmissibleTriple,
    DegenerationError,
    degeneration_limit,
    find_separating_h,
    maximal_triple,
    root_progression,
    t_chain,
    triple_precedes,
    validate_triple,
)


def _coprime_pairs(n_max):
    return [(n, m) for n in range(2, n_max + 1) for m in range(1, n) if gcd(n, m) == 1]


def test_maximal_triple_5_2():
    triple = maximal_triple(5, 2)
    assert triple.s1 == {1, 2, 4}
    assert triple.s2 == {1, 3, 4}
    assert triple.mapping == {1: 3, 2: 4, 4: 1}
    assert validate_triple(triple).valid


def test_maximal_triple_chain_8_5():
    assert t_chain(maximal_triple(8, 5)) == [5, 2, 7, 4, 1, 6, 3]


def test_maximal_triple_2_1_is_empty():
    triple = maximal_triple(2, 1)
    assert triple.s1 == frozenset() and triple.s2 == frozenset()
    assert t_chain(triple) == [1]


def test_maximal_triples_are_admissible():
    for n, m in _coprime_pairs(12):
        triple = maximal_triple(n, m)
        assert validate_triple(triple).valid, (n, m)
        assert len(triple.s1) == n - 2
        chain = t_chain(triple)
        assert sorted(chain) == list(range(1, n))
    with pytest.raises(FunctionalFamilyError):
        maximal_triple(6, 4)


def test_invalid_triples():
    identity = AdmissibleTriple.from_mapping(3, {1: 1})
    report = validate_triple(identity)
    assert not report.valid
    assert any("never leaves" in v for v in report.violations)
    assert validate_triple(AdmissibleTriple.from_mapping(5, {})).valid
    broken = AdmissibleTriple.from_mapping(5, {1: 2, 2: 4})
    assert not validate_triple(broken).valid


def test_triple_order():
    big = maximal_triple(5, 2)
    assert triple_precedes(AdmissibleTriple.from_mapping(5, {}), big)
    assert triple_precedes(big.restrict({1, 2}), big)
    assert not triple_precedes(big, maximal_triple(5, 3))
    assert not triple_precedes(big, big.restrict({1, 2}))


def test_progressions():
    p52 = root_progression(5, 2)
    assert p52.order == (1, 3, 2, 4)
    assert p52.format_text() == "1 -> 3 -> 2 -> 4"
    assert p52.direction == 1
    p85 = root_progression(8, 5)
    assert p85.order == (5, 2, 7, 4, 1, 6, 3)
    assert p85.direction == -1


def test_degeneration_with_principal_elements():
    p52 = root_progression(5, 2)
    result = degeneration_limit(p52, _principal(5, 2))
    assert result.removed == ((3, 2),)
    assert triple_precedes(result.as_triple(), p52.as_triple())

    p85 = root_progression(8, 5)
    result = degeneration_limit(p85, _principal(8, 5))
    assert set(result.removed) == {(5, 2), (4, 1)}
    assert {(7, 4), (6, 3)} <= set(result.kept)


def _principal(n, m):
    return principal_candidate(n, cyclic_support(n, m).support)


def test_zero_h_keeps_everything():
    p = root_progression(8, 5)
    result = degeneration_limit(p, [0] * 8)
    assert result.removed == ()
    assert result.kept == p.mapped_pairs


def test_divergent_direction_is_reported():
    p = root_progression(5, 2)
    with pytest.raises(DegenerationError):
        degeneration_limit(p, [2, 0, 0, 0, 0])


def test_separating_h_round_trip():
    for n, m in [(5, 2), (8, 5)]:
        p = root_progression(n, m)
        pairs = p.mapped_pairs
        for size in range(len(pairs) + 1):
            for keep in combinations(pairs, size):
                h = find_separating_h(p, keep)
                assert all(isinstance(v, int) for v in h)
                assert degeneration_limit(p, h).kept == tuple(pair for pair in pairs if pair in keep)
    with pytest.raises(DegenerationError):
        find_separating_h(root_progression(5, 2), [(1, 2)])


def test_separating_h_for_every_keep_set():
    covered = set()
    for n, m in _coprime_pairs(8):
        try:
            p = root_progression(n, m)
        except DegenerationError:
            continue
        pairs = p.mapped_pairs
        for size in range(len(pairs) + 1):
            for keep in combinations(pairs, size):
                result = degeneration_limit(p, find_separating_h(p, keep))
                assert set(result.kept) == set(keep), (n, m, keep)
                assert set(result.removed) == set(pairs) - set(keep)
        covered.add((n, m))
    assert {(5, 2), (7, 3), (8, 5)} <= covered


def test_triple_json():
    triple = maximal_triple(7, 3)
    assert AdmissibleTriple.from_json(triple.to_json()) == triple


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
