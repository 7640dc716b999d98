"""Pairing, power recurrence, and anchor tables."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from monothetic import (
    CappedLInf,
    CappedWeightedL1,
    DomainError,
    ExtElement,
    GroupDescriptor,
    build_anchor_table,
    check_table_consistency,
    k_sequence,
    pair_index,
    partial_norm_lookup,
    unpair_index,
)

Z = GroupDescriptor(free_rank=1)


def antidiagonal_oracle(count):
    """Independent enumeration of positive pairs by anti-diagonals."""
    pairs = []
    total = 2
    while len(pairs) < count:
        for m in range(1, total):
            pairs.append((m, total - m))
        total += 1
    return pairs[:count]


class TestPairing:
    def test_first_pairs(self):
        assert pair_index(1) == (1, 1)
        assert pair_index(2) == (1, 2)
        assert pair_index(3) == (2, 1)
        assert pair_index(5) == (2, 2)

    def test_matches_oracle(self):
        oracle = antidiagonal_oracle(500)
        assert [pair_index(n) for n in range(1, 501)] == oracle

    def test_unpair_closed_form(self):
        assert unpair_index(1, 1) == 1
        assert unpair_index(2, 2) == 5
        assert unpair_index(5, 5) == 41

    @given(st.integers(1, 50), st.integers(1, 50))
    def test_roundtrip(self, m, j):
        assert pair_index(unpair_index(m, j)) == (m, j)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            pair_index(0)
        with pytest.raises(DomainError):
            unpair_index(0, 1)


def recurrence_oracle(length):
    """Power sequence recomputed from scratch with an explicit running max."""
    powers = [1]
    for n in range(2, length + 1):
        biggest = max(pair_index(i)[1] for i in range(1, n))
        assert Fraction(1, biggest) <= 1
        powers.append(powers[-1] * biggest + 1)
    return powers


class TestPowerSequence:
    def test_base_case(self):
        powers, deltas = k_sequence(1)
        assert powers == (1,)
        assert deltas == (Fraction(1),)

    def test_known_prefix(self):
        powers, _ = k_sequence(6)
        assert powers == (1, 2, 5, 11, 34, 103)

    def test_matches_recurrence_oracle(self):
        powers, _ = k_sequence(80)
        assert list(powers) == recurrence_oracle(80)

    def test_prefix_stability(self):
        long_powers, long_deltas = k_sequence(30)
        short_powers, short_deltas = k_sequence(12)
        assert long_powers[:12] == short_powers
        assert long_deltas[:12] == short_deltas

    def test_growth_law(self):
        powers, deltas = k_sequence(200)
        for n in range(2, 201):
            biggest = max(pair_index(i)[1] for i in range(1, n))
            assert powers[n - 1] > powers[n - 2] * biggest
            assert powers[n - 1] > powers[n - 2]
            assert deltas[n - 1] == Fraction(1, biggest)

    def test_deltas_non_increasing(self):
        _, deltas = k_sequence(60)
        assert all(a >= b for a, b in zip(deltas, deltas[1:]))

    def test_domain_error(self):
        with pytest.raises(DomainError):
            k_sequence(0)


class TestBuildTable:
    def test_anchor_examples(self, unit_table):
        first = unit_table.anchor(1)
        assert (first.power, first.target.free, first.value) == (1, (0,), Fraction(1))
        second = unit_table.anchor(2)
        assert (second.power, second.target.free, second.value) == (2, (0,), Fraction(1, 2))
        fifth = unit_table.anchor(5)
        assert (fifth.power, fifth.target.free, fifth.value) == (34, (1,), Fraction(1, 2))

    def test_deterministic(self):
        spec = CappedWeightedL1(weights=(Fraction(1),))
        assert build_anchor_table(Z, spec, 20) == build_anchor_table(Z, spec, 20)

    def test_powers_independent_of_norm(self):
        a = build_anchor_table(Z, CappedWeightedL1(weights=(Fraction(1),)), 25)
        b = build_anchor_table(Z, CappedLInf(scale=Fraction(5)), 25)
        assert a.powers == b.powers
        assert a.deltas == b.deltas

    def test_validation_propagates(self):
        with pytest.raises(Exception):
            build_anchor_table(Z, CappedWeightedL1(weights=(Fraction(-1),)), 5)
        with pytest.raises(DomainError):
            build_anchor_table(Z, CappedWeightedL1(weights=(Fraction(1),)), 0)

    def test_finite_group_targets_wrap(self):
        from monothetic import CyclicScaled

        table = build_anchor_table(GroupDescriptor(0, (3,)), CyclicScaled(), 12)
        # Target demands beyond the group order wrap back onto it.
        assert {a.target.torsion[0] for a in table.anchors} <= {0, 1, 2}
        assert table.anchor(4).target == table.anchor(1).target


class TestPartialNormLookup:
    def test_base_group_restriction(self, unit_table):
        x = ExtElement(Z.element((3,)), 0)
        assert partial_norm_lookup(unit_table, x) == Fraction(1)

    def test_anchor_hit(self, unit_table):
        assert partial_norm_lookup(unit_table, ExtElement(Z.zero(), 2)) == Fraction(1, 2)

    def test_miss(self, unit_table):
        assert partial_norm_lookup(unit_table, ExtElement(Z.zero(), 3)) is None
        # Right power, wrong base-group part.
        assert partial_norm_lookup(unit_table, ExtElement(Z.element((1,)), 2)) is None

    def test_symmetry(self, unit_table):
        for n in range(1, unit_table.depth + 1):
            x = unit_table.anchor_element(n)
            assert partial_norm_lookup(unit_table, x) == partial_norm_lookup(unit_table, -x)


class TestConsistencyCheck:
    def test_clean(self, unit_table):
        assert check_table_consistency(unit_table) == []

    def test_detects_tampered_power(self, unit_table):
        from dataclasses import replace

        from monothetic import AnchorTable

        anchors = list(unit_table.anchors)
        anchors[2] = replace(anchors[2], power=3)
        bad = AnchorTable(unit_table.descriptor, unit_table.spec, tuple(anchors), unit_table.deltas)
        problems = check_table_consistency(bad)
        assert any("power" in p for p in problems)
