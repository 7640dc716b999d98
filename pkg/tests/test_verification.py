"""Property suites: pass on honest tables, fail on tampered ones."""

from dataclasses import replace
from fractions import Fraction

import pytest

from monothetic import (
    AnchorTable,
    CyclicScaled,
    ExtendTableError,
    GroupDescriptor,
    RationalRotation,
    build_anchor_table,
    verify_density,
    verify_extension,
    verify_norm_axioms,
    verify_truncation,
)
from monothetic.serialize import suite_report_to_json
from monothetic.verification import sample_elements, sample_pairs

Z = GroupDescriptor(free_rank=1)
Z6 = GroupDescriptor(free_rank=0, torsion_moduli=(6,))


def tamper_powers(table, replacements):
    """Test fixture: rewrite anchor powers, keeping everything else."""
    anchors = list(table.anchors)
    for index, power in replacements.items():
        anchors[index - 1] = replace(anchors[index - 1], power=power)
    return AnchorTable(table.descriptor, table.spec, tuple(anchors), table.deltas)


class TestSamplers:
    def test_single_deterministic(self):
        a = sample_elements(Z, 40, seed=9)
        b = sample_elements(Z, 40, seed=9)
        assert a == b
        assert a != sample_elements(Z, 40, seed=10)

    def test_single_power_range(self):
        for x in sample_elements(Z, 100, seed=3):
            assert -5 <= x.k <= 5

    def test_pairs_cover_power_combinations(self):
        pairs = sample_pairs(Z, 500, seed=42, k_range=3)
        combos = {(x.k, y.k) for x, y in pairs}
        assert len(combos) == 49

    def test_finite_group_covers_all_representatives(self):
        seen = {x.h for x in sample_elements(Z6, 100, seed=5)}
        assert len(seen) == 6


class TestExtensionSuite:
    def test_passes(self, quarter_table):
        report = verify_extension(quarter_table, 200, seed=42)
        assert report.passed
        assert report.samples == 200

    def test_pseudonorm_vanishing_accepted(self):
        table = build_anchor_table(Z, RationalRotation(alpha=Fraction(1, 3)), 10)
        report = verify_extension(table, 100, seed=42)
        assert report.passed

    def test_deterministic_reports(self, quarter_table):
        a = verify_extension(quarter_table, 50, seed=1)
        b = verify_extension(quarter_table, 50, seed=1)
        assert suite_report_to_json(a) == suite_report_to_json(b)

    def test_sharded_run_matches_inline(self, quarter_table):
        inline = verify_extension(quarter_table, 60, seed=4, workers=1)
        sharded = verify_extension(quarter_table, 60, seed=4, workers=3)
        assert suite_report_to_json(inline) == suite_report_to_json(sharded)


class TestAxiomSuite:
    def test_passes_on_two_norms(self, quarter_table, linf_table):
        for table in (quarter_table, linf_table):
            report = verify_norm_axioms(table, 300, seed=42, k_range=3)
            assert report.passed, report.violations[:3]

    def test_literal_lowered_power_fixture_fails(self, unit_table):
        # Lowering the third power violates the growth recurrence; the suite's
        # structural cross-check must reject the table.
        bad = tamper_powers(unit_table, {3: 3})
        report = verify_norm_axioms(bad, 100, seed=42)
        assert not report.passed
        assert any(v.check == "table-invariant" for v in report.violations)

    def test_semantic_fixture_breaks_triangle(self, unit_table):
        # Collapsing two mid-table powers onto the generator itself prices
        # cheap shortcuts through the anchors and the sampled triangle
        # casework catches the resulting inconsistency.
        bad = tamper_powers(unit_table, {4: 1, 5: 1})
        report = verify_norm_axioms(bad, 500, seed=42, k_range=3)
        assert not report.passed
        triangle = [v for v in report.violations if v.check == "triangle"]
        assert triangle, [v.check for v in report.violations]

    def test_violations_sorted_by_sample(self, unit_table):
        bad = tamper_powers(unit_table, {3: 3, 4: 1, 5: 1})
        report = verify_norm_axioms(bad, 500, seed=42, k_range=3)
        indices = [v.sample_index for v in report.violations]
        assert indices == sorted(indices)

    def test_zero_checked(self, quarter_table):
        report = verify_norm_axioms(quarter_table, 10, seed=0)
        assert report.passed


class TestDensitySuite:
    def test_passes(self, quarter_table):
        report = verify_density(quarter_table, 5, 5)
        assert report.passed
        assert report.samples == 25

    def test_rank_two(self, lattice_table):
        report = verify_density(lattice_table, 3, 3)
        assert report.passed

    def test_precision_one_vacuous(self, quarter_table):
        report = verify_density(quarter_table, 3, 1)
        assert report.passed

    def test_shallow_table_rejected(self, unit_table):
        with pytest.raises(ExtendTableError) as err:
            verify_density(unit_table, 5, 5)
        assert err.value.required_depth == 41


class TestTruncationSuite:
    def test_passes(self, quarter_table):
        report = verify_truncation(quarter_table, 60, seed=42)
        assert report.passed

    def test_self_consistent_under_tampering(self, unit_table):
        # Collapsed powers are swept back into every evaluation window (the
        # truncation level is the maximal admissible index), so the truncated
        # diagnostics stay internally consistent; convicting this fixture is
        # the axiom suite's job.
        bad = tamper_powers(unit_table, {4: 1, 5: 1})
        report = verify_truncation(bad, 60, seed=42)
        assert report.passed

    def test_cheap_last_anchor_demands_deeper_table(self, unit_table):
        # A lowered final power leaves the table unable to exhibit any
        # truncation level, which surfaces as an extend-table error rather
        # than a silent wrong certificate.
        bad = tamper_powers(unit_table, {unit_table.depth: 2})
        with pytest.raises(ExtendTableError):
            verify_truncation(bad, 60, seed=42)

    def test_torsion_table(self):
        table = build_anchor_table(Z6, CyclicScaled(), 12)
        report = verify_truncation(table, 30, seed=2)
        assert report.passed


class TestReportSerialization:
    def test_stable_json_excludes_timing(self, quarter_table):
        report = verify_extension(quarter_table, 20, seed=8)
        payload = suite_report_to_json(report)
        assert "wall_time_ms" not in payload
        timed = suite_report_to_json(report, include_timing=True)
        assert "wall_time_ms" in timed
