"""
Tests for the qubit-efficiency calculus.
"""

from fractions import Fraction

import pytest

from bellveto.models.protocol import PairCountRule
from bellveto.services.efficiency_service import (
    comparison_table,
    eta_deterministic,
    eta_qav6,
    instrumented_qubit_count,
    qubit_total_deterministic,
    table_to_csv,
)


class TestFormulas:

    @pytest.mark.parametrize("n,delta1,total", [(4, 10, 171), (1, 0, 4), (8, 1, 80)])
    def test_qubit_total(self, n, delta1, total):
        assert qubit_total_deterministic(n, delta1) == total

    def test_eta_deterministic(self):
        assert eta_deterministic(8, 1) == Fraction(1, 80)
        assert eta_deterministic(4, 10) == Fraction(1, 171)
        assert eta_deterministic(1, 0) == Fraction(1, 4)

    def test_eta_qav6(self):
        assert eta_qav6(8, 1, 4) == Fraction(1, 80)
        assert eta_qav6(8, 1, 1) == Fraction(1, 20)

    def test_iteration_bound(self):
        with pytest.raises(ValueError):
            eta_qav6(8, 1, 5)
        with pytest.raises(ValueError):
            eta_qav6(8, 1, 0)

    def test_rejects_zero_voters(self):
        with pytest.raises(ValueError):
            qubit_total_deterministic(0, 1)

    @pytest.mark.parametrize("n,log_n", [(2, 1), (4, 2), (8, 3), (16, 4)])
    @pytest.mark.parametrize("delta1", [0, 1, 8])
    def test_equal_for_powers_of_two(self, n, log_n, delta1):
        assert eta_qav6(n, delta1, 1 + log_n) == eta_deterministic(n, delta1)

    def test_monotonic(self):
        for n in range(1, 20):
            assert eta_deterministic(n + 1, 2) <= eta_deterministic(n, 2)
            assert eta_deterministic(n, 3) < eta_deterministic(n, 2)


class TestComparisonTable:

    def test_n8_row(self):
        row = comparison_table([8], delta1=1).rows[0]
        assert (row.n, row.h, row.q_total, row.eta_det, row.eta_qav6_worst) == (
            8, 4, 80, Fraction(1, 80), Fraction(1, 80)
        )
        assert not row.rule_discrepancy

    def test_n4_row(self):
        table = comparison_table([4], delta1=10)
        row = table.rows[0]
        assert (row.h, row.q_total, row.eta_det) == (3, 171, Fraction(1, 171))
        assert row.eta_qav6_worst == row.eta_det
        assert "eta_qav6_worst equals eta_det for n in [4]" in table.notes

    def test_rule_discrepancy_flagged(self):
        table = comparison_table([5], delta1=1, rule=PairCountRule.FLOOR)
        assert table.rows[0].rule_discrepancy
        assert "floor rule gives a different h for n in [5]" in table.notes

    def test_empty_list(self):
        with pytest.raises(ValueError):
            comparison_table([], delta1=1)

    def test_fraction_serialization(self):
        row = comparison_table([8], delta1=1).rows[0]
        assert row.model_dump()["eta_det"] == "1/80"
        assert row.as_record()["eta_det_decimal"] == pytest.approx(0.0125)

    def test_csv(self):
        text = table_to_csv(comparison_table([2, 8], delta1=1))
        lines = text.strip().splitlines()
        assert lines[0].startswith("n,h,h_efficiency,q_total")
        assert "1/80" in lines[2]


class TestInstrumentedCount:

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 8, 9])
    @pytest.mark.parametrize("delta1", [0, 1, 4])
    def test_matches_formula(self, n, delta1):
        assert instrumented_qubit_count(n, delta1) == qubit_total_deterministic(n, delta1)
