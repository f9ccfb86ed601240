"""统计模块测试，scipy 只作为对照"""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate, stats as sp

from sandman.errors import (
    DegenerateTable,
    EmptySample,
    InsufficientData,
    StatsDomainError,
    UndefinedCorrelation,
)
from sandman.stats import (
    ContingencyTable,
    chi_square_cdf,
    chi_square_independence,
    chi_square_sf,
    describe,
    expected_schedule,
    occurrence_table,
    pearson_correlation,
    regularized_incomplete_beta,
    regularized_lower_gamma,
    regularized_upper_gamma,
    student_t_cdf,
    student_t_two_tailed,
    welch_t_test,
)


def t_pdf(t, dof):
    log_c = math.lgamma((dof + 1) / 2) - math.lgamma(dof / 2) - 0.5 * math.log(dof * math.pi)
    return math.exp(log_c) * (1 + t * t / dof) ** (-(dof + 1) / 2)


def chi2_pdf(x, k):
    if x <= 0:
        return 0.0
    return math.exp((k / 2 - 1) * math.log(x) - x / 2 - (k / 2) * math.log(2) - math.lgamma(k / 2))


class TestSpecialFunctions:
    @pytest.mark.parametrize("a, b, x", [(0.5, 0.5, 0.3), (2, 3, 0.4), (5, 1.5, 0.9), (10, 10, 0.5), (0.7, 4, 0.05)])
    def test_incomplete_beta_matches_quadrature(self, a, b, x):
        beta = math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))
        expected, _ = integrate.quad(lambda t: t ** (a - 1) * (1 - t) ** (b - 1) / beta, 0, x)
        assert regularized_incomplete_beta(a, b, x) == pytest.approx(expected, abs=1e-8)

    def test_incomplete_beta_bounds(self):
        assert regularized_incomplete_beta(2, 3, 0.0) == 0.0
        assert regularized_incomplete_beta(2, 3, 1.0) == 1.0
        with pytest.raises(StatsDomainError):
            regularized_incomplete_beta(0, 1, 0.5)

    @pytest.mark.parametrize("a, x", [(0.5, 0.2), (1, 1), (2.5, 1.0), (3, 7), (10, 4), (10, 20)])
    def test_incomplete_gamma_complement(self, a, x):
        expected, _ = integrate.quad(
            lambda t: math.exp((a - 1) * math.log(t) - t - math.lgamma(a)) if t > 0 else 0.0, 0, x
        )
        assert regularized_lower_gamma(a, x) == pytest.approx(expected, abs=1e-8)
        assert regularized_lower_gamma(a, x) + regularized_upper_gamma(a, x) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("x, dof", [(0.5, 1), (-1.2, 3), (2.0, 10), (3.5, 4.5), (-0.3, 30)])
    def test_student_t_cdf_matches_quadrature(self, x, dof):
        area, _ = integrate.quad(lambda t: t_pdf(t, dof), 0, x)
        assert student_t_cdf(x, dof) == pytest.approx(0.5 + area, abs=1e-8)

    def test_student_t_critical_value(self):
        assert student_t_two_tailed(2.228138851986, 10) == pytest.approx(0.05, abs=1e-9)
        assert student_t_two_tailed(0.0, 7) == pytest.approx(1.0)
        assert student_t_two_tailed(math.inf, 7) == 0.0

    @pytest.mark.parametrize("x, k", [(1.0, 2), (3.841458820694124, 1), (4.5, 3), (11.07, 5), (2.0, 10)])
    def test_chi_square_matches_quadrature(self, x, k):
        expected, _ = integrate.quad(lambda t: chi2_pdf(t, k), 0, x, limit=200)
        assert chi_square_cdf(x, k) == pytest.approx(expected, abs=1e-7)
        assert chi_square_sf(x, k) == pytest.approx(1 - expected, abs=1e-7)

    def test_chi_square_critical_value(self):
        assert chi_square_sf(3.841458820694124, 1) == pytest.approx(0.05, abs=1e-12)

    @pytest.mark.parametrize("dof", [0, -1, float("nan")])
    def test_invalid_dof(self, dof):
        with pytest.raises(StatsDomainError):
            student_t_cdf(1.0, dof)


class TestDescribe:
    def test_sample_std(self):
        result = describe([1, 2, 3, 4])
        assert result.mean == 2.5
        assert result.std_dev == pytest.approx(np.std([1, 2, 3, 4], ddof=1))
        assert result.n == 4

    def test_single_value(self):
        assert describe([7]).std_dev == 0.0

    def test_constant_sample_has_zero_std(self):
        assert describe([0.1] * 9).std_dev == 0.0

    def test_empty(self):
        with pytest.raises(EmptySample):
            describe([])


class TestWelch:
    def test_matches_scipy(self):
        rng = np.random.default_rng(3)
        a = rng.normal(60, 20, 40)
        b = rng.normal(70, 8, 25)
        result = welch_t_test(a, b)
        expected = sp.ttest_ind(a, b, equal_var=False)
        assert result.statistic == pytest.approx(expected.statistic, rel=1e-9)
        assert result.p_value == pytest.approx(expected.pvalue, abs=1e-9)

    def test_pooled_matches_scipy(self):
        a, b = [3, 4, 5, 6, 7], [5, 6, 7, 8, 9, 10]
        result = welch_t_test(a, b, pooled=True)
        expected = sp.ttest_ind(a, b, equal_var=True)
        assert result.p_value == pytest.approx(expected.pvalue, abs=1e-9)
        assert result.dof == 9

    def test_antisymmetric(self):
        a, b = [1.0, 2.5, 3.1, 4.2], [2.2, 3.3, 5.0, 6.1, 6.4]
        ab, ba = welch_t_test(a, b), welch_t_test(b, a)
        assert ab.statistic == pytest.approx(-ba.statistic)
        assert ab.p_value == pytest.approx(ba.p_value)

    def test_identical_samples_not_significant(self):
        result = welch_t_test([60, 65, 70, 75], [60, 65, 70, 75])
        assert result.statistic == 0.0
        assert result.p_value == pytest.approx(1.0)
        assert not result.significant

    def test_shifted_population_significant(self):
        rng = np.random.default_rng(11)
        control = rng.normal(64, 19, 200)
        shifted = control + 20
        assert welch_t_test(shifted, control).significant

    def test_zero_variance_both_groups(self):
        equal = welch_t_test([5, 5, 5], [5, 5])
        assert equal.p_value == 1.0
        different = welch_t_test([6, 6, 6], [5, 5])
        assert different.statistic == math.inf
        assert different.p_value == 0.0
        assert different.significant

    def test_needs_two_per_group(self):
        with pytest.raises(InsufficientData):
            welch_t_test([1], [1, 2, 3])


class TestChiSquare:
    def test_matches_scipy(self):
        table = ContingencyTable(counts=((120, 90, 40), (150, 60, 40)))
        result = chi_square_independence(table)
        expected = sp.chi2_contingency(np.array(table.counts), correction=False)
        assert result.statistic == pytest.approx(expected[0], rel=1e-12)
        assert result.p_value == pytest.approx(expected[1], abs=1e-10)
        assert result.dof == 2

    def test_invariant_under_row_and_column_permutation(self):
        base = chi_square_independence(ContingencyTable(counts=((10, 20, 30), (25, 15, 5))))
        swapped = chi_square_independence(ContingencyTable(counts=((15, 25, 5), (20, 10, 30))))
        assert base.statistic == pytest.approx(swapped.statistic)

    def test_zero_row_is_degenerate(self):
        with pytest.raises(DegenerateTable):
            chi_square_independence(ContingencyTable(counts=((0, 0), (3, 4))))

    def test_too_small(self):
        with pytest.raises(InsufficientData):
            ContingencyTable(counts=((1, 2),))

    def test_occurrence_table_buckets(self):
        table = occurrence_table([0, 1, 1, 2, 3], [1, 1, 1, 0])
        assert table.counts == ((1, 2, 2), (1, 3, 0))
        assert table.col_labels == ("0", "1", ">=2")

    def test_occurrence_table_drops_empty_columns(self):
        table = occurrence_table([0, 1, 1], [1, 0, 0])
        assert table.col_labels == ("0", "1")

    def test_occurrence_table_single_category(self):
        assert occurrence_table([1, 1, 1], [1, 1]) is None

    def test_lower_call_frequency_flagged(self):
        rng = np.random.default_rng(5)
        condition = list(rng.binomial(1, 0.5, 300))
        control = [1] * 297 + [0, 0, 2]
        table = occurrence_table(condition, control)
        assert chi_square_independence(table).significant


class TestCorrelation:
    def test_matches_scipy(self):
        rng = np.random.default_rng(8)
        x = rng.integers(1, 17, 60)
        y = x + rng.normal(0, 4, 60)
        result = pearson_correlation(x, y)
        expected = sp.pearsonr(x, y)
        assert result.rho == pytest.approx(expected[0], rel=1e-9)
        assert result.p_value == pytest.approx(expected[1], abs=1e-9)

    def test_bounds(self):
        assert pearson_correlation([1, 2, 3], [2, 4, 6]).rho == 1.0
        assert pearson_correlation([1, 2, 3], [3, 2, 1]).rho == -1.0

    def test_constant_series(self):
        with pytest.raises(UndefinedCorrelation):
            pearson_correlation([1, 2, 3], [4, 4, 4])

    def test_too_short(self):
        with pytest.raises(InsufficientData):
            pearson_correlation([1, 2], [1, 2])


class TestExpectedSchedule:
    def test_mode_per_slot(self):
        result = expected_schedule(
            [["Email", "Work", "Lunch"], ["Email", "Meeting", "Lunch"], ["Call", "Work", "Lunch", "Work"]],
            ["Call", "Email", "Meeting", "Work", "Lunch"],
        )
        assert result.tasks() == ["Email", "Work", "Lunch", "End"]
        assert result.slots[3].frequency == 2
        assert not any(slot.tie for slot in result.slots)

    def test_tie_broken_by_catalog_order(self):
        result = expected_schedule([["Work"], ["Call"]], ["Call", "Work"])
        assert result.slots[0].task == "Call"
        assert result.slots[0].tie

    def test_end_marker_loses_ties(self):
        result = expected_schedule([["Work", "Lunch"], ["Work"]], ["Work", "Lunch"])
        assert result.tasks() == ["Work", "Lunch", "End"]
        assert result.slots[1].tie

    def test_lunch_plurality_at_slot_five(self):
        day = ["Email", "Work", "Coffee", "Meeting", "Lunch", "Work"]
        other = ["Work", "Email", "Call", "Work", "Lunch", "Reading"]
        result = expected_schedule([day, other, day], ["Call", "Coffee", "Email", "Meeting", "Lunch", "Reading", "Work"])
        assert result.slots[4].task == "Lunch"

    def test_empty(self):
        with pytest.raises(EmptySample):
            expected_schedule([], ["Work"])


def direct_welch_t(a, b):
    ma, mb = sum(a) / len(a), sum(b) / len(b)
    va = sum((x - ma) ** 2 for x in a) / (len(a) - 1)
    vb = sum((x - mb) ** 2 for x in b) / (len(b) - 1)
    return (ma - mb) / math.sqrt(va / len(a) + vb / len(b))


def exact_chi_square(counts):
    rows = [sum(r) for r in counts]
    cols = [sum(c) for c in zip(*counts)]
    total = sum(rows)
    return sum(
        (Fraction(o) - Fraction(rows[i] * cols[j], total)) ** 2 / Fraction(rows[i] * cols[j], total)
        for i, row in enumerate(counts)
        for j, o in enumerate(row)
    )


def tally_expected(sequences, catalog_order):
    width = max(len(s) for s in sequences) + 1
    padded = [list(s) + ["End"] * (width - len(s)) for s in sequences]
    order = list(catalog_order) + ["End"]
    result = []
    for i in range(width):
        counts = {name: 0 for name in order}
        for names in padded:
            counts[names[i]] += 1
        best = max(counts.values())
        winners = [name for name in order if counts[name] == best]
        result.append((winners[0], best, len(winners) > 1))
    return result


class TestAcceptanceFixtures:
    def test_welch_fixture(self):
        result = welch_t_test([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
        assert result.statistic == pytest.approx(-1.0, abs=1e-12)
        assert result.dof == pytest.approx(8.0, abs=1e-12)
        assert result.p_value == pytest.approx(0.3466, abs=5e-4)

    def test_welch_matches_direct_formula(self):
        rng = np.random.default_rng(50)
        for _ in range(50):
            a = list(rng.normal(rng.uniform(0, 100), rng.uniform(1, 30), int(rng.integers(2, 40))))
            b = list(rng.normal(rng.uniform(0, 100), rng.uniform(1, 30), int(rng.integers(2, 40))))
            assert abs(welch_t_test(a, b).statistic - direct_welch_t(a, b)) <= 1e-9

    def test_chi_square_fixture(self):
        result = chi_square_independence(ContingencyTable(counts=((20, 5), (5, 20))))
        assert exact_chi_square(((20, 5), (5, 20))) == 18
        assert result.statistic == 18.0
        assert result.dof == 1
        assert result.p_value < 1e-4

    def test_chi_square_random_tables(self):
        rng = np.random.default_rng(100)
        for _ in range(100):
            r, c = int(rng.integers(2, 5)), int(rng.integers(2, 5))
            counts = rng.integers(1, 40, size=(r, c))
            expected = float(exact_chi_square(counts.tolist()))
            permuted = counts[rng.permutation(r)][:, rng.permutation(c)]
            for table in (counts, permuted):
                result = chi_square_independence(ContingencyTable(counts=tuple(map(tuple, table.tolist()))))
                assert result.statistic == pytest.approx(expected, rel=1e-12)

    def test_expected_schedule_matches_tally(self):
        catalog_order = ["Call", "Coffee", "Email", "Lunch", "Work"]
        rng = np.random.default_rng(7)
        for trial in range(100):
            n = int(rng.integers(1, 12))
            sequences = [
                [catalog_order[k] for k in rng.integers(0, len(catalog_order), int(rng.integers(0, 7)))]
                for _ in range(n)
            ]
            if trial % 4 == 0:
                sequences.append(list(reversed(sequences[0])))
            result = expected_schedule(sequences, catalog_order)
            assert [(s.task, s.frequency, s.tie) for s in result.slots] == tally_expected(sequences, catalog_order)


class TestInvariants:
    @pytest.mark.parametrize("scale, shift", [(2.0, 0.0), (0.5, -30.0), (7.25, 1000.0)])
    def test_welch_affine_invariant(self, scale, shift):
        """两组同时做 x -> αx + β (α > 0) 不改变 t 与 p"""
        rng = np.random.default_rng(21)
        a, b = rng.normal(50, 12, 30), rng.normal(58, 6, 22)
        base = welch_t_test(a, b)
        moved = welch_t_test(a * scale + shift, b * scale + shift)
        assert moved.statistic == pytest.approx(base.statistic, rel=1e-9)
        assert moved.p_value == pytest.approx(base.p_value, abs=1e-12)
        assert moved.dof == pytest.approx(base.dof, rel=1e-9)

    @pytest.mark.parametrize("dof", [1.0, 2.5, 10.0, 120.0])
    def test_student_t_cdf_monotone_with_limits(self, dof):
        xs = np.linspace(-40.0, 40.0, 401)
        values = [student_t_cdf(float(x), dof) for x in xs]
        assert all(lo <= hi + 1e-12 for lo, hi in zip(values, values[1:]))
        assert all(0.0 <= v <= 1.0 for v in values)
        assert student_t_cdf(-math.inf, dof) == 0.0
        assert student_t_cdf(math.inf, dof) == 1.0
        assert student_t_cdf(0.0, dof) == 0.5

    @pytest.mark.parametrize("dof", [1.0, 2.0, 5.0, 40.0])
    def test_chi_square_cdf_monotone_with_limits(self, dof):
        xs = np.linspace(0.0, 200.0, 401)
        values = [chi_square_cdf(float(x), dof) for x in xs]
        assert all(lo <= hi + 1e-12 for lo, hi in zip(values, values[1:]))
        assert values[0] == 0.0
        assert chi_square_cdf(math.inf, dof) == pytest.approx(1.0)
        assert chi_square_cdf(1e6, dof) == pytest.approx(1.0)

    @pytest.mark.parametrize("scale, shift", [(3.0, 4.0), (0.1, -2.0)])
    def test_pearson_affine_invariant_and_sign_flip(self, scale, shift):
        rng = np.random.default_rng(5)
        x = rng.integers(1, 17, 40).astype(float)
        y = x + rng.normal(0, 3, 40)
        base = pearson_correlation(x, y)
        moved = pearson_correlation(x * scale + shift, y * scale + shift)
        assert moved.rho == pytest.approx(base.rho, rel=1e-12)
        assert moved.p_value == pytest.approx(base.p_value, rel=1e-9, abs=1e-15)
        flipped = pearson_correlation(x, -scale * y + shift)
        assert flipped.rho == pytest.approx(-base.rho, rel=1e-12)
        assert flipped.p_value == pytest.approx(base.p_value, rel=1e-9, abs=1e-15)
