"""Acceptance criteria for the analysis toolkit, one test per criterion.

Each test prints a single pass/fail line (visible with ``pytest -s``); the
assertions carry the stated tolerances. Everything runs at desk scale on the
bundled fixtures.
"""

import math
import random
from contextlib import contextmanager

import pytest
from conftest import fixture_dataset, random_statistics, random_trigonometric_statistics
from mpmath import mp, mpf
from scipy import integrate

from qontext.estimation import PoolingMode, count_outcomes, estimate_statistics
from qontext.interference import analyze_statistics, interference_coefficient, solved_phases
from qontext.reference import TABLE_MEAN_ROW, TABLE_ROWS, TABLE_SD_ROW
from qontext.report import build_report
from qontext.rounding import round_half_away
from qontext.simulate import SimulationMode, SimulationSpec, simulate_bernoulli, simulate_exact_counts
from qontext.stats import two_tailed_p
from qontext.trials import Outcome
from qontext.wavefunction import born_probabilities, build_wave_function, mean_value


@contextmanager
def criterion(number: int, label: str):
    try:
        yield
    except Exception:
        print(f"[acceptance] criterion {number} ({label}): FAIL")
        raise
    print(f"[acceptance] criterion {number} ({label}): PASS")


@pytest.fixture(scope="module")
def report():
    return build_report(fixture_dataset("all_experiments"), PoolingMode.PAPER)


def test_criterion_1_table_reproduction(report):
    with criterion(1, "table reproduction, columns I-VI"):
        assert len(report.table1.rows) == 3
        for row, published in zip(report.table1.rows, TABLE_ROWS):
            for computed, expected in zip(row[:6], published[:6]):
                assert abs(computed - expected) < 5e-5
                assert round_half_away(computed) == expected


def test_criterion_2_classical_predictions(report):
    with criterion(2, "classical predictions, column VII"):
        for row, expected in zip(report.table1.rows, (0.6667, 0.7000, 0.6000)):
            assert abs(row[6] - expected) < 5e-5
        assert round_half_away(report.table1.mean_row[6]) == 0.6556
        assert round_half_away(report.table1.sd_row[6]) == 0.0509


def test_criterion_3_pooled_means_and_sds(report):
    with criterion(3, "pooled mean and sd rows"):
        for computed, expected in zip(report.table1.mean_row[:6], TABLE_MEAN_ROW[:6]):
            assert round_half_away(computed) == expected
        for computed, expected in zip(report.table1.sd_row[:6], TABLE_SD_ROW[:6]):
            assert round_half_away(computed) == expected


def test_criterion_4_t_test(report):
    with criterion(4, "t-test footer"):
        result = report.ttest
        assert result.df == 4
        assert abs(result.t - (-1.1100)) <= 5e-4
        assert abs(result.pooled_sd - 0.0915) <= 1e-4
        assert abs(result.p_two_tailed - 0.330) <= 5e-3


def test_criterion_5_wave_function_mean_value(report):
    with criterion(5, "wave-function mean value"):
        wf = report.wavefunction
        assert wf is not None and wf.phase_source == "solved"
        assert abs(wf.mean_value - 0.1454) <= 1e-4
        statistics = report.pooled.statistics
        expected = statistics.p_a_plus - statistics.p_a_minus
        assert abs(wf.mean_value - expected) <= 1e-10


def test_criterion_6_discrepancy_detection(report):
    with criterion(6, "discrepancy detection"):
        plus = report.pooled.summary.plus
        minus = report.pooled.summary.minus
        assert abs(plus.coefficient - (-0.0479)) <= 5e-4
        assert abs(minus.coefficient - 0.0590) <= 5e-4

        # independent evaluation at 30+ significant digits
        mp.dps = 40

        def oracle(p_a, conditional_plus):
            p_b, agbm = mpf("0.8753"), mpf("0.5")
            term_plus = p_b * conditional_plus
            term_minus = (1 - p_b) * agbm
            return (mpf(p_a) - term_plus - term_minus) / (
                2 * mp.sqrt(term_plus * term_minus)
            )

        oracle_plus = oracle("0.5727", mpf("0.6029"))
        oracle_minus = oracle("0.4273", 1 - mpf("0.6029"))
        assert abs(plus.coefficient - float(oracle_plus)) < 1e-12
        assert abs(minus.coefficient - float(oracle_minus)) < 1e-12

        # the published phase values are NOT reproducible from the published
        # table; the report must flag them rather than match them
        assert abs(plus.coefficient - (-0.2285)) > 0.1
        assert abs(minus.coefficient - 0.0438) > 0.01
        reported = " ".join(note.reported for note in report.discrepancies)
        assert "-0.2285" in reported
        assert "0.0438" in reported
        assert "0.7193" in reported  # the amplitude whose real part disagrees


def test_criterion_7_property_suites():
    with criterion(7, "property suites"):
        # probability rule from solved phases, >= 1000 random statistics
        rng = random.Random(52712)
        for _ in range(1000):
            statistics = random_trigonometric_statistics(rng)
            wave = build_wave_function(statistics, solved_phases(statistics))
            born = born_probabilities(wave)
            assert abs(born[0] - statistics.p_a_plus) < 1e-10
            assert abs(born[1] - statistics.p_a_minus) < 1e-10

        # zero-sum interference identity
        rng = random.Random(1189)
        for _ in range(500):
            statistics = random_statistics(rng)
            plus, minus = analyze_statistics(statistics)
            assert abs(plus.residual + minus.residual) < 1e-12
            assert (
                abs(
                    plus.coefficient * plus.denominator
                    + minus.coefficient * minus.denominator
                )
                < 1e-12
            )

        # exact-count simulate -> estimate round trip
        spec = SimulationSpec(
            "acc", 26, 27, 18 / 26, 25 / 27, 17 / 25, 0.5, SimulationMode.EXACT_COUNTS
        )
        statistics = estimate_statistics(count_outcomes(simulate_exact_counts(spec)))
        assert statistics.p_a_plus == pytest.approx(18 / 26, abs=1e-15)
        assert statistics.p_a_plus_given_b_plus == pytest.approx(17 / 25, abs=1e-15)

        # seeded Bernoulli round trip at n = 10^4 within 3 sigma
        n = 10_000
        bernoulli_spec = SimulationSpec("acc", n, n, 0.55, 0.8, 0.7, 0.5)
        statistics = estimate_statistics(
            count_outcomes(simulate_bernoulli(bernoulli_spec, seed=65537))
        )
        assert abs(statistics.p_a_plus - 0.55) < 3 * math.sqrt(0.55 * 0.45 / n)
        assert abs(statistics.p_b_plus - 0.8) < 3 * math.sqrt(0.8 * 0.2 / n)

        # phase recovery within 0.05 rad at large n
        p_b, agbp, agbm, theta = 0.5, 0.55, 0.45, 1.2
        classical = p_b * agbp + (1 - p_b) * agbm
        denominator = 2 * math.sqrt(p_b * agbp * (1 - p_b) * agbm)
        planted = classical + denominator * math.cos(theta)
        recovery_spec = SimulationSpec("acc", 40_000, 40_000, planted, p_b, agbp, agbm)
        statistics = estimate_statistics(
            count_outcomes(simulate_bernoulli(recovery_spec, seed=19061))
        )
        result = interference_coefficient(statistics, Outcome.PLUS)
        assert abs(result.phase_rad - theta) < 0.05

        # t tail probability vs quadrature oracle
        def t_density(u, df):
            log_norm = (
                math.lgamma((df + 1) / 2)
                - math.lgamma(df / 2)
                - 0.5 * math.log(df * math.pi)
            )
            return math.exp(log_norm) * (1 + u * u / df) ** (-(df + 1) / 2)

        rng = random.Random(330)
        for _ in range(50):
            t = rng.uniform(-4.0, 4.0)
            df = rng.randint(1, 40)
            oracle, _ = integrate.quad(t_density, abs(t), math.inf, args=(df,), epsabs=1e-12)
            assert abs(two_tailed_p(t, df) - 2.0 * oracle) < 1e-6
