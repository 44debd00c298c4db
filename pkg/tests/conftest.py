import random
from pathlib import Path

import pytest

from qontext.estimation import (
    ContextualStatistics,
    OutcomeCounts,
    Provenance,
    estimate_statistics,
)
from qontext.interference import ContextClass, analyze_statistics
from qontext.trials import Dataset, load_trials

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# unique integer reconstruction of the three published experiments
# (re-derived by the exhaustive search in test_fixture_reconstruction.py)
RECONSTRUCTED_COUNTS = {
    "exp1": OutcomeCounts(26, 18, 27, 25, 2, 17, 1),
    "exp2": OutcomeCounts(14, 8, 10, 10, 0, 7, 0),
    "exp3": OutcomeCounts(11, 5, 10, 7, 3, 3, 3),
}


def fixture_dataset(name: str) -> Dataset:
    result = load_trials(str(FIXTURES / f"{name}.jsonl"))
    assert result.ok, result.diagnostics
    return result.dataset


@pytest.fixture(scope="session")
def all_experiments() -> Dataset:
    return fixture_dataset("all_experiments")


@pytest.fixture(scope="session")
def exp1() -> Dataset:
    return fixture_dataset("exp1")


@pytest.fixture(scope="session")
def exp2() -> Dataset:
    return fixture_dataset("exp2")


@pytest.fixture(scope="session")
def exp3() -> Dataset:
    return fixture_dataset("exp3")


def make_statistics(
    p_a_plus: float,
    p_b_plus: float,
    agbp: float | None,
    agbm: float | None,
    provenance: Provenance = Provenance.POOLED,
) -> ContextualStatistics:
    """Hand-built statistics for tests that need arbitrary values."""
    return ContextualStatistics(
        p_a_plus=p_a_plus,
        p_a_minus=1.0 - p_a_plus,
        p_b_plus=p_b_plus,
        p_b_minus=1.0 - p_b_plus,
        p_a_plus_given_b_plus=agbp,
        p_a_minus_given_b_plus=None if agbp is None else 1.0 - agbp,
        p_a_plus_given_b_minus=agbm,
        p_a_minus_given_b_minus=None if agbm is None else 1.0 - agbm,
        counts=OutcomeCounts.zero(),
        provenance=provenance,
    )


def random_statistics(rng: random.Random) -> ContextualStatistics:
    """Arbitrary valid statistics with all conditionals defined."""
    return make_statistics(
        p_a_plus=rng.uniform(0.01, 0.99),
        p_b_plus=rng.uniform(0.05, 0.95),
        agbp=rng.uniform(0.05, 0.95),
        agbm=rng.uniform(0.05, 0.95),
    )


def random_trigonometric_statistics(rng: random.Random) -> ContextualStatistics:
    """Valid statistics whose joint classification is trigonometric."""
    while True:
        statistics = random_statistics(rng)
        plus, minus = analyze_statistics(statistics)
        if (
            plus.classification is ContextClass.TRIGONOMETRIC
            and minus.classification is ContextClass.TRIGONOMETRIC
        ):
            return statistics


def random_count_statistics(rng: random.Random, max_count: int = 30) -> ContextualStatistics:
    """Statistics backed by exact small-integer counts."""
    n_a_only = rng.randint(1, max_count)
    n_b_then_a = rng.randint(1, max_count)
    n_b_plus = rng.randint(0, n_b_then_a)
    counts = OutcomeCounts(
        n_a_only=n_a_only,
        n_a_only_plus=rng.randint(0, n_a_only),
        n_b_then_a=n_b_then_a,
        n_b_plus=n_b_plus,
        n_b_minus=n_b_then_a - n_b_plus,
        n_a_plus_given_b_plus=rng.randint(0, n_b_plus),
        n_a_plus_given_b_minus=rng.randint(0, n_b_then_a - n_b_plus),
    )
    return estimate_statistics(counts)
