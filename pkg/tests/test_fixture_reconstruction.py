"""Exhaustive-search oracle behind the bundled fixtures.

The published analysis reports group sizes (53, 24, 21) and per-experiment
probabilities at 4 decimals, but not the split into A-only and B-then-A
subgroups. The search below enumerates every integer split consistent with
the group size and the printed probabilities; each experiment admits exactly
one solution, and the bundled fixtures are frozen to it.
"""

from itertools import product

from conftest import RECONSTRUCTED_COUNTS, fixture_dataset

from qontext.estimation import OutcomeCounts, count_outcomes
from qontext.reference import GROUP_SIZES, TABLE_ROWS
from qontext.rounding import round_half_away
from qontext.simulate import SimulationMode, SimulationSpec, simulate_exact_counts
from qontext.trials import serialize_trials

# (group size, p(A=+), p(B=+), p(A=+|B=+), p(A=+|B=-), printed-zero-may-be-undefined)
_TARGETS = [
    (GROUP_SIZES[0], TABLE_ROWS[0][0], TABLE_ROWS[0][2], TABLE_ROWS[0][4], TABLE_ROWS[0][5], False),
    (GROUP_SIZES[1], TABLE_ROWS[1][0], TABLE_ROWS[1][2], TABLE_ROWS[1][4], TABLE_ROWS[1][5], True),
    (GROUP_SIZES[2], TABLE_ROWS[2][0], TABLE_ROWS[2][2], TABLE_ROWS[2][4], TABLE_ROWS[2][5], False),
]


def _search(total, p_a, p_b, p_agbp, p_agbm, zero_may_be_undefined):
    solutions = []
    for n_a_only in range(1, total):
        n_b_then_a = total - n_a_only
        a_candidates = [
            k for k in range(n_a_only + 1) if round_half_away(k / n_a_only) == p_a
        ]
        if not a_candidates:
            continue
        b_candidates = [
            k for k in range(1, n_b_then_a + 1) if round_half_away(k / n_b_then_a) == p_b
        ]
        for n_a_plus, n_b_plus in product(a_candidates, b_candidates):
            n_b_minus = n_b_then_a - n_b_plus
            app_candidates = [
                k for k in range(n_b_plus + 1) if round_half_away(k / n_b_plus) == p_agbp
            ]
            if n_b_minus == 0:
                apm_candidates = [0] if (zero_may_be_undefined and p_agbm == 0.0) else []
            else:
                apm_candidates = [
                    k
                    for k in range(n_b_minus + 1)
                    if round_half_away(k / n_b_minus) == p_agbm
                ]
            for n_app, n_apm in product(app_candidates, apm_candidates):
                solutions.append(
                    OutcomeCounts(
                        n_a_only, n_a_plus, n_b_then_a, n_b_plus, n_b_minus, n_app, n_apm
                    )
                )
    return solutions


def test_reconstruction_is_unique_and_matches_frozen_counts():
    for (total, *target), name in zip(_TARGETS, ("exp1", "exp2", "exp3")):
        solutions = _search(total, *target)
        assert len(solutions) == 1, f"{name}: expected a unique split, got {solutions}"
        assert solutions[0] == RECONSTRUCTED_COUNTS[name]


def test_bundled_fixtures_carry_the_reconstructed_counts():
    for name, expected in RECONSTRUCTED_COUNTS.items():
        assert count_outcomes(fixture_dataset(name)) == expected


def test_fixture_files_are_frozen_to_the_generator_output():
    for name, counts in RECONSTRUCTED_COUNTS.items():
        spec = SimulationSpec(
            experiment_id=name,
            n_a_only=counts.n_a_only,
            n_b_then_a=counts.n_b_then_a,
            p_a_plus=counts.n_a_only_plus / counts.n_a_only,
            p_b_plus=counts.n_b_plus / counts.n_b_then_a,
            p_a_plus_given_b_plus=(
                counts.n_a_plus_given_b_plus / counts.n_b_plus if counts.n_b_plus else 0.0
            ),
            p_a_plus_given_b_minus=(
                counts.n_a_plus_given_b_minus / counts.n_b_minus
                if counts.n_b_minus
                else 0.0
            ),
            mode=SimulationMode.EXACT_COUNTS,
        )
        regenerated = serialize_trials(simulate_exact_counts(spec))
        from conftest import FIXTURES

        assert (FIXTURES / f"{name}.jsonl").read_text(encoding="utf-8") == regenerated


def test_combined_fixture_partitions_into_published_group_sizes(all_experiments):
    from qontext.trials import partition_by_experiment

    parts = partition_by_experiment(all_experiments)
    assert [len(parts[k]) for k in ("exp1", "exp2", "exp3")] == list(GROUP_SIZES)
    assert len(all_experiments) == sum(GROUP_SIZES)
