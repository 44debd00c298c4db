"""Contextual-probability analysis of two-context, two-outcome trial data.

Given sessions where a dichotomous test A is taken either alone or right
after a dichotomous test B, the toolkit estimates all marginal and
conditional probabilities, measures the violation of the classical
total-probability law, extracts the trigonometric interference phase, and
reconstructs the corresponding two-amplitude wave function. A CLI and a
small HTTP collector for live sessions are included.
"""

from .errors import (
    DuplicateSubject,
    HyperbolicRegime,
    InsufficientData,
    MalformedRecord,
    QontextError,
    UndefinedTerm,
    UnrepresentableSpec,
)
from .estimation import (
    ContextualStatistics,
    OutcomeCounts,
    PoolingMode,
    Provenance,
    count_outcomes,
    estimate_dataset,
    estimate_statistics,
    pool_counts,
    pool_statistics,
)
from .interference import (
    ContextClass,
    ContextEffectSummary,
    InterferenceResult,
    analyze_statistics,
    classical_prediction,
    classify_context_effect,
    interference_coefficient,
    phase_from_coefficient,
    solved_phases,
)
from .report import AnalysisReport, build_report, export_analysis, render_table1
from .simulate import (
    SimulationMode,
    SimulationSpec,
    SplitMix64,
    simulate,
    simulate_bernoulli,
    simulate_exact_counts,
)
from .stats import (
    TTestResult,
    pooled_t_test,
    pooled_t_test_from_summary,
    sample_mean_std,
    student_t_cdf,
    welch_t_test,
)
from .trials import (
    Dataset,
    Outcome,
    Protocol,
    TrialRecord,
    load_trials,
    parse_trials,
    partition_by_experiment,
    serialize_trials,
    validate_dataset,
)
from .wavefunction import (
    WaveFunction,
    born_probabilities,
    build_wave_function,
    mean_value,
    scalar_product,
)

__version__ = "0.1.0"
