"""Violation of the total-probability law and the interference phase.

For a two-context design the classical law predicts

    p(A=x) = p(B=+) p(A=x|B=+) + p(B=-) p(A=x|B=-)

The contextual generalisation adds an interference term

    2 sqrt(p(B=+) p(A=x|B=+) p(B=-) p(A=x|B=-)) cos theta(x)

Solving for cos theta(x) gives the interference coefficient

    lambda(x) = (p(A=x) - classical) / denominator

where ``denominator`` is the 2*sqrt(...) factor. |lambda| <= 1 is the
trigonometric regime (a phase exists); |lambda| > 1 is hyperbolic; a zero
denominator is singular, consistent or not depending on whether the
residual also vanishes. Phases are reported without interpretive labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import HyperbolicRegime, UndefinedTerm
from .estimation import ContextualStatistics
from .trials import Outcome

# residual tolerance below which a zero-denominator case counts as consistent
SINGULAR_RESIDUAL_TOL = 1e-9


class ContextClass(Enum):
    TRIGONOMETRIC = "trigonometric"
    HYPERBOLIC = "hyperbolic"
    SINGULAR_CONSISTENT = "singular-consistent"
    SINGULAR_INCONSISTENT = "singular-inconsistent"


@dataclass(frozen=True)
class InterferenceResult:
    """Solved interference quantities for one outcome of the second test."""

    outcome: Outcome
    classical_prediction: float
    residual: float
    denominator: float
    coefficient: float | None  # lambda(x) = cos theta(x); None when singular
    phase_rad: float | None  # in [0, pi]; None outside the trigonometric class
    classification: ContextClass


@dataclass(frozen=True)
class ContextEffectSummary:
    classification: ContextClass
    zero_sum: float | None  # lambda(+)*D(+) + lambda(-)*D(-); None if a lambda is undefined
    plus: InterferenceResult
    minus: InterferenceResult


def _weighted_terms(statistics: ContextualStatistics, x: Outcome) -> tuple[float, float]:
    """The two products p(B=y) p(A=x|B=y); zero-weight undefined terms are zero."""
    terms = []
    for b in (Outcome.PLUS, Outcome.MINUS):
        weight = statistics.p_b(b)
        conditional = statistics.conditional(x, b)
        if conditional is None:
            if weight != 0.0:
                raise UndefinedTerm(
                    f"p(A={x.value}|B={b.value}) is undefined but p(B={b.value}) = "
                    f"{weight} > 0"
                )
            terms.append(0.0)
        else:
            terms.append(weight * conditional)
    return terms[0], terms[1]


def classical_prediction(statistics: ContextualStatistics, x: Outcome) -> float:
    """Total-probability prediction p(B=+)p(A=x|B=+) + p(B=-)p(A=x|B=-)."""
    term_plus, term_minus = _weighted_terms(statistics, x)
    return term_plus + term_minus


def interference_coefficient(
    statistics: ContextualStatistics, x: Outcome
) -> InterferenceResult:
    """Solve the contextual formula for the interference coefficient of outcome x."""
    term_plus, term_minus = _weighted_terms(statistics, x)
    classical = term_plus + term_minus
    residual = statistics.p_a(x) - classical
    denominator = 2.0 * math.sqrt(term_plus * term_minus)
    if denominator == 0.0:
        consistent = abs(residual) < SINGULAR_RESIDUAL_TOL
        return InterferenceResult(
            outcome=x,
            classical_prediction=classical,
            residual=residual,
            denominator=denominator,
            coefficient=None,
            phase_rad=None,
            classification=ContextClass.SINGULAR_CONSISTENT
            if consistent
            else ContextClass.SINGULAR_INCONSISTENT,
        )
    coefficient = residual / denominator
    if abs(coefficient) > 1.0:
        return InterferenceResult(
            outcome=x,
            classical_prediction=classical,
            residual=residual,
            denominator=denominator,
            coefficient=coefficient,
            phase_rad=None,
            classification=ContextClass.HYPERBOLIC,
        )
    return InterferenceResult(
        outcome=x,
        classical_prediction=classical,
        residual=residual,
        denominator=denominator,
        coefficient=coefficient,
        phase_rad=math.acos(coefficient),
        classification=ContextClass.TRIGONOMETRIC,
    )


def phase_from_coefficient(coefficient: float) -> float:
    """arccos of the interference coefficient, in [0, pi]."""
    if abs(coefficient) > 1.0:
        raise HyperbolicRegime(
            f"|lambda| = {abs(coefficient)} > 1: outside the trigonometric class"
        )
    return math.acos(coefficient)


def analyze_statistics(
    statistics: ContextualStatistics,
) -> tuple[InterferenceResult, InterferenceResult]:
    """Interference results for both outcomes of the second test."""
    return (
        interference_coefficient(statistics, Outcome.PLUS),
        interference_coefficient(statistics, Outcome.MINUS),
    )


def classify_context_effect(
    plus: InterferenceResult, minus: InterferenceResult
) -> ContextEffectSummary:
    """Joint classification of the (plus, minus) pair plus the zero-sum check.

    The residuals of the two outcomes cancel whenever the statistics
    normalize, so lambda(+)*D(+) + lambda(-)*D(-) should vanish.
    """
    results = (plus, minus)
    if any(r.classification is ContextClass.HYPERBOLIC for r in results):
        overall = ContextClass.HYPERBOLIC
    elif any(
        r.classification is ContextClass.SINGULAR_INCONSISTENT for r in results
    ):
        overall = ContextClass.SINGULAR_INCONSISTENT
    elif any(r.classification is ContextClass.SINGULAR_CONSISTENT for r in results):
        overall = ContextClass.SINGULAR_CONSISTENT
    else:
        overall = ContextClass.TRIGONOMETRIC
    if plus.coefficient is not None and minus.coefficient is not None:
        zero_sum: float | None = (
            plus.coefficient * plus.denominator + minus.coefficient * minus.denominator
        )
    else:
        zero_sum = None
    return ContextEffectSummary(
        classification=overall, zero_sum=zero_sum, plus=plus, minus=minus
    )


def solved_phases(statistics: ContextualStatistics) -> tuple[float, float]:
    """Phases (theta(+), theta(-)) solved from the statistics themselves.

    Raises HyperbolicRegime outside the trigonometric class and UndefinedTerm
    when a positively weighted conditional is missing.
    """
    plus, minus = analyze_statistics(statistics)
    for result in (plus, minus):
        if result.phase_rad is None:
            if result.coefficient is None:
                raise HyperbolicRegime(
                    f"outcome {result.outcome.value}: singular case "
                    f"({result.classification.value}), no phase exists"
                )
            raise HyperbolicRegime(
                f"outcome {result.outcome.value}: |lambda| = "
                f"{abs(result.coefficient)} > 1, no phase exists"
            )
    assert plus.phase_rad is not None and minus.phase_rad is not None
    return plus.phase_rad, minus.phase_rad
