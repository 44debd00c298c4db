"""Frequency estimation of marginal and conditional probabilities.

Estimates come from two session groups: the A-only group yields p(A=x), the
B-then-A group yields p(B=y) and the conditionals p(A=x|B=y). A conditional
whose condition group is empty is undefined (None), never silently zero.

Pooling across experiments supports two modes. ``strict`` averages the
full-precision per-experiment values and excludes undefined conditionals
(with a warning). ``paper`` mirrors the arithmetic behind published summary
tables of this kind: per-experiment values are quantized to 4 decimals first,
an undefined conditional contributes 0.0, and the pooled value is quantized
again. Only the latter reproduces the bundled reference table.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

from .errors import InsufficientData
from .rounding import round_half_away
from .trials import Dataset, Outcome, Protocol


class Provenance(Enum):
    OBSERVED = "observed"
    POOLED = "pooled"


class PoolingMode(Enum):
    STRICT = "strict"
    PAPER = "paper"


@dataclass(frozen=True)
class OutcomeCounts:
    """Exact tallies behind the estimated probabilities."""

    n_a_only: int
    n_a_only_plus: int
    n_b_then_a: int
    n_b_plus: int
    n_b_minus: int
    n_a_plus_given_b_plus: int
    n_a_plus_given_b_minus: int

    def __post_init__(self) -> None:
        values = [
            self.n_a_only,
            self.n_a_only_plus,
            self.n_b_then_a,
            self.n_b_plus,
            self.n_b_minus,
            self.n_a_plus_given_b_plus,
            self.n_a_plus_given_b_minus,
        ]
        if any(v < 0 for v in values):
            raise ValueError("counts must be nonnegative")
        if self.n_a_only_plus > self.n_a_only:
            raise ValueError("n_a_only_plus exceeds n_a_only")
        if self.n_b_plus + self.n_b_minus != self.n_b_then_a:
            raise ValueError("n_b_plus + n_b_minus must equal n_b_then_a")
        if self.n_a_plus_given_b_plus > self.n_b_plus:
            raise ValueError("n_a_plus_given_b_plus exceeds n_b_plus")
        if self.n_a_plus_given_b_minus > self.n_b_minus:
            raise ValueError("n_a_plus_given_b_minus exceeds n_b_minus")

    @staticmethod
    def zero() -> "OutcomeCounts":
        return OutcomeCounts(0, 0, 0, 0, 0, 0, 0)

    def add(self, other: "OutcomeCounts") -> "OutcomeCounts":
        return OutcomeCounts(
            self.n_a_only + other.n_a_only,
            self.n_a_only_plus + other.n_a_only_plus,
            self.n_b_then_a + other.n_b_then_a,
            self.n_b_plus + other.n_b_plus,
            self.n_b_minus + other.n_b_minus,
            self.n_a_plus_given_b_plus + other.n_a_plus_given_b_plus,
            self.n_a_plus_given_b_minus + other.n_a_plus_given_b_minus,
        )


@dataclass(frozen=True)
class ContextualStatistics:
    """Marginals, conditionals, and the counts they came from.

    Conditionals are None when their condition group has zero count. For
    Observed provenance every probability equals its count ratio exactly.
    """

    p_a_plus: float
    p_a_minus: float
    p_b_plus: float
    p_b_minus: float
    p_a_plus_given_b_plus: float | None
    p_a_minus_given_b_plus: float | None
    p_a_plus_given_b_minus: float | None
    p_a_minus_given_b_minus: float | None
    counts: OutcomeCounts
    provenance: Provenance

    def p_a(self, outcome: Outcome) -> float:
        return self.p_a_plus if outcome is Outcome.PLUS else self.p_a_minus

    def p_b(self, outcome: Outcome) -> float:
        return self.p_b_plus if outcome is Outcome.PLUS else self.p_b_minus

    def conditional(self, a: Outcome, b: Outcome) -> float | None:
        """p(A=a | B=b), or None when undefined."""
        if b is Outcome.PLUS:
            return (
                self.p_a_plus_given_b_plus
                if a is Outcome.PLUS
                else self.p_a_minus_given_b_plus
            )
        return (
            self.p_a_plus_given_b_minus
            if a is Outcome.PLUS
            else self.p_a_minus_given_b_minus
        )


def count_outcomes(dataset: Dataset) -> OutcomeCounts:
    """Exact tallies over the dataset's records."""
    n_a_only = n_a_only_plus = 0
    n_b_then_a = n_b_plus = n_b_minus = 0
    n_app = n_apm = 0
    for record in dataset.records:
        if record.protocol is Protocol.A_ONLY:
            n_a_only += 1
            if record.outcome_of("A") is Outcome.PLUS:
                n_a_only_plus += 1
        else:
            n_b_then_a += 1
            b = record.outcome_of("B")
            a = record.outcome_of("A")
            if b is Outcome.PLUS:
                n_b_plus += 1
                if a is Outcome.PLUS:
                    n_app += 1
            else:
                n_b_minus += 1
                if a is Outcome.PLUS:
                    n_apm += 1
    return OutcomeCounts(
        n_a_only=n_a_only,
        n_a_only_plus=n_a_only_plus,
        n_b_then_a=n_b_then_a,
        n_b_plus=n_b_plus,
        n_b_minus=n_b_minus,
        n_a_plus_given_b_plus=n_app,
        n_a_plus_given_b_minus=n_apm,
    )


def estimate_statistics(counts: OutcomeCounts) -> ContextualStatistics:
    """Exact count ratios; conditionals with an empty condition are None.

    Raises InsufficientData when either session group is empty.
    """
    if counts.n_a_only < 1 or counts.n_b_then_a < 1:
        raise InsufficientData(
            "need at least one A-only and one B-then-A session, got "
            f"{counts.n_a_only} and {counts.n_b_then_a}"
        )
    p_a_plus = counts.n_a_only_plus / counts.n_a_only
    p_b_plus = counts.n_b_plus / counts.n_b_then_a
    if counts.n_b_plus > 0:
        agbp: float | None = counts.n_a_plus_given_b_plus / counts.n_b_plus
    else:
        agbp = None
    if counts.n_b_minus > 0:
        agbm: float | None = counts.n_a_plus_given_b_minus / counts.n_b_minus
    else:
        agbm = None
    return ContextualStatistics(
        p_a_plus=p_a_plus,
        p_a_minus=1.0 - p_a_plus,
        p_b_plus=p_b_plus,
        p_b_minus=1.0 - p_b_plus,
        p_a_plus_given_b_plus=agbp,
        p_a_minus_given_b_plus=None if agbp is None else 1.0 - agbp,
        p_a_plus_given_b_minus=agbm,
        p_a_minus_given_b_minus=None if agbm is None else 1.0 - agbm,
        counts=counts,
        provenance=Provenance.OBSERVED,
    )


def estimate_dataset(dataset: Dataset) -> ContextualStatistics:
    return estimate_statistics(count_outcomes(dataset))


def _pool_values(values: list[float | None], mode: PoolingMode, what: str) -> float | None:
    if mode is PoolingMode.PAPER:
        quantized = [round_half_away(0.0 if v is None else v) for v in values]
        return round_half_away(sum(quantized) / len(quantized))
    defined = [v for v in values if v is not None]
    if not defined:
        return None
    if len(defined) < len(values):
        warnings.warn(
            f"pooling {what}: {len(values) - len(defined)} undefined "
            "entries excluded (strict mode)",
            stacklevel=3,
        )
    return sum(defined) / len(defined)


def pool_statistics(
    statistics: list[ContextualStatistics],
    mode: PoolingMode = PoolingMode.STRICT,
) -> ContextualStatistics:
    """Unweighted mean of per-experiment statistics.

    The plus-side values are pooled and the minus side is derived by
    complement, which keeps both normalization invariants and matches how
    the published wave-function inputs treat the B=minus conditionals.
    """
    if not statistics:
        raise InsufficientData("pool_statistics requires at least one input")
    p_a_plus = _pool_values([s.p_a_plus for s in statistics], mode, "p(A=+)")
    p_b_plus = _pool_values([s.p_b_plus for s in statistics], mode, "p(B=+)")
    agbp = _pool_values(
        [s.p_a_plus_given_b_plus for s in statistics], mode, "p(A=+|B=+)"
    )
    agbm = _pool_values(
        [s.p_a_plus_given_b_minus for s in statistics], mode, "p(A=+|B=-)"
    )
    counts = OutcomeCounts.zero()
    for s in statistics:
        counts = counts.add(s.counts)
    assert p_a_plus is not None and p_b_plus is not None
    return ContextualStatistics(
        p_a_plus=p_a_plus,
        p_a_minus=1.0 - p_a_plus,
        p_b_plus=p_b_plus,
        p_b_minus=1.0 - p_b_plus,
        p_a_plus_given_b_plus=agbp,
        p_a_minus_given_b_plus=None if agbp is None else 1.0 - agbp,
        p_a_plus_given_b_minus=agbm,
        p_a_minus_given_b_minus=None if agbm is None else 1.0 - agbm,
        counts=counts,
        provenance=Provenance.POOLED,
    )


def pool_counts(counts: list[OutcomeCounts]) -> OutcomeCounts:
    """Sum raw counts across experiments.

    Alternative to per-experiment averaging; estimating from the summed
    counts weights experiments by size and does not reproduce the bundled
    reference table, which averages per-experiment values.
    """
    total = OutcomeCounts.zero()
    for c in counts:
        total = total.add(c)
    return total
