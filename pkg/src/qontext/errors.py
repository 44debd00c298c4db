"""Exception types shared across the toolkit."""

from __future__ import annotations


class QontextError(Exception):
    """Base class for all toolkit errors."""


class MalformedRecord(QontextError):
    """A trial record violates the qontext/trial/v1 schema."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DuplicateSubject(QontextError):
    """A (subject_id, experiment_id) pair occurs more than once."""

    def __init__(self, subject_id: str, experiment_id: str, line: int | None = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(
            f"duplicate session for subject {subject_id!r} in experiment "
            f"{experiment_id!r}{where}"
        )
        self.subject_id = subject_id
        self.experiment_id = experiment_id
        self.line = line


class InsufficientData(QontextError):
    """Too few observations for the requested estimate or test."""


class UndefinedTerm(QontextError):
    """A positively weighted conditional probability is undefined."""


class HyperbolicRegime(QontextError):
    """The interference coefficient lies outside [-1, 1], so no phase exists."""


class UnrepresentableSpec(QontextError):
    """A simulation spec cannot be realised with integer counts."""
