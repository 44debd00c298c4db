"""Domain types and the qontext/trial/v1 record format.

One line per subject session, UTF-8, line-delimited JSON. A session either
presents the second test alone (protocol ``A_ONLY``, one response) or the
first test followed by the second (protocol ``B_THEN_A``, two responses with
B strictly before A). Outcomes serialize as the strings ``"plus"`` and
``"minus"``; by convention plus means "figures judged equal". Unknown fields
are preserved on round-trip, both on records and on individual responses.

Example line::

    {"schema":"qontext/trial/v1","subject_id":"s01","experiment_id":"exp1",
     "protocol":"A_ONLY","responses":[{"observable":"A","outcome":"plus"}]}
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Any, Iterable, Iterator

from .errors import DuplicateSubject, MalformedRecord

TRIAL_SCHEMA = "qontext/trial/v1"


class Outcome(Enum):
    """Binary mark of a dichotomous observable."""

    PLUS = "plus"
    MINUS = "minus"

    def flipped(self) -> "Outcome":
        return Outcome.MINUS if self is Outcome.PLUS else Outcome.PLUS


class Protocol(Enum):
    """Session shape: second test alone, or first test then second."""

    A_ONLY = "A_ONLY"
    B_THEN_A = "B_THEN_A"


@dataclass(frozen=True)
class ObservableId:
    id: str
    label: str = ""


OBSERVABLE_B = ObservableId("B", "first test (context)")
OBSERVABLE_A = ObservableId("A", "second test (measured)")
DEFAULT_OBSERVABLES = (OBSERVABLE_B, OBSERVABLE_A)

# expected (observable id) sequence per protocol
_PROTOCOL_SHAPE = {
    Protocol.A_ONLY: ("A",),
    Protocol.B_THEN_A: ("B", "A"),
}


@dataclass(frozen=True)
class Response:
    observable: str
    outcome: Outcome
    latency_ms: int | None = None
    extras: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TrialRecord:
    """One subject's session: protocol plus its ordered responses."""

    subject_id: str
    experiment_id: str
    protocol: Protocol
    responses: tuple[Response, ...]
    presented_at: str | None = None
    extras: dict = field(default_factory=dict)

    def outcome_of(self, observable_id: str) -> Outcome | None:
        for response in self.responses:
            if response.observable == observable_id:
                return response.outcome
        return None


@dataclass
class Dataset:
    """A collection of validated trial records plus its observable pair."""

    records: list[TrialRecord] = field(default_factory=list)
    observables: tuple[ObservableId, ObservableId] = DEFAULT_OBSERVABLES
    schema_version: str = TRIAL_SCHEMA
    metadata: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)

    def counts_by_experiment(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for record in self.records:
            counts[record.experiment_id] = counts.get(record.experiment_id, 0) + 1
        return counts


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    code: str  # "malformed-record" or "duplicate-subject"
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.code}: {self.message}"


@dataclass
class ParseResult:
    dataset: Dataset
    diagnostics: list[ParseDiagnostic]

    @property
    def ok(self) -> bool:
        return not self.diagnostics


@dataclass(frozen=True)
class Finding:
    code: str
    message: str
    subject_id: str | None = None
    experiment_id: str | None = None

    def __str__(self) -> str:
        who = f" [{self.experiment_id}/{self.subject_id}]" if self.subject_id else ""
        return f"{self.code}{who}: {self.message}"


@dataclass
class ValidationReport:
    findings: list[Finding]

    @property
    def ok(self) -> bool:
        return not self.findings


def _record_shape_error(record: TrialRecord) -> str | None:
    """Return the first protocol/shape violation, or None if well-formed."""
    if not record.subject_id:
        return "subject_id must be a nonempty string"
    if not record.experiment_id:
        return "experiment_id must be a nonempty string"
    expected = _PROTOCOL_SHAPE[record.protocol]
    got = tuple(response.observable for response in record.responses)
    if got != expected:
        return (
            f"protocol {record.protocol.value} requires responses "
            f"{list(expected)}, got {list(got)}"
        )
    for response in record.responses:
        if response.latency_ms is not None and response.latency_ms < 0:
            return "latency_ms must be nonnegative"
    return None


def _parse_response(obj: Any, line: int) -> Response:
    if not isinstance(obj, dict):
        raise MalformedRecord(line, "each response must be a JSON object")
    known = {"observable", "outcome", "latency_ms"}
    observable = obj.get("observable")
    if observable not in ("A", "B"):
        raise MalformedRecord(line, f"unknown observable {observable!r}")
    outcome_raw = obj.get("outcome")
    try:
        outcome = Outcome(outcome_raw)
    except ValueError:
        raise MalformedRecord(
            line, f"outcome must be \"plus\" or \"minus\", got {outcome_raw!r}"
        ) from None
    latency = obj.get("latency_ms")
    if latency is not None:
        if isinstance(latency, bool) or not isinstance(latency, int):
            raise MalformedRecord(line, "latency_ms must be an integer")
        if latency < 0:
            raise MalformedRecord(line, "latency_ms must be nonnegative")
    extras = {k: v for k, v in obj.items() if k not in known}
    return Response(observable=observable, outcome=outcome, latency_ms=latency, extras=extras)


def record_from_json(obj: Any, line: int = 0) -> TrialRecord:
    """Build a validated TrialRecord from a decoded JSON object."""
    if not isinstance(obj, dict):
        raise MalformedRecord(line, "each line must be a JSON object")
    schema = obj.get("schema")
    if schema != TRIAL_SCHEMA:
        raise MalformedRecord(line, f"schema must be {TRIAL_SCHEMA!r}, got {schema!r}")
    known = {"schema", "subject_id", "experiment_id", "protocol", "responses", "presented_at"}
    subject_id = obj.get("subject_id")
    experiment_id = obj.get("experiment_id")
    if not isinstance(subject_id, str) or not subject_id:
        raise MalformedRecord(line, "subject_id must be a nonempty string")
    if not isinstance(experiment_id, str) or not experiment_id:
        raise MalformedRecord(line, "experiment_id must be a nonempty string")
    try:
        protocol = Protocol(obj.get("protocol"))
    except ValueError:
        raise MalformedRecord(
            line, f"protocol must be A_ONLY or B_THEN_A, got {obj.get('protocol')!r}"
        ) from None
    responses_raw = obj.get("responses")
    if not isinstance(responses_raw, list):
        raise MalformedRecord(line, "responses must be a list")
    responses = tuple(_parse_response(r, line) for r in responses_raw)
    presented_at = obj.get("presented_at")
    if presented_at is not None and not isinstance(presented_at, str):
        raise MalformedRecord(line, "presented_at must be a string timestamp")
    record = TrialRecord(
        subject_id=subject_id,
        experiment_id=experiment_id,
        protocol=protocol,
        responses=responses,
        presented_at=presented_at,
        extras={k: v for k, v in obj.items() if k not in known},
    )
    error = _record_shape_error(record)
    if error is not None:
        raise MalformedRecord(line, error)
    return record


def record_to_json(record: TrialRecord) -> dict:
    """Canonical JSON object for a record (fixed field order, extras last)."""
    responses = []
    for response in record.responses:
        out: dict[str, Any] = {
            "observable": response.observable,
            "outcome": response.outcome.value,
        }
        if response.latency_ms is not None:
            out["latency_ms"] = response.latency_ms
        for key in sorted(response.extras):
            out[key] = response.extras[key]
        responses.append(out)
    obj: dict[str, Any] = {
        "schema": TRIAL_SCHEMA,
        "subject_id": record.subject_id,
        "experiment_id": record.experiment_id,
        "protocol": record.protocol.value,
        "responses": responses,
    }
    if record.presented_at is not None:
        obj["presented_at"] = record.presented_at
    for key in sorted(record.extras):
        obj[key] = record.extras[key]
    return obj


def serialize_record(record: TrialRecord) -> str:
    return json.dumps(record_to_json(record), separators=(",", ":"))


def serialize_trials(dataset: Dataset) -> str:
    """Canonical JSONL text for a dataset (one line per record)."""
    return "".join(serialize_record(record) + "\n" for record in dataset.records)


def _iter_lines(source: bytes | str | IO | Iterable[str]) -> Iterator[str]:
    if isinstance(source, bytes):
        yield from io.StringIO(source.decode("utf-8")).readlines()
    elif isinstance(source, str):
        yield from io.StringIO(source).readlines()
    elif hasattr(source, "read"):
        for raw in source:
            yield raw.decode("utf-8") if isinstance(raw, bytes) else raw
    else:
        yield from source


def parse_trials(source: bytes | str | IO | Iterable[str], strict: bool = False) -> ParseResult:
    """Parse line-delimited trial records.

    Returns every well-formed record plus per-line diagnostics for the rest.
    With ``strict=True`` the first violation raises MalformedRecord or
    DuplicateSubject instead of being collected.
    """
    records: list[TrialRecord] = []
    diagnostics: list[ParseDiagnostic] = []
    seen: set[tuple[str, str]] = set()
    for line_no, raw in enumerate(_iter_lines(source), start=1):
        text = raw.strip()
        if not text:
            continue
        try:
            try:
                obj = json.loads(text)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, f"invalid JSON: {exc.msg}") from None
            record = record_from_json(obj, line_no)
            key = (record.subject_id, record.experiment_id)
            if key in seen:
                raise DuplicateSubject(record.subject_id, record.experiment_id, line_no)
            seen.add(key)
            records.append(record)
        except MalformedRecord as exc:
            if strict:
                raise
            diagnostics.append(ParseDiagnostic(line_no, "malformed-record", exc.reason))
        except DuplicateSubject as exc:
            if strict:
                raise
            diagnostics.append(
                ParseDiagnostic(
                    line_no,
                    "duplicate-subject",
                    f"subject {exc.subject_id!r} already recorded for "
                    f"experiment {exc.experiment_id!r}",
                )
            )
    return ParseResult(dataset=Dataset(records=records), diagnostics=diagnostics)


def load_trials(path: str, strict: bool = False) -> ParseResult:
    with open(path, "rb") as handle:
        return parse_trials(handle, strict=strict)


def validate_dataset(dataset: Dataset) -> ValidationReport:
    """Check every type invariant; findings are data, not failures."""
    findings: list[Finding] = []
    if not dataset.records:
        findings.append(Finding("empty-dataset", "no records"))
    seen: set[tuple[str, str]] = set()
    for record in dataset.records:
        error = _record_shape_error(record)
        if error is not None:
            findings.append(
                Finding("protocol-shape", error, record.subject_id, record.experiment_id)
            )
        for response in record.responses:
            if response.observable not in ("A", "B"):
                findings.append(
                    Finding(
                        "unknown-observable",
                        f"observable {response.observable!r} is not in the (B, A) pair",
                        record.subject_id,
                        record.experiment_id,
                    )
                )
        key = (record.subject_id, record.experiment_id)
        if key in seen:
            findings.append(
                Finding(
                    "duplicate-subject",
                    "one session per subject and experiment",
                    record.subject_id,
                    record.experiment_id,
                )
            )
        seen.add(key)
    return ValidationReport(findings=findings)


def partition_by_experiment(dataset: Dataset) -> dict[str, Dataset]:
    """Split into per-experiment datasets; parts are disjoint and cover the input."""
    parts: dict[str, Dataset] = {}
    for record in dataset.records:
        part = parts.get(record.experiment_id)
        if part is None:
            part = Dataset(
                records=[],
                observables=dataset.observables,
                schema_version=dataset.schema_version,
            )
            parts[record.experiment_id] = part
        part.records.append(record)
    return parts
