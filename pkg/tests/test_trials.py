import json

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from qontext.errors import DuplicateSubject, MalformedRecord
from qontext.trials import (
    Dataset,
    Outcome,
    Protocol,
    Response,
    TrialRecord,
    parse_trials,
    partition_by_experiment,
    record_from_json,
    serialize_record,
    serialize_trials,
    validate_dataset,
)

EXAMPLE_LINE = (
    '{"schema":"qontext/trial/v1","subject_id":"s01","experiment_id":"exp1",'
    '"protocol":"A_ONLY","responses":[{"observable":"A","outcome":"plus"}]}'
)


class TestParse:
    def test_single_a_only_line(self):
        result = parse_trials(EXAMPLE_LINE)
        assert result.ok
        (record,) = result.dataset.records
        assert record.protocol is Protocol.A_ONLY
        assert record.subject_id == "s01"
        assert record.outcome_of("A") is Outcome.PLUS

    def test_a_only_with_two_responses_is_malformed(self):
        line = json.loads(EXAMPLE_LINE)
        line["responses"].append({"observable": "B", "outcome": "minus"})
        result = parse_trials(json.dumps(line))
        assert not result.dataset.records
        (diagnostic,) = result.diagnostics
        assert diagnostic.code == "malformed-record"
        with pytest.raises(MalformedRecord):
            parse_trials(json.dumps(line), strict=True)

    def test_exp1_fixture_group_sizes(self, exp1):
        by_protocol = {}
        for record in exp1.records:
            by_protocol[record.protocol] = by_protocol.get(record.protocol, 0) + 1
        assert by_protocol[Protocol.A_ONLY] == 26
        assert by_protocol[Protocol.B_THEN_A] == 27

    def test_duplicate_subject_collected_and_raised(self):
        text = EXAMPLE_LINE + "\n" + EXAMPLE_LINE + "\n"
        result = parse_trials(text)
        assert len(result.dataset.records) == 1
        (diagnostic,) = result.diagnostics
        assert diagnostic.code == "duplicate-subject"
        with pytest.raises(DuplicateSubject):
            parse_trials(text, strict=True)

    def test_invalid_json_line(self):
        result = parse_trials("{nope\n")
        assert result.diagnostics[0].code == "malformed-record"
        assert "invalid JSON" in result.diagnostics[0].message

    def test_bytes_and_text_inputs_agree(self):
        from_text = parse_trials(EXAMPLE_LINE)
        from_bytes = parse_trials(EXAMPLE_LINE.encode("utf-8"))
        assert from_text.dataset.records == from_bytes.dataset.records

    def test_unknown_fields_preserved(self):
        line = json.loads(EXAMPLE_LINE)
        line["operator"] = "room 3"
        line["responses"][0]["device"] = "key"
        record = record_from_json(line)
        assert record.extras == {"operator": "room 3"}
        assert record.responses[0].extras == {"device": "key"}
        round_tripped = record_from_json(json.loads(serialize_record(record)))
        assert round_tripped == record


class TestValidate:
    def test_fixture_is_clean(self, all_experiments):
        assert validate_dataset(all_experiments).ok

    def test_wrong_order_under_b_then_a(self):
        record = TrialRecord(
            subject_id="s1",
            experiment_id="e1",
            protocol=Protocol.B_THEN_A,
            responses=(
                Response("A", Outcome.PLUS),
                Response("B", Outcome.PLUS),
            ),
        )
        report = validate_dataset(Dataset(records=[record]))
        assert any(f.code == "protocol-shape" for f in report.findings)

    def test_empty_dataset_finding(self):
        report = validate_dataset(Dataset(records=[]))
        assert [f.code for f in report.findings] == ["empty-dataset"]


class TestPartition:
    def test_parts_cover_and_are_disjoint(self, all_experiments):
        parts = partition_by_experiment(all_experiments)
        total = sum(len(p) for p in parts.values())
        assert total == len(all_experiments)
        keys = [
            (r.subject_id, r.experiment_id)
            for part in parts.values()
            for r in part.records
        ]
        assert len(keys) == len(set(keys))

    def test_single_experiment_identity(self, exp1):
        parts = partition_by_experiment(exp1)
        assert list(parts) == ["exp1"]
        assert parts["exp1"].records == exp1.records

    def test_empty_dataset(self):
        assert partition_by_experiment(Dataset(records=[])) == {}


# --- property tests ---------------------------------------------------------

_ids = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyz0123456789-_", min_size=1, max_size=12
)
_outcomes = st.sampled_from([Outcome.PLUS, Outcome.MINUS])
_latency = st.one_of(st.none(), st.integers(min_value=0, max_value=60_000))
# the x_ prefix keeps generated keys disjoint from the schema's field names
_extras = st.dictionaries(
    st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=6).map(
        lambda k: f"x_{k}"
    ),
    st.one_of(st.integers(), st.text(max_size=10), st.booleans()),
    max_size=2,
)


@st.composite
def trial_records(draw):
    protocol = draw(st.sampled_from([Protocol.A_ONLY, Protocol.B_THEN_A]))
    observables = ("A",) if protocol is Protocol.A_ONLY else ("B", "A")
    responses = tuple(
        Response(
            observable=o,
            outcome=draw(_outcomes),
            latency_ms=draw(_latency),
            extras=draw(_extras),
        )
        for o in observables
    )
    return TrialRecord(
        subject_id=draw(_ids),
        experiment_id=draw(_ids),
        protocol=protocol,
        responses=responses,
        presented_at=draw(st.one_of(st.none(), st.just("2003-05-12T10:00:00Z"))),
        extras=draw(_extras),
    )


@st.composite
def datasets(draw):
    records = draw(
        st.lists(
            trial_records(),
            max_size=5,
            unique_by=lambda r: (r.subject_id, r.experiment_id),
        )
    )
    return Dataset(records=records)


@given(datasets())
@settings(max_examples=100, suppress_health_check=[HealthCheck.too_slow])
def test_serialize_parse_round_trip(dataset):
    first = parse_trials(serialize_trials(dataset))
    assert first.ok
    second = parse_trials(serialize_trials(first.dataset))
    assert second.ok
    assert second.dataset.records == first.dataset.records == dataset.records


_CORRUPTIONS = [
    lambda obj: obj.pop("schema"),
    lambda obj: obj.update(schema="qontext/trial/v0"),
    lambda obj: obj.pop("subject_id"),
    lambda obj: obj.update(subject_id=""),
    lambda obj: obj.pop("protocol"),
    lambda obj: obj.update(protocol="AB"),
    lambda obj: obj.pop("responses"),
    lambda obj: obj.update(responses=obj["responses"] + obj["responses"]),
    lambda obj: obj.update(responses=list(reversed(obj["responses"])))
    if len(obj["responses"]) == 2
    else obj.pop("responses"),
    lambda obj: obj["responses"][0].update(outcome="PLUS"),
    lambda obj: obj["responses"][0].update(observable="C"),
    lambda obj: obj["responses"][0].update(latency_ms=-1),
    lambda obj: obj["responses"][0].update(latency_ms=2.5),
]


@given(trial_records(), st.integers(min_value=0, max_value=len(_CORRUPTIONS) - 1))
@settings(max_examples=200)
def test_corrupted_lines_are_rejected(record, corruption_index):
    obj = json.loads(serialize_record(record))
    _CORRUPTIONS[corruption_index](obj)
    result = parse_trials(json.dumps(obj))
    assert not result.dataset.records
    assert result.diagnostics and result.diagnostics[0].code == "malformed-record"
