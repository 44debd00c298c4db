"""Synthetic trial datasets with prescribed contextual statistics.

Exact-count mode deterministically realises the requested probabilities as
integer counts (for bit-exact fixtures); Bernoulli mode draws independent
seeded outcomes (for property tests and power studies).

Randomness comes from splitmix64, chosen because it is tiny, named, and
portable across languages. Seeding rule: the generator state is the 64-bit
seed itself. Draw order is fixed and documented: every A-only subject in
sequence consumes one uniform (the A outcome), then every B-then-A subject
consumes two (B first, then A). A uniform draw is ``(z >> 11) * 2**-53``
where z is the next splitmix64 output; an outcome is plus when the uniform
is strictly below the requested probability. The generator identity
("splitmix64/v1") and seed are recorded in the dataset metadata.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

from .errors import UnrepresentableSpec
from .trials import Dataset, Outcome, Protocol, Response, TrialRecord

RNG_ID = "splitmix64/v1"

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """splitmix64 sequence; state advances by the golden-gamma increment."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def bernoulli(self, p: float) -> bool:
        return self.uniform() < p


class SimulationMode(Enum):
    EXACT_COUNTS = "exact_counts"
    BERNOULLI = "bernoulli"


@dataclass(frozen=True)
class SimulationSpec:
    """Target statistics for one simulated experiment."""

    experiment_id: str
    n_a_only: int
    n_b_then_a: int
    p_a_plus: float
    p_b_plus: float
    p_a_plus_given_b_plus: float
    p_a_plus_given_b_minus: float
    mode: SimulationMode = SimulationMode.BERNOULLI

    def __post_init__(self) -> None:
        for name in ("p_a_plus", "p_b_plus", "p_a_plus_given_b_plus", "p_a_plus_given_b_minus"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.n_a_only < 0 or self.n_b_then_a < 0:
            raise ValueError("counts must be nonnegative")


def _nearest_count(p: float, n: int, what: str) -> int:
    """Nearest-integer count for probability p over n, refusing ties."""
    target = p * n
    lower = math.floor(target)
    frac = target - lower
    if abs(frac - 0.5) < 1e-9:
        raise UnrepresentableSpec(
            f"{what} = {p} over {n} sits halfway between integer counts"
        )
    nearest = lower if frac < 0.5 else lower + 1
    return min(nearest, n)


def _a_only_record(experiment_id: str, index: int, outcome: Outcome) -> TrialRecord:
    return TrialRecord(
        subject_id=f"s{index:03d}",
        experiment_id=experiment_id,
        protocol=Protocol.A_ONLY,
        responses=(Response("A", outcome),),
    )


def _b_then_a_record(
    experiment_id: str, index: int, b: Outcome, a: Outcome
) -> TrialRecord:
    return TrialRecord(
        subject_id=f"s{index:03d}",
        experiment_id=experiment_id,
        protocol=Protocol.B_THEN_A,
        responses=(Response("B", b), Response("A", a)),
    )


def simulate_exact_counts(spec: SimulationSpec) -> Dataset:
    """Deterministic dataset whose estimated statistics reproduce the spec.

    Counts are resolved by nearest-integer rounding; an ambiguous rounding
    (probability times denominator halfway between integers) raises
    UnrepresentableSpec rather than being silently redistributed.
    """
    if spec.n_a_only < 1 or spec.n_b_then_a < 1:
        raise UnrepresentableSpec(
            "exact-count simulation needs n_a_only >= 1 and n_b_then_a >= 1"
        )
    n_a_plus = _nearest_count(spec.p_a_plus, spec.n_a_only, "p_a_plus")
    n_b_plus = _nearest_count(spec.p_b_plus, spec.n_b_then_a, "p_b_plus")
    n_b_minus = spec.n_b_then_a - n_b_plus
    n_app = (
        _nearest_count(spec.p_a_plus_given_b_plus, n_b_plus, "p_a_plus_given_b_plus")
        if n_b_plus
        else 0
    )
    n_apm = (
        _nearest_count(spec.p_a_plus_given_b_minus, n_b_minus, "p_a_plus_given_b_minus")
        if n_b_minus
        else 0
    )
    records: list[TrialRecord] = []
    index = 0
    for i in range(spec.n_a_only):
        index += 1
        outcome = Outcome.PLUS if i < n_a_plus else Outcome.MINUS
        records.append(_a_only_record(spec.experiment_id, index, outcome))
    for i in range(n_b_plus):
        index += 1
        a = Outcome.PLUS if i < n_app else Outcome.MINUS
        records.append(_b_then_a_record(spec.experiment_id, index, Outcome.PLUS, a))
    for i in range(n_b_minus):
        index += 1
        a = Outcome.PLUS if i < n_apm else Outcome.MINUS
        records.append(_b_then_a_record(spec.experiment_id, index, Outcome.MINUS, a))
    return Dataset(records=records, metadata={"generator": "exact_counts/v1"})


def simulate_bernoulli(
    spec: SimulationSpec, seed: int, rng: SplitMix64 | None = None
) -> Dataset:
    """Seeded independent draws per subject; identical (spec, seed) pairs
    yield byte-identical serialized datasets.

    Passing ``rng`` continues an existing stream (used when simulating
    several experiments from one seed); the seed is still what gets recorded.
    """
    generator = rng if rng is not None else SplitMix64(seed)
    records: list[TrialRecord] = []
    index = 0
    for _ in range(spec.n_a_only):
        index += 1
        a = Outcome.PLUS if generator.bernoulli(spec.p_a_plus) else Outcome.MINUS
        records.append(_a_only_record(spec.experiment_id, index, a))
    for _ in range(spec.n_b_then_a):
        index += 1
        b_plus = generator.bernoulli(spec.p_b_plus)
        conditional = (
            spec.p_a_plus_given_b_plus if b_plus else spec.p_a_plus_given_b_minus
        )
        a_plus = generator.bernoulli(conditional)
        records.append(
            _b_then_a_record(
                spec.experiment_id,
                index,
                Outcome.PLUS if b_plus else Outcome.MINUS,
                Outcome.PLUS if a_plus else Outcome.MINUS,
            )
        )
    return Dataset(
        records=records,
        metadata={"rng": RNG_ID, "seed": str(seed), "generator": "bernoulli/v1"},
    )


def simulate(spec: SimulationSpec, seed: int = 0, rng: SplitMix64 | None = None) -> Dataset:
    if spec.mode is SimulationMode.EXACT_COUNTS:
        return simulate_exact_counts(spec)
    return simulate_bernoulli(spec, seed, rng)


def _spec_from_json(obj: dict, mode: SimulationMode) -> SimulationSpec:
    try:
        return SimulationSpec(
            experiment_id=obj["experiment_id"],
            n_a_only=obj["n_a_only"],
            n_b_then_a=obj["n_b_then_a"],
            p_a_plus=obj["p_a_plus"],
            p_b_plus=obj["p_b_plus"],
            p_a_plus_given_b_plus=obj["p_a_plus_given_b_plus"],
            p_a_plus_given_b_minus=obj["p_a_plus_given_b_minus"],
            mode=SimulationMode(obj.get("mode", mode.value)),
        )
    except KeyError as exc:
        raise ValueError(f"simulation spec missing field {exc.args[0]!r}") from None


def load_simulation_specs(path: str) -> list[SimulationSpec]:
    """Read a simulation spec file: {"mode": ..., "experiments": [...]}."""
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    if not isinstance(doc, dict) or "experiments" not in doc:
        raise ValueError("spec file must be an object with an \"experiments\" list")
    mode = SimulationMode(doc.get("mode", SimulationMode.BERNOULLI.value))
    return [_spec_from_json(entry, mode) for entry in doc["experiments"]]
