"""Two-amplitude wave-function representation of the measured statistics.

Each outcome x of the second test gets a complex amplitude

    phi(x) = sqrt(p(B=+) p(A=x|B=+)) + e^{i theta(x)} sqrt(p(B=-) p(A=x|B=-))

When the phases are the ones solved from the interference coefficients, the
squared moduli reproduce the measured p(A=x) (the probability rule for
amplitudes) and the state is normalized. The two amplitudes span a
two-dimensional Hilbert space; the second test acts on it as the
multiplication operator x * phi(x) with x = +1, -1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import UndefinedTerm
from .estimation import ContextualStatistics
from .trials import DEFAULT_OBSERVABLES, ObservableId, Outcome


@dataclass(frozen=True)
class WaveFunction:
    """Amplitudes over the (plus, minus) basis of the second test."""

    phi_plus: complex
    phi_minus: complex
    reference_observables: tuple[ObservableId, ObservableId] = DEFAULT_OBSERVABLES
    phases: tuple[float, float] = (0.0, 0.0)


def _amplitude(statistics: ContextualStatistics, x: Outcome, phase: float) -> complex:
    terms = []
    for b in (Outcome.PLUS, Outcome.MINUS):
        weight = statistics.p_b(b)
        conditional = statistics.conditional(x, b)
        if conditional is None:
            if weight != 0.0:
                raise UndefinedTerm(
                    f"p(A={x.value}|B={b.value}) is undefined but "
                    f"p(B={b.value}) = {weight} > 0"
                )
            terms.append(0.0)
        else:
            product = weight * conditional
            if product < 0.0:
                raise ValueError("probability product under the radical is negative")
            terms.append(product)
    return math.sqrt(terms[0]) + cmath.exp(1j * phase) * math.sqrt(terms[1])


def build_wave_function(
    statistics: ContextualStatistics,
    phases: tuple[float, float],
    reference_observables: tuple[ObservableId, ObservableId] = DEFAULT_OBSERVABLES,
) -> WaveFunction:
    """Direct complex evaluation of the amplitude formula for both outcomes.

    ``phases`` is (theta(+), theta(-)), each in [0, pi].
    """
    for phase in phases:
        if not 0.0 <= phase <= math.pi:
            raise ValueError(f"phase {phase} outside [0, pi]")
    return WaveFunction(
        phi_plus=_amplitude(statistics, Outcome.PLUS, phases[0]),
        phi_minus=_amplitude(statistics, Outcome.MINUS, phases[1]),
        reference_observables=reference_observables,
        phases=phases,
    )


def born_probabilities(wave: WaveFunction) -> tuple[float, float]:
    """(|phi(+)|^2, |phi(-)|^2)."""
    return abs(wave.phi_plus) ** 2, abs(wave.phi_minus) ** 2


def scalar_product(first: WaveFunction, second: WaveFunction) -> complex:
    """Hilbert-space inner product, conjugate-linear in the second argument."""
    return (
        first.phi_plus * second.phi_plus.conjugate()
        + first.phi_minus * second.phi_minus.conjugate()
    )


def apply_observable(wave: WaveFunction) -> WaveFunction:
    """Multiplication operator of the second test: phi(x) -> x phi(x)."""
    return WaveFunction(
        phi_plus=wave.phi_plus,
        phi_minus=-wave.phi_minus,
        reference_observables=wave.reference_observables,
        phases=wave.phases,
    )


def mean_value(wave: WaveFunction) -> float:
    """Expected value of the second test in this state: |phi(+)|^2 - |phi(-)|^2."""
    return scalar_product(apply_observable(wave), wave).real
