"""Display rounding used at every reporting boundary.

All probabilities are carried at full float precision internally; the
4-decimal, half-away-from-zero rounding below is applied when rendering
tables and, in published-compatibility pooling, when mirroring the
arithmetic that produced the published summary rows.
"""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal

PLACES = 4
_QUANTUM = Decimal(1).scaleb(-PLACES)


def round_half_away(value: float, places: int = PLACES) -> float:
    """Round to ``places`` decimals with ties going away from zero."""
    quantum = Decimal(1).scaleb(-places) if places != PLACES else _QUANTUM
    return float(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


def display(value: float, places: int = PLACES) -> str:
    """Fixed-width decimal string with a period separator, e.g. ``0.6923``."""
    return f"{round_half_away(value, places):.{places}f}"
