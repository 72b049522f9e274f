"""Unit handling for entropy-valued quantities.

Everything is computed internally in nats; conversion to the requested unit
(or to the normalized scale, where the maximum over K outcomes is 1) happens
once, at the output boundary.
"""

from __future__ import annotations

import math

LN2 = math.log(2.0)

UNITS = ("bits", "nats")


def unit_divisor(unit: str) -> float:
    """Nats per one unit of `unit` ('bits' or 'nats')."""
    if unit == "bits":
        return LN2
    if unit == "nats":
        return 1.0
    raise ValueError(f"unknown unit {unit!r}; expected one of {UNITS}")


def from_nats(value_nats: float, unit: str, k: int | None = None, normalized: bool = False) -> float:
    """Convert a value in nats to the requested unit.

    Normalized values divide by log K (same-base log, so the result does not
    depend on the unit); `k` is required in that case.
    """
    if normalized:
        if k is None:
            raise ValueError("normalization requires the outcome count K")
        unit_divisor(unit)  # still reject unknown units
        return value_nats / math.log(k)
    return value_nats / unit_divisor(unit)
