"""Canonical wire format for exact rationals.

Every numeric value that crosses a process boundary is a string ``"p/q"``
in lowest terms with q > 0; nothing is ever serialized as a float.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def format_fraction(value: Fraction) -> str:
    """Render ``value`` as ``"p/q"`` (always with an explicit denominator)."""
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    """Parse ``"p/q"`` or a bare integer string into an exact Fraction."""
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string, got {text!r}")
    parts = text.strip().split("/")
    if len(parts) == 1:
        return Fraction(int(parts[0]))
    if len(parts) == 2:
        num, den = int(parts[0]), int(parts[1])
        if den <= 0:
            raise ValueError(f"denominator must be positive in {text!r}")
        return Fraction(num, den)
    raise ValueError(f"malformed rational {text!r}")
