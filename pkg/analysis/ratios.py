"""
Exact coverage ratios with a fixed decimal rendering.
"""
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from typing import Any, Dict

DECIMAL_PLACES = Decimal("0.0001")


@dataclass(frozen=True)
class Ratio:
    """
    numerator/denominator kept unreduced so reports show what was counted.

    An empty denominator means there was nothing to cover and reads as 1.
    """

    numerator: int
    denominator: int

    @property
    def value(self) -> Fraction:
        if self.denominator == 0:
            return Fraction(1)
        return Fraction(self.numerator, self.denominator)

    @property
    def decimal(self) -> Decimal:
        value = self.value
        return (Decimal(value.numerator) / Decimal(value.denominator)).quantize(
            DECIMAL_PLACES, rounding=ROUND_HALF_EVEN
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "numerator": self.numerator,
            "denominator": self.denominator,
            "decimal": str(self.decimal),
        }

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator} ({self.decimal})"
