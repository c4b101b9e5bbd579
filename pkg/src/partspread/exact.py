"""Exact comparison of rational powers.

Spreadness thresholds are values of the form base**exponent with rational
base > 0 and rational exponent > 0 (e.g. the best spread factor of a family
is (|F|/|F(X)|)**(1/|X|)).  Comparing two such values reduces to comparing
integer powers of rationals, so every decision here is exact; floats only
ever appear in display output.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from math import lcm


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {value!r}")


@total_ordering
class ExactPow:
    """The positive real base**exponent, compared without floating point."""

    __slots__ = ("base", "exponent", "infinite")

    def __init__(self, base, exponent=1, infinite: bool = False):
        if infinite:
            self.base = None
            self.exponent = None
            self.infinite = True
            return
        base = as_fraction(base)
        exponent = as_fraction(exponent)
        if base <= 0:
            raise ValueError("base must be positive")
        if exponent <= 0:
            raise ValueError("exponent must be positive")
        self.base = base
        self.exponent = exponent
        self.infinite = False

    @classmethod
    def infinity(cls) -> "ExactPow":
        return cls(1, 1, infinite=True)

    @staticmethod
    def _coerce(other) -> "ExactPow":
        if isinstance(other, ExactPow):
            return other
        return ExactPow(as_fraction(other))

    def _cmp(self, other) -> int:
        other = self._coerce(other)
        if self.infinite or other.infinite:
            if self.infinite and other.infinite:
                return 0
            return 1 if self.infinite else -1
        # a**(p/q) vs b**(r/s): raise both to the power lcm(q, s)
        scale = lcm(self.exponent.denominator, other.exponent.denominator)
        le = int(self.exponent * scale)
        re = int(other.exponent * scale)
        lhs = self.base**le
        rhs = other.base**re
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other) -> bool:
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __hash__(self) -> int:
        if self.infinite:
            return hash("ExactPow.inf")
        if self.exponent == 1:
            return hash(self.base)
        return hash((self.base, self.exponent))

    def __float__(self) -> float:
        if self.infinite:
            return float("inf")
        return float(self.base) ** float(self.exponent)

    def __repr__(self) -> str:
        if self.infinite:
            return "ExactPow(inf)"
        if self.exponent == 1:
            return f"ExactPow({self.base})"
        return f"ExactPow({self.base})**({self.exponent})"


def parse_ratio(text: str) -> Fraction:
    """Parse 'p/q' or a plain integer/decimal string into a Fraction."""
    return Fraction(text)
