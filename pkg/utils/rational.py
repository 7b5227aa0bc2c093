"""
Exact rational helpers: parsing and canonical formatting of Fractions.
"""

from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

RationalLike = Union[Fraction, int, str]


def to_rational(value: RationalLike) -> Fraction:
    """
    Coerce an int, Fraction or "p/q" string into a Fraction.

    Floats are rejected: every value in this package must be exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"Cannot convert {type(value).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" (optional sign, no decimals, no whitespace inside)."""
    s = text.strip()
    if not s or "." in s or "e" in s.lower():
        raise ValueError(f"Not an exact rational: {text!r}")
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Not an exact rational: {text!r}") from e
    return value


def format_rational(value: RationalLike) -> str:
    """Canonical string: "p" when the denominator is 1, "p/q" otherwise."""
    return str(to_rational(value))


def to_vector(values: Iterable[RationalLike]) -> Tuple[Fraction, ...]:
    return tuple(to_rational(v) for v in values)


def to_rows(rows: Iterable[Iterable[RationalLike]]) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(to_vector(row) for row in rows)


def format_vector(values: Sequence[RationalLike]) -> List[str]:
    return [format_rational(v) for v in values]


def format_rows(rows: Sequence[Sequence[RationalLike]]) -> List[List[str]]:
    return [format_vector(row) for row in rows]


def is_integral(value: Fraction) -> bool:
    return value.denominator == 1
