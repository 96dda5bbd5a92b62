"""Exact scalars for lattice parameters.

Lattice questions are Diophantine, so rational parameters are kept as
:class:`fractions.Fraction` from the moment they are parsed.  Irrational
parameters cannot be represented exactly; they are carried as a float tagged
with a symbolic label so that downstream code knows any answer about them is
only numerically certified.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union


@dataclass(frozen=True)
class Irrational:
    """A real number known to be irrational, stored as a tagged float."""

    value: float
    label: str = ""

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return self.label or repr(self.value)

    def reciprocal(self) -> "Irrational":
        return Irrational(1.0 / self.value, f"1/{self.label}" if self.label else "")

    def __neg__(self) -> "Irrational":
        return Irrational(-self.value, f"-{self.label}" if self.label else "")


Scalar = Union[Fraction, Irrational, float]

_SQRT = re.compile(r"^\s*sqrt\(\s*(\d+(?:\s*/\s*\d+)?)\s*\)\s*$")


def parse_number(text: "str | int | float | Fraction | Irrational") -> Scalar:
    """Parse a user-facing number.

    Strings such as ``"3/5"``, ``"0.3"`` or ``"2"`` become exact fractions;
    ``"sqrt(N)"`` or ``"sqrt(p/q)"`` whose argument is not a rational square
    becomes an :class:`Irrational`;
    Python floats stay floats.

    >>> parse_number("3/5")
    Fraction(3, 5)
    >>> parse_number("0.3")
    Fraction(3, 10)
    """
    if isinstance(text, (Fraction, Irrational)):
        return text
    if isinstance(text, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        return text
    if not isinstance(text, str):
        raise TypeError(f"cannot parse {text!r} as a number")
    m = _SQRT.match(text)
    if m:
        try:
            x = Fraction(m.group(1).replace(" ", ""))
        except ZeroDivisionError as exc:
            raise ValueError(f"not a number: {text!r}") from exc
        rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if rn * rn == x.numerator and rd * rd == x.denominator:
            return Fraction(rn, rd)
        return Irrational(math.sqrt(x), f"sqrt({x})")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc


def to_float(x: Scalar) -> float:
    return float(x)


def is_exact(x: object) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def as_fraction(x: Scalar) -> "Fraction | None":
    """Exact rational value of ``x``, or ``None`` when ``x`` is irrational.

    Floats are taken at their exact binary value, so two floats only
    coincide when they are bit-identical.
    """
    if isinstance(x, Irrational):
        return None
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(float(x))


def number_to_json(x: Scalar):
    if isinstance(x, Irrational):
        return {"irrational": x.label, "value": x.value}
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return float(x)


def number_from_json(obj) -> Scalar:
    if isinstance(obj, dict):
        if "irrational" in obj:
            label = obj["irrational"]
            if "value" in obj:
                return Irrational(float(obj["value"]), str(label))
            parsed = parse_number(label)
            if not isinstance(parsed, Irrational):
                raise ValueError(f"{label!r} is not irrational")
            return parsed
        raise ValueError(f"unrecognised number object {obj!r}")
    return parse_number(obj)
