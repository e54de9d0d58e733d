"""Exact Gaussian-rational scalars: a + b*i with rational a, b.

This is the coefficient field for everything in the package.  Both parts are
`fractions.Fraction`, so arithmetic is exact and hashing/equality are
structural.  The module also owns the bit-exact text syntax for scalars used
by the problem-file parser and by report serialization:

* input accepts ``-3``, ``5/7``, ``i``, ``3i``, ``2/3*i``, ``1/2-3i``, ...
* canonical output is ``a/b``, ``c/d*i`` or ``a/b+c/d*i`` with zero parts
  suppressed and a unit imaginary coefficient written bare (``i``, ``1/2-i``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError

__all__ = ["GaussianRational", "GR", "parse_scalar", "format_scalar"]


@dataclass(frozen=True)
class GaussianRational:
    """An exact complex scalar with rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        if not isinstance(other, GaussianRational):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        norm = other.re * other.re + other.im * other.im
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_one(self) -> bool:
        return self.re == 1 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"GR({format_scalar(self)!r})"


def GR(re: int | str | Fraction | GaussianRational = 0, im: int | Fraction = 0) -> GaussianRational:
    """Convenience constructor: ``GR(2)``, ``GR('1/2-3i')``, ``GR(0, 1)``."""
    if isinstance(re, GaussianRational):
        return re
    if isinstance(re, str):
        return parse_scalar(re)
    return GaussianRational(Fraction(re), Fraction(im))


ZERO = GR(0)
ONE = GR(1)
I_UNIT = GR(0, 1)


def _format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _format_imaginary(q: Fraction) -> str:
    # q > 0 assumed; unit coefficient stays implicit.
    if q == 1:
        return "i"
    return f"{_format_fraction(q)}*i"


def format_scalar(value: GaussianRational) -> str:
    """Canonical text for a scalar; inverse of `parse_scalar` bit-exactly."""
    if value.im == 0:
        return _format_fraction(value.re)
    imag = _format_imaginary(abs(value.im))
    if value.re == 0:
        return imag if value.im > 0 else "-" + imag
    sign = "+" if value.im > 0 else "-"
    return f"{_format_fraction(value.re)}{sign}{imag}"


_SCALAR_TOKEN = re.compile(r"\s*(\d+(?:/\d+)?i?|i|[+\-*])")


def _tokenize_scalar(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _SCALAR_TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise InputError(f"bad scalar syntax near '{text[pos:]}'")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def _atom_value(token: str) -> GaussianRational:
    if token == "i":
        return I_UNIT
    if token.endswith("i"):
        return GaussianRational(Fraction(0), Fraction(token[:-1]))
    return GaussianRational(Fraction(token), Fraction(0))


def parse_scalar(text: str) -> GaussianRational:
    """Parse the scalar syntax: signed sums of products of rationals and ``i``."""
    tokens = _tokenize_scalar(text)
    if not tokens:
        raise InputError("empty scalar")
    total = ZERO
    pos = 0

    def parse_term() -> GaussianRational:
        nonlocal pos
        sign = ONE
        while pos < len(tokens) and tokens[pos] in "+-":
            if tokens[pos] == "-":
                sign = -sign
            pos += 1
        if pos >= len(tokens) or tokens[pos] in "+-*":
            raise InputError(f"bad scalar syntax in '{text}'")
        value = _atom_value(tokens[pos])
        pos += 1
        while pos < len(tokens) and tokens[pos] == "*":
            pos += 1
            if pos >= len(tokens) or tokens[pos] in "+-*":
                raise InputError(f"bad scalar syntax in '{text}'")
            value = value * _atom_value(tokens[pos])
            pos += 1
        return sign * value

    total = parse_term()
    while pos < len(tokens):
        if tokens[pos] not in "+-":
            raise InputError(f"bad scalar syntax in '{text}'")
        total = total + parse_term()
    return total
