"""Exact scalars: rationals (``fractions.Fraction``) and Gaussian rationals."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union


class Field(str, enum.Enum):
    RAT = "RAT"
    GAUSS = "GAUSS"


class FieldMismatchError(ValueError):
    pass


@dataclass(frozen=True, slots=True, eq=False)
class Gauss:
    """An element re + im*i of Q(i)."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, other: Gauss) -> Gauss:
        other = as_gauss(other)
        return Gauss(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other: Gauss) -> Gauss:
        other = as_gauss(other)
        return Gauss(self.re - other.re, self.im - other.im)

    def __rsub__(self, other: Gauss) -> Gauss:
        return as_gauss(other) - self

    def __neg__(self) -> Gauss:
        return Gauss(-self.re, -self.im)

    def __mul__(self, other: Gauss) -> Gauss:
        other = as_gauss(other)
        return Gauss(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other: Gauss) -> Gauss:
        other = as_gauss(other)
        norm = other.re * other.re + other.im * other.im
        if not norm:
            raise ZeroDivisionError("division by zero in Q(i)")
        num = self * other.conjugate()
        return Gauss(num.re / norm, num.im / norm)

    def __rtruediv__(self, other: Gauss) -> Gauss:
        return as_gauss(other) / self

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        if isinstance(other, Gauss):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self) -> int:
        # Real elements hash like the equal rational.
        return hash(self.re) if not self.im else hash((self.re, self.im))

    def conjugate(self) -> Gauss:
        return Gauss(self.re, -self.im)

    def __str__(self) -> str:
        return format_scalar(self, Field.GAUSS)


Scalar = Union[Fraction, Gauss]


def as_gauss(x: object) -> Gauss:
    if isinstance(x, Gauss):
        return x
    if isinstance(x, (int, Fraction)):
        return Gauss(Fraction(x), Fraction(0))
    raise TypeError(f"cannot treat {x!r} as a Gaussian rational")


def conj(x: Scalar) -> Scalar:
    return x.conjugate() if isinstance(x, Gauss) else x


def coerce(x: object, field: Field) -> Scalar:
    """Bring ints, Fractions, Gauss values or scalar text into ``field``."""
    if isinstance(x, str):
        return parse_scalar(x, field)
    if field is Field.RAT:
        if isinstance(x, Gauss):
            if x.im:
                raise FieldMismatchError(f"{x} is not rational")
            return x.re
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise TypeError(f"not an exact scalar: {x!r}")
    return as_gauss(x)


# --- text encoding ---------------------------------------------------------

_RAT = r"[+-]?\d+(?:/\d+)?"
_RAT_RE = re.compile(rf"^{_RAT}$")


def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _parse_rat(text: str) -> Fraction:
    if not _RAT_RE.match(text):
        raise ValueError(f"bad rational {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_scalar(x: Scalar, field: Field) -> str:
    """``n/d`` or ``n`` for RAT; ``a/b+c/di`` (imaginary part always present) for GAUSS."""
    if field is Field.RAT:
        return _fmt_rat(coerce(x, Field.RAT))
    g = as_gauss(x)
    im = _fmt_rat(abs(g.im))
    return f"{_fmt_rat(g.re)}{'-' if g.im < 0 else '+'}{im}i"


def parse_scalar(text: str, field: Field) -> Scalar:
    """Inverse of :func:`format_scalar`; also accepts ``3i``, ``-i`` and bare rationals for GAUSS."""
    text = text.strip().replace(" ", "")
    if field is Field.RAT:
        return _parse_rat(text)
    if not text:
        raise ValueError("empty scalar")
    if _RAT_RE.match(text):
        return Gauss(_parse_rat(text))
    m = re.match(rf"^(?P<re>{_RAT}(?=[+-]))?(?P<im>[+-]?(?:\d+(?:/\d+)?)?)i$", text)
    if not m:
        raise ValueError(f"bad Gaussian rational {text!r}")
    re_part = _parse_rat(m.group("re")) if m.group("re") else Fraction(0)
    im_text = m.group("im")
    if im_text in ("", "+"):
        im_part = Fraction(1)
    elif im_text == "-":
        im_part = Fraction(-1)
    else:
        im_part = _parse_rat(im_text)
    return Gauss(re_part, im_part)
