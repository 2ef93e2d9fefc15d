"""Exact signed rationals in canonical form.

Phases and shift amounts are rationals; every computation on them must be
exact, so this module never touches floating point.
"""

from __future__ import annotations

import re
from math import gcd
from typing import Union

__all__ = ["Rational", "RationalError", "rat_make", "rat_arith", "rat_is_integer", "rat_to_integer"]

_TEXT_RE = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?$")


class RationalError(ValueError):
    """Raised for malformed rationals (zero denominator, bad text, non-integer coercion)."""


class Rational:
    """A rational ``numerator/denominator`` with ``denominator >= 1`` and ``gcd == 1``.

    Because the representation is canonical, structural equality of the two
    fields is semantic equality.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, numerator: int = 0, denominator: int = 1) -> None:
        if not isinstance(numerator, int) or not isinstance(denominator, int):
            raise TypeError("Rational components must be integers")
        if denominator == 0:
            raise RationalError(f"zero denominator in {numerator}/0")
        if denominator < 0:
            numerator, denominator = -numerator, -denominator
        g = gcd(numerator, denominator)
        object.__setattr__(self, "_num", numerator // g)
        object.__setattr__(self, "_den", denominator // g)

    def __setattr__(self, name, value):
        raise AttributeError("Rational is immutable")

    @property
    def numerator(self) -> int:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    @classmethod
    def coerce(cls, value: RationalLike) -> Rational:
        if isinstance(value, Rational):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"cannot coerce {value!r} to Rational")
        return cls(value, 1)

    @classmethod
    def parse(cls, text: str) -> Rational:
        """Parse ``"5"``, ``"-3"`` or ``"1/2"``."""
        m = _TEXT_RE.match(text)
        if m is None:
            raise RationalError(f"not a rational literal: {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        return cls(num, den)

    def is_integer(self) -> bool:
        return self._den == 1

    def to_integer(self) -> int:
        if self._den != 1:
            raise RationalError(f"{self} is not an integer")
        return self._num

    def floor(self) -> int:
        return self._num // self._den

    # arithmetic

    def __add__(self, other: RationalLike) -> Rational:
        try:
            o = Rational.coerce(other)
        except TypeError:
            return NotImplemented
        return Rational(self._num * o._den + o._num * self._den, self._den * o._den)

    __radd__ = __add__

    def __sub__(self, other: RationalLike) -> Rational:
        try:
            o = Rational.coerce(other)
        except TypeError:
            return NotImplemented
        return Rational(self._num * o._den - o._num * self._den, self._den * o._den)

    def __rsub__(self, other: RationalLike) -> Rational:
        try:
            o = Rational.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other: RationalLike) -> Rational:
        try:
            o = Rational.coerce(other)
        except TypeError:
            return NotImplemented
        return Rational(self._num * o._num, self._den * o._den)

    __rmul__ = __mul__

    def __truediv__(self, other: RationalLike) -> Rational:
        try:
            o = Rational.coerce(other)
        except TypeError:
            return NotImplemented
        if o._num == 0:
            raise ZeroDivisionError(f"division of {self} by zero")
        return Rational(self._num * o._den, self._den * o._num)

    def __rtruediv__(self, other: RationalLike) -> Rational:
        try:
            o = Rational.coerce(other)
        except TypeError:
            return NotImplemented
        return o / self

    def __neg__(self) -> Rational:
        return Rational(-self._num, self._den)

    def __abs__(self) -> Rational:
        return Rational(abs(self._num), self._den)

    # comparison, by cross-multiplication (denominators are positive)

    def _cmp(self, other: RationalLike) -> int:
        o = Rational.coerce(other)
        lhs = self._num * o._den
        rhs = o._num * self._den
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Rational):
            return self._num == other._num and self._den == other._den
        if isinstance(other, int) and not isinstance(other, bool):
            return self._den == 1 and self._num == other
        return NotImplemented

    def __lt__(self, other: RationalLike) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: RationalLike) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: RationalLike) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: RationalLike) -> bool:
        return self._cmp(other) >= 0

    def __hash__(self) -> int:
        if self._den == 1:
            return hash(self._num)
        return hash((self._num, self._den))

    def __bool__(self) -> bool:
        return self._num != 0

    def __str__(self) -> str:
        if self._den == 1:
            return str(self._num)
        return f"{self._num}/{self._den}"

    def __repr__(self) -> str:
        return f"Rational({self._num}, {self._den})"

    def __reduce__(self):
        return (Rational, (self._num, self._den))


RationalLike = Union[Rational, int]


def rat_make(num: int, den: int) -> Rational:
    return Rational(num, den)


_OPS = {
    "add": Rational.__add__,
    "sub": Rational.__sub__,
    "mul": Rational.__mul__,
    "div": Rational.__truediv__,
}


def rat_arith(a: Rational, b: Rational, op: str) -> Rational:
    """Apply one of ``add``, ``sub``, ``mul``, ``div``."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown rational operation {op!r}") from None
    return fn(a, b)


def rat_is_integer(a: Rational) -> bool:
    return a.is_integer()


def rat_to_integer(a: Rational) -> int:
    return a.to_integer()
