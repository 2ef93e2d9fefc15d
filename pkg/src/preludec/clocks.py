"""Strictly periodic clocks ``(n, p)`` and the clock transformation operators.

A clock with period ``n`` and phase ``p`` ticks at dates ``n * (p + i)``.
The clock is valid when ``n >= 1`` and its start date ``n * p`` is an
integer.  Start dates may be zero or negative; callers that care about
negative start dates check :func:`has_negative_start` themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import lcm
from typing import Iterable

from .rational import Rational, RationalLike

__all__ = [
    "Clock",
    "ClockError",
    "NonPositivePeriod",
    "NonIntegerStartDate",
    "NonPositiveFactor",
    "DivisibilityViolation",
    "NonIntegerShift",
    "NegativeShift",
    "clock_validate",
    "clock_start_date",
    "clock_mul",
    "clock_div",
    "clock_shift",
    "clock_cons",
    "clock_tail",
    "clock_fby",
    "clock_div_queue",
    "clock_equal",
    "clock_hyperperiod",
    "has_negative_start",
]


class ClockError(ValueError):
    code = "E_CLOCK"


class NonPositivePeriod(ClockError):
    code = "E_NONPOSITIVE_PERIOD"

    def __init__(self, period: int):
        super().__init__(f"clock period must be positive, got {period}")
        self.period = period


class NonIntegerStartDate(ClockError):
    code = "E_NONINTEGER_START"

    def __init__(self, period: int, phase: Rational):
        self.start = phase * period
        super().__init__(
            f"clock ({period}, {phase}) has non-integer start date {self.start}"
        )


class NonPositiveFactor(ClockError):
    code = "E_NONPOSITIVE_FACTOR"

    def __init__(self, k: int):
        super().__init__(f"rate factor must be at least 1, got {k}")
        self.k = k


class DivisibilityViolation(ClockError):
    code = "E_DIVISIBILITY"

    def __init__(self, k: int, period: int):
        super().__init__(f"factor {k} does not divide period {period}")
        self.k = k
        self.period = period


class NonIntegerShift(ClockError):
    code = "E_NONINTEGER_SHIFT"

    def __init__(self, period: int, q: Rational):
        self.offset = q * period
        super().__init__(
            f"shift by {q} moves dates by {self.offset} on period {period}, not an integer"
        )


class NegativeShift(ClockError):
    code = "E_NEGATIVE_SHIFT"

    def __init__(self, q: Rational):
        super().__init__(f"negative shift {q} rejected in strict mode")
        self.q = q


@dataclass(frozen=True)
class Clock:
    """A validated clock.  Build through :func:`clock_validate`."""

    period: int
    phase: Rational

    def __post_init__(self):
        if not isinstance(self.phase, Rational):
            object.__setattr__(self, "phase", Rational.coerce(self.phase))
        if self.period < 1:
            raise NonPositivePeriod(self.period)
        if not (self.phase * self.period).is_integer():
            raise NonIntegerStartDate(self.period, self.phase)

    @property
    def start_date(self) -> int:
        return (self.phase * self.period).to_integer()

    def date(self, index: int) -> int:
        """Date of the tick with the given index: ``n * (p + index)``."""
        return self.start_date + self.period * index

    def __str__(self) -> str:
        return f"({self.period}, {self.phase})"


def clock_validate(n: int, p: RationalLike) -> Clock:
    return Clock(n, Rational.coerce(p))


def clock_start_date(c: Clock) -> int:
    return c.start_date


def has_negative_start(c: Clock) -> bool:
    return c.start_date < 0


def _check_factor(c: Clock, k: int) -> None:
    if k < 1:
        raise NonPositiveFactor(k)
    if c.period % k != 0:
        raise DivisibilityViolation(k, c.period)


def clock_mul(c: Clock, k: int) -> Clock:
    """Over-sample: ``(n, p) -> (n/k, p*k)``, requires ``k | n``."""
    _check_factor(c, k)
    return Clock(c.period // k, c.phase * k)


def clock_div(c: Clock, k: int) -> Clock:
    """Under-sample: ``(n, p) -> (n*k, p/k)``, requires ``k | n``."""
    _check_factor(c, k)
    return Clock(c.period * k, c.phase / k)


def clock_shift(c: Clock, q: RationalLike, *, strict: bool = False) -> Clock:
    """Phase shift ``(n, p) -> (n, p+q)``; ``n*q`` must be an integer.

    With ``strict`` the shift must also be non-negative.
    """
    q = Rational.coerce(q)
    if not (q * c.period).is_integer():
        raise NonIntegerShift(c.period, q)
    if strict and q < 0:
        raise NegativeShift(q)
    return Clock(c.period, c.phase + q)


def clock_cons(c: Clock) -> Clock:
    return Clock(c.period, c.phase - 1)


def clock_tail(c: Clock) -> Clock:
    return Clock(c.period, c.phase + 1)


def clock_fby(c: Clock) -> Clock:
    # fby = cons . shift(1), which leaves the clock unchanged
    return c


def clock_div_queue(c: Clock, k: int) -> tuple[Clock, int]:
    """Queuing divide: clock ``(n*k, p/k)`` carrying windows of ``k`` values."""
    if k < 1:
        raise NonPositiveFactor(k)
    return Clock(c.period * k, c.phase / k), k


def clock_equal(a: Clock, b: Clock) -> bool:
    return a.period == b.period and a.phase == b.phase


def clock_hyperperiod(cs: Iterable[Clock]) -> int:
    periods = [c.period for c in cs]
    if not periods:
        raise ValueError("hyperperiod of an empty clock set")
    return reduce(lcm, periods)
