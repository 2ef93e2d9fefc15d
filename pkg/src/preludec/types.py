"""Value types and flow types."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from .clocks import Clock


@dataclass(frozen=True)
class ScalarType:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ArrayType:
    element: "ValueType"
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"array size must be at least 1, got {self.size}")

    def __str__(self) -> str:
        return f"array({self.element}, {self.size})"


ValueType = Union[ScalarType, ArrayType]

INT = ScalarType("int")
BOOL = ScalarType("bool")


class Kind(enum.Enum):
    STRICT = "Strict"
    BOOLEAN = "Boolean"


@dataclass(frozen=True)
class FlowType:
    value_type: ValueType
    kind: Kind
    clock: Clock

    @property
    def is_strict(self) -> bool:
        return self.kind is Kind.STRICT

    def __str__(self) -> str:
        return f"{self.value_type}@{self.kind.value}{self.clock}"


def sflow(value_type: ValueType, clock: Clock) -> FlowType:
    return FlowType(value_type, Kind.STRICT, clock)


def bflow(value_type: ValueType, clock: Clock) -> FlowType:
    return FlowType(value_type, Kind.BOOLEAN, clock)
