"""Located syntax tree for flow programs.

Locations are ``(line, column)`` pairs, 1-based, and never take part in
equality: two trees parsed from differently formatted sources compare equal
when they have the same structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .rational import Rational
from .types import ValueType

Loc = tuple[int, int]
NOWHERE: Loc = (0, 0)


def _loc():
    return field(default=NOWHERE, compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    loc: Loc = _loc()


@dataclass(frozen=True)
class ConstInt:
    value: int
    loc: Loc = _loc()


@dataclass(frozen=True)
class ConstBool:
    value: bool
    loc: Loc = _loc()


Const = Union[ConstInt, ConstBool]


@dataclass(frozen=True)
class Mul:
    expr: "Expr"
    k: int
    loc: Loc = _loc()


@dataclass(frozen=True)
class Div:
    expr: "Expr"
    k: int
    loc: Loc = _loc()


@dataclass(frozen=True)
class DivQueue:
    expr: "Expr"
    k: int
    loc: Loc = _loc()


@dataclass(frozen=True)
class Shift:
    expr: "Expr"
    q: Rational
    loc: Loc = _loc()


@dataclass(frozen=True)
class Fby:
    head: Const
    tail: "Expr"
    loc: Loc = _loc()


@dataclass(frozen=True)
class Tail:
    expr: "Expr"
    loc: Loc = _loc()


@dataclass(frozen=True)
class Cons:
    head: Const
    expr: "Expr"
    loc: Loc = _loc()


@dataclass(frozen=True)
class When:
    data: "Expr"
    cond: "Expr"
    loc: Loc = _loc()


@dataclass(frozen=True)
class Merge:
    cond: "Expr"
    then: "Expr"
    else_: "Expr"
    loc: Loc = _loc()


@dataclass(frozen=True)
class Call:
    node: str
    args: tuple["Expr", ...]
    loc: Loc = _loc()


Expr = Union[Var, ConstInt, ConstBool, Mul, Div, DivQueue, Shift, Fby, Tail, Cons, When, Merge, Call]


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, (Mul, Div, DivQueue, Shift, Tail)):
        return (e.expr,)
    if isinstance(e, Fby):
        return (e.head, e.tail)
    if isinstance(e, Cons):
        return (e.head, e.expr)
    if isinstance(e, When):
        return (e.data, e.cond)
    if isinstance(e, Merge):
        return (e.cond, e.then, e.else_)
    if isinstance(e, Call):
        return e.args
    return ()


def walk(e: Expr) -> Iterator[Expr]:
    yield e
    for c in children(e):
        yield from walk(c)


def free_vars(e: Expr) -> list[str]:
    return [x.name for x in walk(e) if isinstance(x, Var)]


@dataclass(frozen=True)
class Rate:
    period: int
    phase: Rational
    loc: Loc = _loc()


@dataclass(frozen=True)
class ParamDecl:
    names: tuple[str, ...]
    value_type: ValueType
    rate: Rate
    loc: Loc = _loc()


@dataclass(frozen=True)
class Equation:
    lhs: tuple[str, ...]
    rhs: Expr
    loc: Loc = _loc()


@dataclass(frozen=True)
class NodeDecl:
    name: str
    inputs: tuple[ParamDecl, ...]
    outputs: tuple[ParamDecl, ...]
    locals: tuple[ParamDecl, ...] = ()
    equations: tuple[Equation, ...] = ()
    imported: bool = False
    loc: Loc = _loc()

    @staticmethod
    def _flatten(decls):
        return [(name, d) for d in decls for name in d.names]

    def input_flows(self) -> list[tuple[str, ParamDecl]]:
        return self._flatten(self.inputs)

    def output_flows(self) -> list[tuple[str, ParamDecl]]:
        return self._flatten(self.outputs)

    def local_flows(self) -> list[tuple[str, ParamDecl]]:
        return self._flatten(self.locals)


@dataclass(frozen=True)
class SensorDecl:
    name: str
    loc: Loc = _loc()


@dataclass(frozen=True)
class ActuatorDecl:
    name: str
    loc: Loc = _loc()


Decl = Union[NodeDecl, SensorDecl, ActuatorDecl]


@dataclass(frozen=True)
class Program:
    declarations: tuple[Decl, ...] = ()
    file: str = field(default="<input>", compare=False)

    @property
    def nodes(self) -> list[NodeDecl]:
        return [d for d in self.declarations if isinstance(d, NodeDecl)]

    def node(self, name: str) -> Optional[NodeDecl]:
        for d in self.nodes:
            if d.name == name:
                return d
        return None

    @property
    def sensors(self) -> list[SensorDecl]:
        return [d for d in self.declarations if isinstance(d, SensorDecl)]

    @property
    def actuators(self) -> list[ActuatorDecl]:
        return [d for d in self.declarations if isinstance(d, ActuatorDecl)]
