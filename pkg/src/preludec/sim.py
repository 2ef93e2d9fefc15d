"""Reference semantics: finite prefixes of flows as tagged ``(value, date)`` streams.

Every operator computes output dates from its input dates, never from the
clock formula, and then checks the result against the clock predicted by the
clock calculus.  A mismatch raises :class:`DateLawViolation`, so the
simulator doubles as an oracle for the checker.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional

from . import ast
from . import clocks
from .clocks import Clock
from .elaborator import Elaboration, elaborate
from .rational import Rational, RationalLike
from .types import BOOL, ArrayType, Kind, ValueType

Entry = tuple[Any, int]


class SimulationError(Exception):
    pass


class DateLawViolation(SimulationError):
    pass


class MissingStub(SimulationError):
    def __init__(self, node: str):
        super().__init__(f"imported node {node} needs a registered stub")
        self.node = node


@dataclass(frozen=True)
class TaggedStream:
    """A finite prefix of a flow.

    ``ticks`` is the number of clock ticks the prefix covers.  For strict
    streams it equals ``len(entries)``; Boolean streams may skip ticks.
    """

    entries: tuple[Entry, ...]
    clock: Clock
    kind: Kind = Kind.STRICT
    ticks: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if self.ticks is None:
            object.__setattr__(self, "ticks", len(self.entries))

    @property
    def values(self) -> list:
        return [v for v, _ in self.entries]

    @property
    def dates(self) -> list[int]:
        return [t for _, t in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def prefix(self, count: int) -> TaggedStream:
        if self.kind is Kind.STRICT:
            return TaggedStream(self.entries[:count], self.clock)
        end = self.clock.date(count)
        return TaggedStream(tuple(e for e in self.entries if e[1] < end), self.clock, self.kind, min(count, self.ticks))


def check_date_law(s: TaggedStream) -> TaggedStream:
    """Assert that ``s`` ticks exactly on its clock."""
    c = s.clock
    if s.kind is Kind.STRICT:
        for i, (_, t) in enumerate(s.entries):
            if t != c.date(i):
                raise DateLawViolation(f"entry {i} at date {t}, clock {c} predicts {c.date(i)}")
        return s
    prev = None
    for _, t in s.entries:
        offset = t - c.start_date
        if offset % c.period != 0 or not 0 <= offset // c.period < s.ticks:
            raise DateLawViolation(f"date {t} is not a tick of clock {c} within {s.ticks} ticks")
        if prev is not None and t <= prev:
            raise DateLawViolation(f"dates not strictly increasing at {t}")
        prev = t
    return s


def _require_strict(s: TaggedStream, op: str) -> None:
    if s.kind is not Kind.STRICT:
        raise SimulationError(f"{op} needs a strictly periodic stream")


def sim_source(c: Clock, gen: Callable[[int], Any], count: int) -> TaggedStream:
    if count < 0:
        raise ValueError("count must be non-negative")
    entries = []
    t = c.start_date
    for i in range(count):
        entries.append((gen(i), t))
        t += c.period
    return check_date_law(TaggedStream(tuple(entries), c))


def sim_mul(s: TaggedStream, k: int) -> TaggedStream:
    """Over-sample: each value is repeated ``k`` times within its period."""
    _require_strict(s, "*^")
    c = clocks.clock_mul(s.clock, k)
    step = s.clock.period // k
    entries = [(v, t + r * step) for v, t in s.entries for r in range(k)]
    return check_date_law(TaggedStream(tuple(entries), c))


def sim_div(s: TaggedStream, k: int) -> TaggedStream:
    """Under-sample: keep the first value of every group of ``k``."""
    _require_strict(s, "/^")
    c = clocks.clock_div(s.clock, k)
    return check_date_law(TaggedStream(s.entries[::k], c))


def sim_div_queue(s: TaggedStream, k: int) -> TaggedStream:
    """Queuing divide: output ``j`` carries inputs ``j*k-k+1 .. j*k``.

    Positions before the first input are filled with the first value.
    """
    _require_strict(s, "/^^")
    c, _ = clocks.clock_div_queue(s.clock, k)
    vals = s.values
    entries = []
    for j in range(0, len(vals), k):
        window = tuple(vals[max(i, 0)] for i in range(j - k + 1, j + 1))
        entries.append((window, s.entries[j][1]))
    return check_date_law(TaggedStream(tuple(entries), c))


def sim_shift(s: TaggedStream, q: RationalLike) -> TaggedStream:
    _require_strict(s, "~>")
    c = clocks.clock_shift(s.clock, q)
    offset = (Rational.coerce(q) * s.clock.period).to_integer()
    return check_date_law(TaggedStream(tuple((v, t + offset) for v, t in s.entries), c))


def sim_cons(x: Any, s: TaggedStream) -> TaggedStream:
    """Prepend ``x`` one period before the first date of ``s``."""
    _require_strict(s, "cons")
    c = clocks.clock_cons(s.clock)
    first = s.entries[0][1] if s.entries else s.clock.start_date
    return check_date_law(TaggedStream(((x, first - s.clock.period),) + s.entries, c))


def sim_tail(s: TaggedStream) -> TaggedStream:
    _require_strict(s, "tail")
    return check_date_law(TaggedStream(s.entries[1:], clocks.clock_tail(s.clock)))


def sim_fby(x: Any, s: TaggedStream) -> TaggedStream:
    """``x`` at the first date of ``s``, then every value of ``s`` one period later."""
    _require_strict(s, "fby")
    n = s.clock.period
    first = s.entries[0][1] if s.entries else s.clock.start_date
    entries = ((x, first),) + tuple((v, t + n) for v, t in s.entries)
    return check_date_law(TaggedStream(entries, clocks.clock_fby(s.clock)))


def _same_clock(*streams: TaggedStream) -> None:
    for s in streams[1:]:
        if not clocks.clock_equal(s.clock, streams[0].clock):
            raise SimulationError(f"clock mismatch {streams[0].clock} vs {s.clock}")


def sim_when(data: TaggedStream, cond: TaggedStream) -> TaggedStream:
    _require_strict(data, "when")
    _require_strict(cond, "when")
    _same_clock(data, cond)
    entries = []
    for (v, t), (b, tc) in zip(data.entries, cond.entries):
        if t != tc:
            raise DateLawViolation(f"when operands disagree on dates {t} vs {tc}")
        if b:
            entries.append((v, t))
    ticks = min(len(data), len(cond))
    return check_date_law(TaggedStream(tuple(entries), data.clock, Kind.BOOLEAN, ticks))


def sim_merge(cond: TaggedStream, then: TaggedStream, else_: TaggedStream) -> TaggedStream:
    for s in (cond, then, else_):
        _require_strict(s, "merge")
    _same_clock(cond, then, else_)
    entries = []
    for (b, t), (a, ta), (c, tc) in zip(cond.entries, then.entries, else_.entries):
        if not t == ta == tc:
            raise DateLawViolation(f"merge operands disagree on dates {t}, {ta}, {tc}")
        entries.append((a if b else c, t))
    return check_date_law(TaggedStream(tuple(entries), cond.clock))


# whole-node simulation


def default_generator(value_type: ValueType) -> Callable[[int], Any]:
    if value_type == BOOL:
        return lambda i: i % 2 == 0
    if isinstance(value_type, ArrayType):
        inner = default_generator(value_type.element)
        return lambda i: tuple(inner(i) for _ in range(value_type.size))
    return lambda i: i


@dataclass
class SimConfig:
    horizon: int = 1  # number of hyperperiods
    generators: Mapping[str, Callable[[int], Any]] = field(default_factory=dict)
    stubs: Mapping[str, Callable[..., Any]] = field(default_factory=dict)
    max_retries: int = 8

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError(f"horizon must be at least 1 hyperperiod, got {self.horizon}")


def _truncate(s: TaggedStream, cap: Optional[int]) -> TaggedStream:
    if cap is None:
        return s
    c = s.clock
    limit = max(0, -((c.start_date - cap) // c.period))
    if s.ticks <= limit:
        return s
    return s.prefix(limit)


class _Runner:
    def __init__(self, elab: Elaboration, cfg: SimConfig, cap: Optional[int]):
        self.elab = elab
        self.cfg = cfg
        self.cap = cap

    def run(self, node: ast.NodeDecl, inputs: dict[str, TaggedStream]) -> dict[str, TaggedStream]:
        types = self.elab.flow_types[node.name]
        streams = dict(inputs)
        for name, _ in node.output_flows() + node.local_flows():
            t = types[name]
            streams[name] = TaggedStream((), t.clock, t.kind, 0)
        changed = True
        while changed:
            changed = False
            for eq in node.equations:
                results = self.eval(eq.rhs, streams)
                for name, s in zip(eq.lhs, results):
                    s = _truncate(s, self.cap)
                    if s.ticks > streams[name].ticks:
                        streams[name] = s
                        changed = True
        return streams

    def eval(self, e: ast.Expr, env: dict[str, TaggedStream]) -> list[TaggedStream]:
        if isinstance(e, ast.Call):
            return self.call(e, env)
        return [_truncate(self.eval1(e, env), self.cap)]

    def eval1(self, e: ast.Expr, env: dict[str, TaggedStream]) -> TaggedStream:
        ev = lambda x: self.eval(x, env)[0]  # noqa: E731
        if isinstance(e, ast.Var):
            return env[e.name]
        if isinstance(e, ast.Mul):
            return sim_mul(ev(e.expr), e.k)
        if isinstance(e, ast.Div):
            return sim_div(ev(e.expr), e.k)
        if isinstance(e, ast.DivQueue):
            return sim_div_queue(ev(e.expr), e.k)
        if isinstance(e, ast.Shift):
            return sim_shift(ev(e.expr), e.q)
        if isinstance(e, ast.Fby):
            return sim_fby(e.head.value, ev(e.tail))
        if isinstance(e, ast.Cons):
            return sim_cons(e.head.value, ev(e.expr))
        if isinstance(e, ast.Tail):
            return sim_tail(ev(e.expr))
        if isinstance(e, ast.When):
            return sim_when(ev(e.data), ev(e.cond))
        if isinstance(e, ast.Merge):
            return sim_merge(ev(e.cond), ev(e.then), ev(e.else_))
        raise SimulationError(f"cannot simulate {type(e).__name__}")

    def call(self, e: ast.Call, env: dict[str, TaggedStream]) -> list[TaggedStream]:
        args = [self.eval(a, env)[0] for a in e.args]
        sig = self.elab.signatures[e.node]
        if not sig.imported:
            callee = self.elab.program.node(e.node)
            inputs = dict(zip(sig.input_names, args))
            out = self.run(callee, inputs)
            return [out[name] for name in sig.output_names]
        stub = self.cfg.stubs.get(e.node)
        if stub is None:
            if len(args) != 1:
                raise MissingStub(e.node)
            stub = lambda v: v if len(sig.outputs) == 1 else (v,) * len(sig.outputs)  # noqa: E731
        count = min((len(a) for a in args), default=0)
        columns: list[list] = [[] for _ in sig.outputs]
        for j in range(count):
            result = stub(*(a.entries[j][0] for a in args))
            if len(sig.outputs) == 1:
                result = (result,)
            if len(result) != len(sig.outputs):
                raise SimulationError(f"stub for {e.node} returned {len(result)} values, expected {len(sig.outputs)}")
            for col, v in zip(columns, result):
                col.append(v)
        return [
            check_date_law(TaggedStream(tuple((v, t.clock.date(j)) for j, v in enumerate(col)), t.clock))
            for col, t in zip(columns, sig.outputs)
        ]


def sim_expr(
    e: ast.Expr,
    env: Mapping[str, TaggedStream],
    cfg: Optional[SimConfig] = None,
    *,
    elaboration: Optional[Elaboration] = None,
) -> list[TaggedStream]:
    """Evaluate one expression over already simulated streams."""
    elab = elaboration if elaboration is not None else Elaboration(ast.Program())
    return _Runner(elab, cfg or SimConfig(), None).eval(e, dict(env))


def sim_node(
    program: ast.Program,
    node: str,
    cfg: Optional[SimConfig] = None,
    *,
    elaboration: Optional[Elaboration] = None,
    all_flows: bool = False,
) -> dict[str, TaggedStream]:
    """Simulate ``node`` over ``cfg.horizon`` hyperperiods of its clocks.

    Every flow ``x`` of clock ``(n, p)`` is reported on the window
    ``[n*p, n*p + H)`` where ``H`` is the horizon in time units, so strict
    flows carry exactly ``H/n`` entries.  Returns the outputs, or every
    input, local and output with ``all_flows``.
    """
    cfg = cfg if cfg is not None else SimConfig()
    elab = elaboration if elaboration is not None else elaborate(program)
    if not elab.accepted:
        raise SimulationError("program has errors; run the checker first")
    decl = program.node(node)
    if decl is None:
        raise SimulationError(f"no node named {node}")
    if decl.imported:
        raise SimulationError(f"node {node} is imported and has no equations")
    types = elab.flow_types[node]
    H = cfg.horizon * clocks.clock_hyperperiod(t.clock for t in types.values())
    required = {name: H // t.clock.period for name, t in types.items()}
    latest_start = max(t.clock.start_date for t in types.values())
    earliest_start = min(t.clock.start_date for t in types.values())

    slack = H
    for _ in range(cfg.max_retries):
        cap = latest_start + H + slack
        inputs = {}
        for name, p in decl.input_flows():
            t = types[name]
            gen = cfg.generators.get(name) or default_generator(t.value_type)
            count = max(0, -((t.clock.start_date - cap) // t.clock.period))
            inputs[name] = sim_source(t.clock, gen, count)
        streams = _Runner(elab, cfg, cap).run(decl, inputs)
        if all(streams[name].ticks >= required[name] for name in types):
            break
        slack = 2 * slack + (latest_start - earliest_start)
    else:
        short = sorted(name for name in types if streams[name].ticks < required[name])
        raise SimulationError(f"flows {', '.join(short)} do not fill the horizon; the equations are not productive")

    result = {name: check_date_law(streams[name].prefix(required[name])) for name in types}
    if all_flows:
        return result
    return {name: result[name] for name, _ in decl.output_flows()}


def format_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, tuple):
        return "[" + ",".join(format_value(x) for x in v) + "]"
    return str(v)


def dump_streams(streams: Mapping[str, TaggedStream]) -> str:
    """One ``<flow> <date> <value>`` line per entry, by flow name then date."""
    lines = []
    for name in sorted(streams):
        for v, t in sorted(streams[name].entries, key=lambda e: e[1]):
            lines.append(f"{name} {t} {format_value(v)}")
    return "\n".join(lines) + ("\n" if lines else "")
