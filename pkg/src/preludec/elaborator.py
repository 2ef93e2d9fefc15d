"""Clock checking of flow programs.

Every node is checked against a table of node signatures.  Outputs and
locals are *flow futures*: they are bound (with their declared type) before
any equation is inferred, which is what allows forward and circular
references, and each must then be defined by exactly one equation whose
inferred type agrees with the declaration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import ast
from . import causality
from . import clocks
from . import diagnostics as diag
from .clocks import Clock, ClockError
from .diagnostics import Diagnostic
from .types import BOOL, INT, ArrayType, FlowType, Kind, ValueType

Reads = dict[str, int]  # flow name -> minimal date delay of the read


@dataclass(frozen=True)
class NodeSignature:
    name: str
    input_names: tuple[str, ...]
    inputs: tuple[FlowType, ...]
    output_names: tuple[str, ...]
    outputs: tuple[FlowType, ...]
    imported: bool

    def __str__(self) -> str:
        ins = ", ".join(str(t) for t in self.inputs)
        outs = ", ".join(str(t) for t in self.outputs)
        return f"{self.name}: ({ins}) -> ({outs})"


@dataclass
class FlowFuture:
    name: str
    declared: FlowType
    declaration_loc: ast.Loc
    defined: bool = False
    definition_loc: Optional[ast.Loc] = None


@dataclass
class Elaboration:
    """Everything learnt about a program while checking it."""

    program: ast.Program
    signatures: dict[str, NodeSignature] = field(default_factory=dict)
    # declared type (kind taken from the defining equation) of every flow of every node
    flow_types: dict[str, dict[str, FlowType]] = field(default_factory=dict)
    # type inferred from the defining right-hand side, per node and flow
    inferred: dict[str, dict[str, FlowType]] = field(default_factory=dict)
    futures: dict[str, dict[str, FlowFuture]] = field(default_factory=dict)
    # (input index, output index) -> minimal delay, for each checked node
    io_delays: dict[str, dict[tuple[int, int], int]] = field(default_factory=dict)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return not diag.has_errors(self.diagnostics)


def _const_type(c: ast.Const) -> ValueType:
    return BOOL if isinstance(c, ast.ConstBool) else INT


# kinds of defined flows


def _expr_kinds(e: ast.Expr, kinds: dict[str, Kind], out_kinds: dict[str, list[Kind]]) -> list[Kind]:
    if isinstance(e, ast.When):
        return [Kind.BOOLEAN]
    if isinstance(e, ast.Var):
        return [kinds.get(e.name, Kind.STRICT)]
    if isinstance(e, ast.Call):
        return list(out_kinds.get(e.node, [Kind.STRICT]))
    return [Kind.STRICT]


def infer_kinds(program: ast.Program) -> dict[str, dict[str, Kind]]:
    """Which locals and outputs are Boolean flows, by monotone fixpoint.

    Only ``when`` introduces Boolean kind; it then propagates through plain
    copies and through node outputs.
    """
    nodes = program.nodes
    kinds = {n.name: {} for n in nodes}
    out_kinds = {n.name: [Kind.STRICT] * len(n.output_flows()) for n in nodes}
    changed = True
    while changed:
        changed = False
        for n in nodes:
            if n.imported:
                continue
            k = kinds[n.name]
            for eq in n.equations:
                rhs = _expr_kinds(eq.rhs, k, out_kinds)
                if len(rhs) != len(eq.lhs):
                    continue
                for name, kind in zip(eq.lhs, rhs):
                    if kind is Kind.BOOLEAN and k.get(name) is not Kind.BOOLEAN:
                        k[name] = Kind.BOOLEAN
                        changed = True
            new_out = [k.get(name, Kind.STRICT) for name, _ in n.output_flows()]
            if new_out != out_kinds[n.name]:
                out_kinds[n.name] = new_out
                changed = True
    return kinds


# signatures


def _call_graph_order(program: ast.Program) -> tuple[list[ast.NodeDecl], set[str]]:
    """Nodes with callees first, plus the names of (mutually) recursive nodes."""
    by_name = {}
    for n in program.nodes:
        by_name.setdefault(n.name, n)
    graph = {}
    for name, n in by_name.items():
        callees = {}
        for eq in n.equations:
            for e in ast.walk(eq.rhs):
                if isinstance(e, ast.Call) and e.node in by_name:
                    callees[e.node] = 0
        graph[name] = callees
    sccs = causality.tarjan_scc(list(by_name), graph)
    recursive = set()
    for comp in sccs:
        if len(comp) > 1 or comp[0] in graph[comp[0]]:
            recursive.update(comp)
    order = [by_name[name] for comp in sccs for name in comp]
    return order, recursive


class Elaborator:
    def __init__(self, program: ast.Program):
        self.program = program
        self.file = program.file
        self.result = Elaboration(program)
        self.kinds = infer_kinds(program)
        self.warned: set = set()

    # diagnostics helpers

    def error(self, code, message, loc, expected=None, actual=None):
        self.result.diagnostics.append(diag.error(code, message, loc, self.file, expected, actual))

    def warn_negative_start(self, clock: Clock, loc, what: str):
        if clock.start_date < 0 and (loc, clock) not in self.warned:
            self.warned.add((loc, clock))
            self.result.diagnostics.append(
                diag.warning(
                    diag.W_NEGATIVE_START,
                    f"{what} has clock {clock} with negative start date {clock.start_date}",
                    loc,
                    self.file,
                )
            )

    def clock_error(self, exc: ClockError, loc):
        self.error(exc.code, str(exc), loc)

    # pass 1

    def declared_clock(self, p: ast.ParamDecl) -> Optional[Clock]:
        try:
            c = clocks.clock_validate(p.rate.period, p.rate.phase)
        except ClockError as exc:
            self.clock_error(exc, p.rate.loc)
            return None
        self.warn_negative_start(c, p.rate.loc, f"declaration of {', '.join(p.names)}")
        return c

    def build_signatures(self) -> dict[str, NodeSignature]:
        seen_nodes: dict[str, ast.NodeDecl] = {}
        seen_io: dict[str, ast.Decl] = {}
        for d in self.program.declarations:
            if isinstance(d, ast.NodeDecl):
                if d.name in seen_nodes:
                    first = seen_nodes[d.name].loc
                    self.error(diag.E_DUPLICATE_NAME, f"node {d.name} already declared at line {first[0]}", d.loc)
                    continue
                seen_nodes[d.name] = d
            else:
                if d.name in seen_io:
                    first = seen_io[d.name].loc
                    self.error(
                        diag.E_DUPLICATE_NAME,
                        f"sensor/actuator {d.name} already declared at line {first[0]}",
                        d.loc,
                    )
                    continue
                seen_io[d.name] = d

        sigs = self.result.signatures
        for n in seen_nodes.values():
            kinds = self.kinds.get(n.name, {})
            types: dict[str, FlowType] = {}
            ok = True
            seen_flow: set[str] = set()
            for section in (n.inputs, n.outputs, n.locals):
                for p in section:
                    c = self.declared_clock(p)
                    for name in p.names:
                        if name in seen_flow:
                            self.error(diag.E_DUPLICATE_NAME, f"flow {name} declared twice in node {n.name}", p.loc)
                            continue
                        seen_flow.add(name)
                        if c is None:
                            ok = False
                            continue
                        kind = Kind.STRICT if section is n.inputs else kinds.get(name, Kind.STRICT)
                        types[name] = FlowType(p.value_type, kind, c)
            self.result.flow_types[n.name] = types
            if not ok:
                continue
            ins = n.input_flows()
            outs = n.output_flows()
            sigs[n.name] = NodeSignature(
                n.name,
                tuple(name for name, _ in ins),
                tuple(types[name] for name, _ in ins),
                tuple(name for name, _ in outs),
                tuple(types[name] for name, _ in outs),
                n.imported,
            )
        return sigs

    # pass 2

    def check(self) -> Elaboration:
        self.build_signatures()
        order, recursive = _call_graph_order(self.program)
        checked = set()
        for n in order:
            if n.imported or n.name in checked:
                continue
            checked.add(n.name)
            if n.name in recursive:
                self.error(diag.E_RECURSIVE_NODE, f"node {n.name} calls itself (directly or indirectly)", n.loc)
            if n.name in self.result.signatures:
                NodeChecker(self, n).check()
        self.result.diagnostics = diag.sort_diagnostics(self.result.diagnostics)
        return self.result


class NodeChecker:
    def __init__(self, elab: Elaborator, node: ast.NodeDecl):
        self.elab = elab
        self.node = node
        self.sigs = elab.result.signatures
        self.types = elab.result.flow_types[node.name]
        self.inputs = {name for name, _ in node.input_flows()}
        self.env: dict[str, FlowType] = dict(self.types)
        self.declared = {name for name, _ in node.input_flows() + node.output_flows() + node.local_flows()}

    def error(self, *args, **kw):
        self.elab.error(*args, **kw)

    # expression inference: returns one (type, reads) pair per produced flow

    def infer(self, e: ast.Expr) -> Optional[list[tuple[FlowType, Reads]]]:
        if isinstance(e, ast.Call):
            return self.infer_call(e)
        r = self.infer1(e)
        return None if r is None else [r]

    def single(self, e: ast.Expr) -> Optional[tuple[FlowType, Reads]]:
        r = self.infer(e)
        if r is None:
            return None
        if len(r) != 1:
            self.error(diag.E_ARITY, f"call to {e.node} yields {len(r)} flows where one is expected", e.loc)
            return None
        return r[0]

    def strict_operand(self, e: ast.Expr, op: str, loc) -> Optional[tuple[FlowType, Reads]]:
        r = self.single(e)
        if r is None:
            return None
        if not r[0].is_strict:
            self.error(
                diag.E_BOOLEAN_FLOW_MISUSE,
                f"'{op}' requires a strictly periodic flow, got Boolean flow {r[0]}",
                loc,
            )
            return None
        return r

    def infer1(self, e: ast.Expr) -> Optional[tuple[FlowType, Reads]]:
        if isinstance(e, ast.Var):
            t = self.env.get(e.name)
            if t is None:
                if e.name in self.declared:
                    return None  # declaration already reported as invalid
                self.error(diag.E_UNKNOWN_FLOW, f"unknown flow {e.name}", e.loc)
                return None
            return t, {e.name: 0}
        if isinstance(e, (ast.ConstInt, ast.ConstBool)):
            self.error(
                diag.E_CONSTANT_FLOW,
                "constants are only allowed as the head of 'fby' or 'cons'",
                e.loc,
            )
            return None
        if isinstance(e, (ast.Mul, ast.Div, ast.DivQueue)):
            op = {ast.Mul: "*^", ast.Div: "/^", ast.DivQueue: "/^^"}[type(e)]
            r = self.strict_operand(e.expr, op, e.loc)
            if r is None:
                return None
            t, reads = r
            try:
                if isinstance(e, ast.Mul):
                    return FlowType(t.value_type, Kind.STRICT, clocks.clock_mul(t.clock, e.k)), reads
                if isinstance(e, ast.Div):
                    return FlowType(t.value_type, Kind.STRICT, clocks.clock_div(t.clock, e.k)), reads
                c, k = clocks.clock_div_queue(t.clock, e.k)
                return FlowType(ArrayType(t.value_type, k), Kind.STRICT, c), reads
            except ClockError as exc:
                self.elab.clock_error(exc, e.loc)
                return None
        if isinstance(e, ast.Shift):
            r = self.strict_operand(e.expr, "~>", e.loc)
            if r is None:
                return None
            t, reads = r
            try:
                c = clocks.clock_shift(t.clock, e.q)
            except ClockError as exc:
                self.elab.clock_error(exc, e.loc)
                return None
            self.elab.warn_negative_start(c, e.loc, "shifted flow")
            delay = (e.q * t.clock.period).to_integer()
            return FlowType(t.value_type, Kind.STRICT, c), _shifted(reads, delay)
        if isinstance(e, (ast.Fby, ast.Cons)):
            op = "fby" if isinstance(e, ast.Fby) else "cons"
            operand = e.tail if isinstance(e, ast.Fby) else e.expr
            r = self.strict_operand(operand, op, e.loc)
            if r is None:
                return None
            t, reads = r
            head_t = _const_type(e.head)
            if head_t != t.value_type:
                self.error(
                    diag.E_VALUE_TYPE,
                    f"'{op}' head has type {head_t} but the flow carries {t.value_type}",
                    e.head.loc,
                )
                return None
            if isinstance(e, ast.Fby):
                return FlowType(t.value_type, Kind.STRICT, clocks.clock_fby(t.clock)), _shifted(reads, t.clock.period)
            c = clocks.clock_cons(t.clock)
            self.elab.warn_negative_start(c, e.loc, "cons result")
            return FlowType(t.value_type, Kind.STRICT, c), reads
        if isinstance(e, ast.Tail):
            r = self.strict_operand(e.expr, "tail", e.loc)
            if r is None:
                return None
            t, reads = r
            return FlowType(t.value_type, Kind.STRICT, clocks.clock_tail(t.clock)), reads
        if isinstance(e, ast.When):
            d = self.strict_operand(e.data, "when", e.loc)
            c = self.strict_operand(e.cond, "when", e.loc)
            if d is None or c is None:
                return None
            if c[0].value_type != BOOL:
                self.error(diag.E_VALUE_TYPE, f"'when' condition must be bool, got {c[0].value_type}", e.loc)
                return None
            if not clocks.clock_equal(d[0].clock, c[0].clock):
                self.error(
                    diag.E_CLOCK_MISMATCH,
                    "'when' condition is not on the clock of its data flow",
                    e.loc,
                    expected=d[0].clock,
                    actual=c[0].clock,
                )
                return None
            return FlowType(d[0].value_type, Kind.BOOLEAN, d[0].clock), _union(d[1], c[1])
        if isinstance(e, ast.Merge):
            parts = [self.strict_operand(x, "merge", e.loc) for x in (e.cond, e.then, e.else_)]
            if any(p is None for p in parts):
                return None
            (ct, cr), (tt, tr), (ft, fr) = parts
            ok = True
            if ct.value_type != BOOL:
                self.error(diag.E_VALUE_TYPE, f"'merge' condition must be bool, got {ct.value_type}", e.loc)
                ok = False
            if tt.value_type != ft.value_type:
                self.error(
                    diag.E_VALUE_TYPE,
                    f"'merge' branches carry {tt.value_type} and {ft.value_type}",
                    e.loc,
                )
                ok = False
            for other in (tt, ft):
                if not clocks.clock_equal(ct.clock, other.clock):
                    self.error(
                        diag.E_CLOCK_MISMATCH,
                        "'merge' operands must share one clock",
                        e.loc,
                        expected=ct.clock,
                        actual=other.clock,
                    )
                    ok = False
                    break
            if not ok:
                return None
            return FlowType(tt.value_type, Kind.STRICT, ct.clock), _union(cr, tr, fr)
        raise TypeError(f"unexpected expression {e!r}")

    def infer_call(self, e: ast.Call) -> Optional[list[tuple[FlowType, Reads]]]:
        sig = self.sigs.get(e.node)
        if sig is None:
            if self.elab.program.node(e.node) is None:
                self.error(diag.E_UNKNOWN_NODE, f"unknown node {e.node}", e.loc)
            return None
        if len(e.args) != len(sig.inputs):
            self.error(
                diag.E_ARITY,
                f"node {e.node} takes {len(sig.inputs)} argument(s), {len(e.args)} given",
                e.loc,
            )
            return None
        args = []
        ok = True
        for i, (a, param_t) in enumerate(zip(e.args, sig.inputs)):
            r = self.single(a)
            if r is None:
                ok = False
                continue
            t, reads = r
            loc = getattr(a, "loc", e.loc)
            if not t.is_strict:
                self.error(
                    diag.E_BOOLEAN_FLOW_MISUSE,
                    f"argument {i + 1} of {e.node} is Boolean flow {t}; node inputs are strictly periodic",
                    loc,
                )
                ok = False
                continue
            if t.value_type != param_t.value_type:
                self.error(
                    diag.E_VALUE_TYPE,
                    f"argument {i + 1} of {e.node} carries {t.value_type}, expected {param_t.value_type}",
                    loc,
                )
                ok = False
                continue
            if not clocks.clock_equal(t.clock, param_t.clock):
                self.error(
                    diag.E_CLOCK_MISMATCH,
                    f"argument {i + 1} of {e.node} is on the wrong clock",
                    loc,
                    expected=param_t.clock,
                    actual=t.clock,
                )
                ok = False
                continue
            args.append(reads)
        if not ok:
            return None
        delays = self.elab.result.io_delays.get(e.node)
        out = []
        for j, out_t in enumerate(sig.outputs):
            reads: Reads = {}
            for i, arg_reads in enumerate(args):
                if sig.imported or delays is None:
                    d = 0
                else:
                    d = delays.get((i, j))
                    if d is None:
                        continue
                reads = _union(reads, _shifted(arg_reads, d))
            out.append((out_t, reads))
        return out

    # node checking

    def check(self) -> None:
        node = self.node
        futures: dict[str, FlowFuture] = {}
        for name, p in node.output_flows() + node.local_flows():
            if name in self.types:
                futures[name] = FlowFuture(name, self.types[name], p.loc)
        self.elab.result.futures[node.name] = futures
        inferred = self.elab.result.inferred.setdefault(node.name, {})
        deps: dict[str, dict[str, int]] = {}

        for eq in node.equations:
            r = self.infer(eq.rhs)
            targets = []
            for name in eq.lhs:
                if name in self.inputs:
                    self.error(diag.E_INPUT_ASSIGNED, f"input {name} cannot be defined by an equation", eq.loc)
                elif name not in futures:
                    if name not in self.types:
                        self.error(diag.E_UNKNOWN_FLOW, f"{name} is not an output or local of {node.name}", eq.loc)
                else:
                    fut = futures[name]
                    if fut.defined:
                        self.error(
                            diag.E_MULTIPLE_DEFINITION,
                            f"flow {name} already defined at line {fut.definition_loc[0]}",
                            eq.loc,
                        )
                        targets.append(None)
                        continue
                    fut.defined = True
                    fut.definition_loc = eq.loc
                    targets.append(fut)
                    continue
                targets.append(None)
            if r is None:
                continue
            if len(r) != len(eq.lhs):
                self.error(
                    diag.E_ARITY,
                    f"equation defines {len(eq.lhs)} flow(s) but its right-hand side yields {len(r)}",
                    eq.loc,
                )
                continue
            for fut, (t, reads) in zip(targets, r):
                if fut is None:
                    continue
                inferred[fut.name] = t
                deps[fut.name] = reads
                self.eliminate(fut, t, eq)

        for fut in futures.values():
            if not fut.defined:
                self.error(diag.E_UNDEFINED_FLOW, f"flow {fut.name} is declared but never defined", fut.declaration_loc)

        self.check_causality(futures, deps)

    def eliminate(self, fut: FlowFuture, t: FlowType, eq: ast.Equation) -> None:
        decl = fut.declared
        if decl.value_type != t.value_type:
            self.error(
                diag.E_VALUE_TYPE,
                f"flow {fut.name} is declared {decl.value_type} but defined as {t.value_type}",
                eq.loc,
            )
        elif not clocks.clock_equal(decl.clock, t.clock):
            self.error(
                diag.E_CLOCK_MISMATCH,
                f"flow {fut.name} is defined on the wrong clock",
                eq.loc,
                expected=decl.clock,
                actual=t.clock,
            )

    def check_causality(self, futures: dict[str, FlowFuture], deps: dict[str, Reads]) -> None:
        # edge x -> y weighted by the delay with which y reads x
        graph: dict[str, dict[str, int]] = {}
        for y, reads in deps.items():
            for x, d in reads.items():
                row = graph.setdefault(x, {})
                row[y] = min(d, row.get(y, d))
        flows = list(futures) + sorted(self.inputs)
        cycles = causality.bad_cycles(flows, graph)
        for cycle in cycles:
            first = min(cycle, key=lambda name: futures[name].definition_loc or futures[name].declaration_loc)
            fut = futures[first]
            i = cycle.index(first)
            ordered = cycle[i:] + cycle[:i]
            path = " -> ".join(ordered + [first])
            self.error(
                diag.E_CAUSALITY_CYCLE,
                f"instantaneous dependency cycle {path}; each cycle needs a positive delay (e.g. fby)",
                fut.definition_loc or fut.declaration_loc,
            )
        if cycles:
            return
        sig = self.sigs[self.node.name]
        dist = causality.shortest_delays(sig.input_names, flows, graph)
        delays = {}
        for i, x in enumerate(sig.input_names):
            for j, o in enumerate(sig.output_names):
                if o in dist[x]:
                    delays[(i, j)] = dist[x][o]
        self.elab.result.io_delays[self.node.name] = delays


def _shifted(reads: Reads, delay: int) -> Reads:
    return {k: v + delay for k, v in reads.items()}


def _union(*parts: Reads) -> Reads:
    out: Reads = {}
    for p in parts:
        for k, v in p.items():
            out[k] = min(v, out.get(k, v))
    return out


def elaborate(program: ast.Program) -> Elaboration:
    return Elaborator(program).check()


def build_signatures(program: ast.Program) -> tuple[dict[str, NodeSignature], list[Diagnostic]]:
    e = Elaborator(program)
    sigs = e.build_signatures()
    return sigs, diag.sort_diagnostics(e.result.diagnostics)


def infer_expr_type(env: dict[str, FlowType], e: ast.Expr, signatures=None) -> tuple[Optional[FlowType], list[Diagnostic]]:
    """Infer the type of a standalone expression under ``env``."""
    program = ast.Program(())
    elab = Elaborator(program)
    if signatures:
        elab.result.signatures.update(signatures)
    checker = NodeChecker.__new__(NodeChecker)
    checker.elab = elab
    checker.node = None
    checker.sigs = elab.result.signatures
    checker.types = dict(env)
    checker.inputs = set()
    checker.declared = set(env)
    checker.env = dict(env)
    r = checker.single(e)
    ds = diag.sort_diagnostics(elab.result.diagnostics)
    return (None if r is None else r[0]), ds


def check_program(program: ast.Program) -> list[Diagnostic]:
    return elaborate(program).diagnostics
