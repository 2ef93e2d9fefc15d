"""Emission of the typed flow IR.

Each concrete node becomes a ``fun`` whose locals are declared up front and
paired with a linear proof of a *flow future*.  Equations bind primed copies
of the flows they define, and each future is discharged by
``flow_future_elim`` on the declared flow and its primed definition, which
only typechecks when both have the same clock.  Imported nodes become
``extern fun`` declarations.
"""

from __future__ import annotations

from typing import Optional

from . import ast
from .elaborator import Elaboration, elaborate
from .types import ArrayType, FlowType, Kind, ScalarType, ValueType

HEADER = "(* typed flow IR generated by preludec *)\n"
INDENT = "  "


class EmitError(Exception):
    pass


def render_value_type(t: ValueType) -> str:
    if isinstance(t, ScalarType):
        return t.name
    if isinstance(t, ArrayType):
        return f"array ({render_value_type(t.element)}, {t.size})"
    raise TypeError(t)


def render_flow_type(t: FlowType) -> str:
    ctor = "SFlow" if t.kind is Kind.STRICT else "BFlow"
    return f"{ctor} ({render_value_type(t.value_type)}, {t.clock.period}, {t.clock.phase})"


def _literal(c: ast.Const) -> str:
    if isinstance(c, ast.ConstBool):
        return "true" if c.value else "false"
    return f"~{-c.value}" if c.value < 0 else str(c.value)


class _NodeEmitter:
    def __init__(self, node: ast.NodeDecl, elab: Elaboration):
        self.node = node
        self.types = elab.flow_types[node.name]
        self.inputs = [name for name, _ in node.input_flows()]
        read = set()
        for eq in node.equations:
            read.update(ast.free_vars(eq.rhs))
        outputs = [name for name, _ in node.output_flows()]
        locals_ = [name for name, _ in node.local_flows()]
        # outputs that are never read need no future; they are bound directly
        bound = [x for x in outputs if x in read] + locals_
        self.futures = list(reversed(bound))
        self.future_set = set(bound)
        self.defined_at = {}
        for i, eq in enumerate(node.equations):
            for x in eq.lhs:
                self.defined_at.setdefault(x, i)
        self.hoisted: dict[tuple[str, ast.Const], str] = {}
        self.hoist_lines: list[str] = []

    def primed(self, x: str) -> str:
        return f"{x}'" if x in self.future_set else x

    def hoist(self, e: ast.Fby, eq_index: int) -> Optional[str]:
        """Name of a shared ``fby`` binding for ``e``, when one can be used.

        A delayed variable ``x`` is bound once as ``x'`` ahead of the
        equations.  That binding is only visible up to the equation that
        rebinds ``x'`` as the definition of ``x``.
        """
        if not isinstance(e.tail, ast.Var):
            return None
        x = e.tail.name
        if x in self.future_set and self.defined_at.get(x, eq_index) < eq_index:
            return None
        key = (x, e.head)
        if key in self.hoisted:
            return self.hoisted[key]
        if any(k[0] == x for k in self.hoisted):
            return None
        name = f"{x}'"
        self.hoisted[key] = name
        self.hoist_lines.append(f"val {name} = (flow_fby ({_literal(e.head)}, {x}))")
        return name

    def expr(self, e: ast.Expr, i: int) -> str:
        if isinstance(e, ast.Var):
            return e.name
        if isinstance(e, ast.Mul):
            return f"flow_mul_clock ({self.expr(e.expr, i)}, {e.k})"
        if isinstance(e, ast.Div):
            return f"flow_div_clock ({self.expr(e.expr, i)}, {e.k})"
        if isinstance(e, ast.DivQueue):
            return f"flow_div_queue ({self.expr(e.expr, i)}, {e.k})"
        if isinstance(e, ast.Shift):
            return f"flow_shift ({self.expr(e.expr, i)}, {e.q})"
        if isinstance(e, ast.Fby):
            name = self.hoist(e, i)
            if name is not None:
                return name
            return f"flow_fby ({_literal(e.head)}, {self.expr(e.tail, i)})"
        if isinstance(e, ast.Cons):
            return f"flow_cons ({_literal(e.head)}, {self.expr(e.expr, i)})"
        if isinstance(e, ast.Tail):
            return f"flow_tail ({self.expr(e.expr, i)})"
        if isinstance(e, ast.When):
            return f"flow_when ({self.expr(e.cond, i)}, {self.expr(e.data, i)})"
        if isinstance(e, ast.Merge):
            parts = ", ".join(self.expr(x, i) for x in (e.cond, e.then, e.else_))
            return f"flow_merge ({parts})"
        if isinstance(e, ast.Call):
            args = [self.expr(a, i) for a in e.args]
            if len(args) == 1:
                return f"{e.node} ({args[0]})"
            return f"{e.node} (" + ", ".join(f"({a})" for a in args) + ")"
        raise EmitError(f"cannot emit {type(e).__name__} as a flow")

    def emit(self) -> str:
        node = self.node
        params = [f"{x}: {render_flow_type(self.types[x])}" for x in self.inputs]
        results = ", ".join(render_flow_type(self.types[x]) for x, _ in node.output_flows())
        if params:
            head = f"fun {node.name} (\n" + ",\n".join(INDENT + p for p in params) + f"\n): ({results}) = let"
        else:
            head = f"fun {node.name} (): ({results}) = let"
        body = []
        for x in self.futures:
            body.append(f"var {x} : {render_flow_type(self.types[x])}")
            body.append(f"prval pf{x} = flow_future_make ({x})")
        bindings = []
        for i, eq in enumerate(node.equations):
            rhs = self.expr(eq.rhs, i)
            names = [self.primed(x) for x in eq.lhs]
            lhs = names[0] if len(names) == 1 else "(" + ", ".join(names) + ")"
            bindings.append(f"val {lhs} = {rhs}")
        body.extend(self.hoist_lines)
        body.extend(bindings)
        for x in self.futures:
            body.append(f"prval () = flow_future_elim (pf{x}, {x}, {x}')")
        outs = ", ".join(x for x, _ in node.output_flows())
        lines = [head] + [INDENT + b for b in body] + ["in", f"{INDENT}({outs})", "end"]
        return "\n".join(lines) + "\n"


def _emit_extern(node: ast.NodeDecl, elab: Elaboration) -> str:
    types = elab.flow_types[node.name]
    params = ", ".join(f"{x}: {render_flow_type(types[x])}" for x, _ in node.input_flows())
    results = ", ".join(render_flow_type(types[x]) for x, _ in node.output_flows())
    return f"extern fun {node.name} ({params}): ({results})\n"


def emit_typed_ir(program: ast.Program, elaboration: Optional[Elaboration] = None) -> str:
    """Translate an accepted program.  Raises :class:`EmitError` otherwise."""
    elab = elaboration if elaboration is not None else elaborate(program)
    if not elab.accepted:
        raise EmitError("refusing to emit a program with errors")
    chunks = [HEADER]
    for node in program.nodes:
        if node.imported:
            chunks.append(_emit_extern(node, elab))
        else:
            chunks.append(_NodeEmitter(node, elab).emit())
    return "\n".join(chunks)
