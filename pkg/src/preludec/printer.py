"""Pretty-printer emitting canonical ``.plu`` source.

``parse(pretty(parse(s)))`` is structurally equal to ``parse(s)``.
"""

from __future__ import annotations

from . import ast
from .types import ArrayType, ScalarType

# precedence levels
_FBY, _WHEN, _POSTFIX = 0, 1, 2


def _level(e: ast.Expr) -> int:
    if isinstance(e, ast.Fby):
        return _FBY
    if isinstance(e, ast.When):
        return _WHEN
    return _POSTFIX


def _wrap(e: ast.Expr, min_level: int) -> str:
    text = pretty_expr(e)
    return f"({text})" if _level(e) < min_level else text


def _const(c: ast.Const) -> str:
    if isinstance(c, ast.ConstBool):
        return "true" if c.value else "false"
    return str(c.value)


def pretty_expr(e: ast.Expr) -> str:
    if isinstance(e, ast.Var):
        return e.name
    if isinstance(e, (ast.ConstInt, ast.ConstBool)):
        return _const(e)
    if isinstance(e, ast.Mul):
        return f"{_wrap(e.expr, _POSTFIX)} *^ {e.k}"
    if isinstance(e, ast.Div):
        return f"{_wrap(e.expr, _POSTFIX)} /^ {e.k}"
    if isinstance(e, ast.DivQueue):
        return f"{_wrap(e.expr, _POSTFIX)} /^^ {e.k}"
    if isinstance(e, ast.Shift):
        return f"{_wrap(e.expr, _POSTFIX)} ~> {e.q}"
    if isinstance(e, ast.Fby):
        return f"{_const(e.head)} fby {pretty_expr(e.tail)}"
    if isinstance(e, ast.When):
        return f"{_wrap(e.data, _WHEN)} when {_wrap(e.cond, _POSTFIX)}"
    if isinstance(e, ast.Tail):
        return f"tail({pretty_expr(e.expr)})"
    if isinstance(e, ast.Cons):
        return f"cons({_const(e.head)}, {pretty_expr(e.expr)})"
    if isinstance(e, ast.Merge):
        return f"merge({pretty_expr(e.cond)}, {pretty_expr(e.then)}, {pretty_expr(e.else_)})"
    if isinstance(e, ast.Call):
        return f"{e.node}({', '.join(pretty_expr(a) for a in e.args)})"
    raise TypeError(f"not an expression: {e!r}")


def _value_type(t) -> str:
    if isinstance(t, ScalarType):
        return t.name
    if isinstance(t, ArrayType):
        return f"{_value_type(t.element)}[{t.size}]"
    raise TypeError(t)


def pretty_param(p: ast.ParamDecl) -> str:
    return f"{', '.join(p.names)}: {_value_type(p.value_type)} rate ({p.rate.period}, {p.rate.phase})"


def _params(ps) -> str:
    return "(" + "; ".join(pretty_param(p) for p in ps) + ")"


def pretty_node(n: ast.NodeDecl) -> str:
    head = f"{n.name} {_params(n.inputs)}\n  returns {_params(n.outputs)}"
    if n.imported:
        return f"imported node {head};\n"
    lines = [f"node {head}"]
    for p in n.locals:
        lines.append(f"  var {pretty_param(p)};")
    lines.append("let")
    for eq in n.equations:
        lhs = eq.lhs[0] if len(eq.lhs) == 1 else "(" + ", ".join(eq.lhs) + ")"
        lines.append(f"  {lhs} = {pretty_expr(eq.rhs)};")
    lines.append("tel")
    return "\n".join(lines) + "\n"


def pretty_program(p: ast.Program) -> str:
    chunks = []
    for d in p.declarations:
        if isinstance(d, ast.NodeDecl):
            chunks.append(pretty_node(d))
        elif isinstance(d, ast.SensorDecl):
            chunks.append(f"sensor {d.name};\n")
        else:
            chunks.append(f"actuator {d.name};\n")
    return "\n".join(chunks)
