"""Recursive descent parser producing :mod:`preludec.ast` trees.

Precedence, loosest first: ``fby`` (right associative), ``when`` (left
associative), then the postfix rate operators ``*^ /^ /^^ ~>``.
"""

from __future__ import annotations

from typing import Optional

from . import ast
from . import diagnostics as diag
from .lexer import LexError, Token, tokenize
from .rational import Rational
from .types import BOOL, INT, ArrayType

DECL_START = {"imported", "node", "sensor", "actuator"}

_TOKEN_NAMES = {
    "IDENT": "identifier",
    "INT": "integer",
    "RAT": "rational",
    "EOF": "end of input",
}


def _describe(kind: str) -> str:
    return _TOKEN_NAMES.get(kind, repr(kind))


class ParseError(Exception):
    def __init__(self, diagnostics):
        super().__init__("\n".join(d.message for d in diagnostics))
        self.diagnostics = diagnostics


class _Abort(Exception):
    pass


class Parser:
    def __init__(self, tokens: list[Token], file: str = "<input>"):
        if tokens:
            last = tokens[-1]
            eof = Token("EOF", "", last.line, last.col + len(last.text))
        else:
            eof = Token("EOF", "", 1, 1)
        self.tokens = list(tokens) + [eof]
        self.pos = 0
        self.file = file
        self.diagnostics: list[diag.Diagnostic] = []

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def at_kw(self, word: str) -> bool:
        return self.at("KW", word)

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.pos += 1
        return t

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        if self.at(kind, text):
            return self.advance()
        return None

    def fail(self, expected: list[str]):
        t = self.tok
        found = "end of input" if t.kind == "EOF" else repr(t.text)
        if len(expected) == 1:
            msg = f"expected {expected[0]}, found {found}"
        else:
            msg = f"expected one of {', '.join(expected)}; found {found}"
        self.diagnostics.append(diag.error(diag.E_SYNTAX, msg, t.loc, self.file))
        raise _Abort()

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        t = self.accept(kind, text)
        if t is None:
            self.fail([repr(text) if text is not None else _describe(kind)])
        return t

    def expect_kw(self, word: str) -> Token:
        return self.expect("KW", word)

    # declarations

    def parse_program(self) -> ast.Program:
        decls: list[ast.Decl] = []
        while not self.at("EOF"):
            start = self.pos
            try:
                decls.extend(self.declaration())
            except _Abort:
                self.synchronize(start)
        return ast.Program(tuple(decls), self.file)

    def synchronize(self, start: int) -> None:
        if self.pos == start:
            self.advance()
        while not self.at("EOF"):
            if self.tok.kind == "KW" and self.tok.text in DECL_START:
                # "imported node" starts with "imported"; never resume mid-pair
                prev = self.tokens[self.pos - 1] if self.pos else None
                if not (self.tok.text == "node" and prev is not None and prev.text == "imported"):
                    return
            self.advance()

    def declaration(self) -> list[ast.Decl]:
        t = self.tok
        if self.accept("KW", "imported"):
            self.expect_kw("node")
            return [self.node_decl(t, imported=True)]
        if self.accept("KW", "node"):
            return [self.node_decl(t, imported=False)]
        if self.at_kw("sensor") or self.at_kw("actuator"):
            cls = ast.SensorDecl if self.advance().text == "sensor" else ast.ActuatorDecl
            out = []
            while True:
                name = self.expect("IDENT")
                out.append(cls(name.text, name.loc))
                if not self.accept("COMMA"):
                    break
            self.expect("SEMI")
            return out
        self.fail(["'imported'", "'node'", "'sensor'", "'actuator'"])

    def node_decl(self, start: Token, imported: bool) -> ast.NodeDecl:
        name = self.expect("IDENT")
        inputs = self.param_list()
        self.expect_kw("returns")
        outputs = self.param_list()
        if imported:
            self.expect("SEMI")
            return ast.NodeDecl(name.text, inputs, outputs, (), (), True, name.loc)
        self.accept("SEMI")
        locals_: list[ast.ParamDecl] = []
        while self.accept("KW", "var"):
            locals_.append(self.param())
            self.expect("SEMI")
            while self.at("IDENT"):
                locals_.append(self.param())
                self.expect("SEMI")
        if not self.at_kw("let"):
            self.fail(["'var'", "'let'"])
        self.advance()
        equations = [self.equation()]
        while self.accept("SEMI"):
            if self.at_kw("tel"):
                break
            equations.append(self.equation())
        self.expect_kw("tel")
        self.accept("SEMI")
        return ast.NodeDecl(name.text, inputs, outputs, tuple(locals_), tuple(equations), False, name.loc)

    def param_list(self) -> tuple[ast.ParamDecl, ...]:
        self.expect("LPAREN")
        params: list[ast.ParamDecl] = []
        if self.accept("RPAREN"):
            return ()
        params.append(self.param())
        while self.at("COMMA") or self.at("SEMI"):
            self.advance()
            if self.at("RPAREN"):
                break
            params.append(self.param())
        self.expect("RPAREN")
        return tuple(params)

    def param(self) -> ast.ParamDecl:
        first = self.expect("IDENT")
        names = [first.text]
        while self.accept("COMMA"):
            names.append(self.expect("IDENT").text)
        self.expect("COLON")
        value_type = INT
        if self.at_kw("int") or self.at_kw("bool"):
            value_type = INT if self.advance().text == "int" else BOOL
            while self.accept("LBRACKET"):
                size = self.expect("INT")
                value_type = ArrayType(value_type, max(size.value, 1))
                if size.value < 1:
                    self.diagnostics.append(
                        diag.error(diag.E_SYNTAX, "array size must be at least 1", size.loc, self.file)
                    )
                self.expect("RBRACKET")
        elif not self.at_kw("rate"):
            self.fail(["'int'", "'bool'", "'rate'"])
        rate_tok = self.expect_kw("rate")
        self.expect("LPAREN")
        period = self.signed_int()
        self.expect("COMMA")
        phase = self.rational()
        self.expect("RPAREN")
        return ast.ParamDecl(tuple(names), value_type, ast.Rate(period, phase, rate_tok.loc), first.loc)

    def signed_int(self) -> int:
        neg = self.accept("MINUS") is not None
        t = self.expect("INT")
        return -t.value if neg else t.value

    def rational(self) -> Rational:
        neg = self.accept("MINUS") is not None
        if self.at("INT"):
            value = Rational(self.advance().value)
        elif self.at("RAT"):
            value = self.advance().value
        else:
            self.fail(["integer", "rational"])
        return -value if neg else value

    # equations and expressions

    def equation(self) -> ast.Equation:
        start = self.tok
        if self.accept("LPAREN"):
            names = [self.expect("IDENT").text]
            while self.accept("COMMA"):
                names.append(self.expect("IDENT").text)
            self.expect("RPAREN")
        elif self.at("IDENT"):
            names = [self.advance().text]
        else:
            self.fail(["identifier", "'('"])
        self.expect("EQ")
        rhs = self.expr()
        return ast.Equation(tuple(names), rhs, start.loc)

    def expr(self) -> ast.Expr:
        head = self.when_expr()
        op = self.accept("KW", "fby")
        if op is None:
            return head
        if not isinstance(head, (ast.ConstInt, ast.ConstBool)):
            self.diagnostics.append(
                diag.error(diag.E_SYNTAX, "the head of 'fby' must be a constant literal", head.loc, self.file)
            )
            raise _Abort()
        return ast.Fby(head, self.expr(), op.loc)

    def when_expr(self) -> ast.Expr:
        e = self.postfix()
        while True:
            op = self.accept("KW", "when")
            if op is None:
                return e
            e = ast.When(e, self.postfix(), op.loc)

    def postfix(self) -> ast.Expr:
        e = self.primary()
        while True:
            t = self.tok
            if t.kind == "MULOP":
                self.advance()
                e = ast.Mul(e, self.signed_int(), t.loc)
            elif t.kind == "DIVOP":
                self.advance()
                e = ast.Div(e, self.signed_int(), t.loc)
            elif t.kind == "QUEUEOP":
                self.advance()
                e = ast.DivQueue(e, self.signed_int(), t.loc)
            elif t.kind == "SHIFTOP":
                self.advance()
                e = ast.Shift(e, self.rational(), t.loc)
            else:
                return e

    def literal(self) -> ast.Const:
        t = self.tok
        if self.accept("KW", "true"):
            return ast.ConstBool(True, t.loc)
        if self.accept("KW", "false"):
            return ast.ConstBool(False, t.loc)
        if self.at("MINUS") or self.at("INT"):
            return ast.ConstInt(self.signed_int(), t.loc)
        self.fail(["integer", "'true'", "'false'"])

    def primary(self) -> ast.Expr:
        t = self.tok
        if t.kind in ("INT", "MINUS") or (t.kind == "KW" and t.text in ("true", "false")):
            return self.literal()
        if t.kind == "IDENT":
            self.advance()
            if self.accept("LPAREN"):
                args = []
                if not self.at("RPAREN"):
                    args.append(self.expr())
                    while self.accept("COMMA"):
                        args.append(self.expr())
                self.expect("RPAREN")
                return ast.Call(t.text, tuple(args), t.loc)
            return ast.Var(t.text, t.loc)
        if t.kind == "LPAREN":
            self.advance()
            e = self.expr()
            self.expect("RPAREN")
            return e
        if t.kind == "KW":
            if t.text == "tail":
                self.advance()
                self.expect("LPAREN")
                e = self.expr()
                self.expect("RPAREN")
                return ast.Tail(e, t.loc)
            if t.text == "cons":
                self.advance()
                self.expect("LPAREN")
                head = self.literal()
                self.expect("COMMA")
                e = self.expr()
                self.expect("RPAREN")
                return ast.Cons(head, e, t.loc)
            if t.text == "merge":
                self.advance()
                self.expect("LPAREN")
                c = self.expr()
                self.expect("COMMA")
                a = self.expr()
                self.expect("COMMA")
                b = self.expr()
                self.expect("RPAREN")
                return ast.Merge(c, a, b, t.loc)
            if t.text == "queue":
                self.advance()
                self.expect("LPAREN")
                e = self.expr()
                self.expect("COMMA")
                k = self.signed_int()
                self.expect("RPAREN")
                return ast.DivQueue(e, k, t.loc)
        self.fail(["identifier", "literal", "'('", "'tail'", "'cons'", "'merge'", "'queue'"])


def parse_program(tokens: list[Token], file: str = "<input>") -> ast.Program:
    """Parse a token list.  Raises :class:`ParseError` with every syntax diagnostic."""
    p = Parser(tokens, file)
    program = p.parse_program()
    if p.diagnostics:
        raise ParseError(diag.sort_diagnostics(p.diagnostics))
    return program


def parse(source: str, file: str = "<input>") -> ast.Program:
    try:
        tokens = tokenize(source, file)
    except LexError as exc:
        raise ParseError(exc.diagnostics) from None
    return parse_program(tokens, file)
