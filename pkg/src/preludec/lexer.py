"""Tokenizer for ``.plu`` sources."""

from __future__ import annotations

from dataclasses import dataclass

from . import diagnostics as diag
from .rational import Rational

KEYWORDS = frozenset(
    """imported node returns var let tel sensor actuator rate fby when merge
    tail cons queue int bool true false""".split()
)

# longest match first
OPERATORS = [
    ("/^^", "QUEUEOP"),
    ("*^", "MULOP"),
    ("/^", "DIVOP"),
    ("~>", "SHIFTOP"),
    ("=", "EQ"),
    (",", "COMMA"),
    (";", "SEMI"),
    (":", "COLON"),
    ("(", "LPAREN"),
    (")", "RPAREN"),
    ("[", "LBRACKET"),
    ("]", "RBRACKET"),
    ("-", "MINUS"),
]


@dataclass(frozen=True)
class Token:
    kind: str  # KW, IDENT, INT, RAT, EOF or an operator kind
    text: str
    line: int
    col: int
    value: object = None

    @property
    def loc(self):
        return (self.line, self.col)

    def __repr__(self) -> str:
        return f"{self.kind}({self.text})@{self.line}:{self.col}"


class LexError(Exception):
    def __init__(self, diagnostics):
        super().__init__("; ".join(d.message for d in diagnostics))
        self.diagnostics = diagnostics


def tokenize(source: str, file: str = "<input>") -> list[Token]:
    """Split ``source`` into tokens (without a trailing EOF token).

    Raises :class:`LexError` listing every illegal character.
    """
    tokens: list[Token] = []
    errors = []
    i, line, col = 0, 1, 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r\f":
            i += 1
            col += 1
            continue
        if source.startswith("--", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            tokens.append(Token("KW" if word in KEYWORDS else "IDENT", word, line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j + 1 < n and source[j] == "/" and source[j + 1].isdigit():
                k = j + 1
                while k < n and source[k].isdigit():
                    k += 1
                text = source[i:k]
                den = int(source[j + 1:k])
                if den == 0:
                    errors.append(diag.error(diag.E_SYNTAX, f"zero denominator in {text}", (line, start_col), file))
                    value = Rational(0)
                else:
                    value = Rational(int(source[i:j]), den)
                tokens.append(Token("RAT", text, line, start_col, value))
                j = k
            else:
                text = source[i:j]
                tokens.append(Token("INT", text, line, start_col, int(text)))
            col += j - i
            i = j
            continue
        for op, kind in OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token(kind, op, line, start_col))
                i += len(op)
                col += len(op)
                break
        else:
            errors.append(diag.error(diag.E_ILLEGAL_CHARACTER, f"illegal character {ch!r}", (line, start_col), file))
            i += 1
            col += 1
    if errors:
        raise LexError(errors)
    return tokens
