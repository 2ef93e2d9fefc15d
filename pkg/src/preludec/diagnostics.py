"""Diagnostics shared by the parser and the elaborator, plus their renderers."""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass
from typing import Iterable, Optional

ERROR = "error"
WARNING = "warning"

# Stable diagnostic codes.  Clock-level failures reuse the code attached to
# the corresponding ClockError subclass.
E_SYNTAX = "E_SYNTAX"
E_ILLEGAL_CHARACTER = "E_ILLEGAL_CHARACTER"
E_DUPLICATE_NAME = "E_DUPLICATE_NAME"
E_CLOCK_MISMATCH = "E_CLOCK_MISMATCH"
E_DIVISIBILITY = "E_DIVISIBILITY"
E_UNDEFINED_FLOW = "E_UNDEFINED_FLOW"
E_MULTIPLE_DEFINITION = "E_MULTIPLE_DEFINITION"
E_CAUSALITY_CYCLE = "E_CAUSALITY_CYCLE"
E_BOOLEAN_FLOW_MISUSE = "E_BOOLEAN_FLOW_MISUSE"
E_ARITY = "E_ARITY"
E_VALUE_TYPE = "E_VALUE_TYPE"
E_UNKNOWN_FLOW = "E_UNKNOWN_FLOW"
E_UNKNOWN_NODE = "E_UNKNOWN_NODE"
E_INPUT_ASSIGNED = "E_INPUT_ASSIGNED"
E_CONSTANT_FLOW = "E_CONSTANT_FLOW"
E_RECURSIVE_NODE = "E_RECURSIVE_NODE"
W_NEGATIVE_START = "W_NEGATIVE_START"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    line: int
    col: int
    file: str = "<input>"
    expected: Optional[str] = None
    actual: Optional[str] = None

    @property
    def is_error(self) -> bool:
        return self.severity == ERROR

    def sort_key(self):
        return (self.file, self.line, self.col, self.code, self.message)

    def to_json(self) -> dict:
        return {
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
            "file": self.file,
            "line": self.line,
            "col": self.col,
            "expected": self.expected,
            "actual": self.actual,
        }


def error(code: str, message: str, loc, file: str = "<input>", expected=None, actual=None) -> Diagnostic:
    line, col = loc
    return Diagnostic(
        ERROR, code, message, line, col, file,
        None if expected is None else str(expected),
        None if actual is None else str(actual),
    )


def warning(code: str, message: str, loc, file: str = "<input>") -> Diagnostic:
    line, col = loc
    return Diagnostic(WARNING, code, message, line, col, file)


def sort_diagnostics(ds: Iterable[Diagnostic]) -> list[Diagnostic]:
    return sorted(ds, key=Diagnostic.sort_key)


def has_errors(ds: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in ds)


def promote_warnings(ds: Iterable[Diagnostic], codes: set[str]) -> list[Diagnostic]:
    out = []
    for d in ds:
        if d.severity == WARNING and d.code in codes:
            d = Diagnostic(ERROR, d.code, d.message, d.line, d.col, d.file, d.expected, d.actual)
        out.append(d)
    return out


_COLORS = {ERROR: "\x1b[31m", WARNING: "\x1b[33m"}
_RESET = "\x1b[0m"


def _use_color(stream) -> bool:
    mode = os.environ.get("PRELUDEC_COLOR", "auto").lower()
    if mode == "always":
        return True
    if mode == "never":
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def render_diagnostics(ds: Iterable[Diagnostic], format: str = "human", color: bool = False) -> str:
    """Render diagnostics as ``human`` lines or a ``json`` array."""
    ds = sort_diagnostics(ds)
    if format == "json":
        return json.dumps([d.to_json() for d in ds], indent=2)
    if format != "human":
        raise ValueError(f"unknown diagnostic format {format!r}")
    lines = []
    for d in ds:
        sev = d.severity
        if color:
            sev = f"{_COLORS[d.severity]}{sev}{_RESET}"
        text = f"{d.file}:{d.line}:{d.col}: {sev}[{d.code}]: {d.message}"
        if d.expected is not None or d.actual is not None:
            text += f" (expected {d.expected}, actual {d.actual})"
        lines.append(text)
    return "\n".join(lines)


def render_for_stream(ds: Iterable[Diagnostic], stream=None) -> str:
    stream = stream if stream is not None else sys.stderr
    return render_diagnostics(ds, "human", color=_use_color(stream))
