"""Clock checker, simulator and typed-IR emitter for multi-rate synchronous flow programs."""

from .clocks import Clock, ClockError, clock_validate
from .diagnostics import Diagnostic, render_diagnostics
from .elaborator import Elaboration, check_program, elaborate
from .emitter import emit_typed_ir
from .parser import ParseError, parse
from .rational import Rational
from .sim import SimConfig, TaggedStream, sim_node

__all__ = [
    "Clock",
    "ClockError",
    "Diagnostic",
    "Elaboration",
    "ParseError",
    "Rational",
    "SimConfig",
    "TaggedStream",
    "check_program",
    "clock_validate",
    "elaborate",
    "emit_typed_ir",
    "parse",
    "render_diagnostics",
    "sim_node",
]

__version__ = "0.1.0"
