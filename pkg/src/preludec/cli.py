"""Command-line driver: ``preludec check|emit|simulate``.

Exit codes: 0 success, 1 diagnostics (or a failed simulation), 2 usage or IO
errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import diagnostics as diag
from .elaborator import Elaboration, elaborate
from .emitter import emit_typed_ir
from .parser import ParseError, parse
from .sim import SimConfig, SimulationError, dump_streams, sim_node

EXIT_OK, EXIT_DIAGNOSTICS, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as exc:
        raise _UsageError(f"cannot write {path}: {exc.strerror}") from None


def _frontend(path: str, strict_start: bool = False):
    """Parse and check ``path``; returns (program, elaboration, diagnostics)."""
    source = _read(path)
    try:
        program = parse(source, path)
    except ParseError as exc:
        return None, None, exc.diagnostics
    elab = elaborate(program)
    ds = elab.diagnostics
    if strict_start:
        ds = diag.promote_warnings(ds, {diag.W_NEGATIVE_START})
    return program, elab, diag.sort_diagnostics(ds)


def _report(ds, as_json: bool = False) -> None:
    if as_json:
        sys.stdout.write(diag.render_diagnostics(ds, "json") + "\n")
    elif ds:
        sys.stderr.write(diag.render_for_stream(ds, sys.stderr) + "\n")


def cmd_check(args) -> int:
    _, _, ds = _frontend(args.file, args.strict_start_dates)
    _report(ds, args.json)
    return EXIT_DIAGNOSTICS if diag.has_errors(ds) else EXIT_OK


def cmd_emit(args) -> int:
    program, elab, ds = _frontend(args.file)
    if diag.has_errors(ds):
        _report(ds)
        return EXIT_DIAGNOSTICS
    _write(args.output, emit_typed_ir(program, elab))
    return EXIT_OK


def _passthrough_stubs(elab: Elaboration) -> dict:
    stubs = {}
    for sig in elab.signatures.values():
        if sig.imported and len(sig.inputs) == len(sig.outputs) and len(sig.inputs) != 1:
            stubs[sig.name] = lambda *vs: vs
    return stubs


def cmd_simulate(args) -> int:
    program, elab, ds = _frontend(args.file)
    if diag.has_errors(ds):
        _report(ds)
        return EXIT_DIAGNOSTICS
    if args.hyperperiods < 1:
        raise _UsageError("--hyperperiods must be at least 1")
    stubs = {} if args.strict_stubs else _passthrough_stubs(elab)
    cfg = SimConfig(horizon=args.hyperperiods, stubs=stubs)
    try:
        streams = sim_node(program, args.node, cfg, elaboration=elab, all_flows=True)
    except SimulationError as exc:
        sys.stderr.write(f"preludec: simulation failed: {exc}\n")
        return EXIT_DIAGNOSTICS
    _write(args.dump, dump_streams(streams))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="preludec", description="Clock checker for multi-rate flow programs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check that all flows are well clocked")
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="print diagnostics as a JSON array on stdout")
    p.add_argument(
        "--strict-start-dates",
        action="store_true",
        help="treat negative start dates (W_NEGATIVE_START) as errors",
    )
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("emit", help="emit the typed flow IR")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    p.add_argument("--format", choices=["typed-ir"], default="typed-ir")
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("simulate", help="simulate a node and dump its flows")
    p.add_argument("file")
    p.add_argument("--node", required=True)
    p.add_argument("--hyperperiods", type=int, default=1)
    p.add_argument("--dump", default=None, help="dump file (default: stdout)")
    p.add_argument(
        "--strict-stubs",
        action="store_true",
        help="do not pass values straight through multi-input imported nodes",
    )
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"preludec: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
