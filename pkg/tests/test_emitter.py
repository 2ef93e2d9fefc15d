import pytest

from preludec.emitter import EmitError, HEADER, emit_typed_ir, render_flow_type
from preludec.parser import parse
from preludec.types import ArrayType, INT, bflow, sflow
from preludec.clocks import Clock
from preludec.rational import Rational

from corpus import DATA, MONITOR, MUTANTS, SAMPLING, collapse, emitted_function, reference_translation


def emit(src):
    return emit_typed_ir(parse(src))


def test_sampling_golden():
    assert emit(SAMPLING) == (DATA / "sampling.ir").read_text()


def test_monitor_golden():
    assert emit(MONITOR) == (DATA / "monitor.ir").read_text()


def test_sampling_matches_reference_translation():
    ours = emitted_function(emit(SAMPLING), "sampling")
    assert collapse(ours) == collapse(reference_translation())


def test_futures_balanced():
    ir = emit(SAMPLING)
    assert ir.count("flow_future_make") == 2
    assert ir.count("flow_future_elim") == 2
    assert "pfo" not in ir


def test_empty_program():
    assert emit("") == HEADER


@pytest.mark.parametrize("name", sorted(MUTANTS))
def test_refuses_rejected_programs(name):
    with pytest.raises(EmitError):
        emit(MUTANTS[name][0])


def test_deterministic():
    assert len({emit(SAMPLING + MONITOR) for _ in range(3)}) == 1


def test_flow_type_rendering():
    c = Clock(10, Rational(1, 2))
    assert render_flow_type(sflow(INT, c)) == "SFlow (int, 10, 1/2)"
    assert render_flow_type(bflow(ArrayType(INT, 3), c)) == "BFlow (array (int, 3), 10, 1/2)"


def test_operators_and_literals():
    ir = emit(
        "node n (a: rate (10, 0); c: bool rate (10, 0)) returns (x: rate (10, 0); q: int[2] rate (20, 0))"
        " let x = merge(c, cons(-3, tail(a)), a ~> 0); q = (1 fby a) /^^ 2 tel"
    )
    assert "flow_merge (c, flow_cons (~3, flow_tail (a)), flow_shift (a, 0))" in ir
    assert "val q = flow_div_queue (a', 2)" in ir
    assert "val a' = (flow_fby (1, a))" in ir
    assert "SFlow (array (int, 2), 20, 0)" in ir


def test_fby_not_hoisted_after_redefinition():
    # once x' names the definition of x, a later delay of x is inlined
    ir = emit(
        "node n (a: rate (10, 0)) returns (y: rate (10, 0)) var x: rate (10, 0);"
        " let x = a; y = 0 fby x tel"
    )
    assert "val x' = a" in ir
    assert "val y = flow_fby (0, x)" in ir
