import pytest

from preludec.clocks import Clock
from preludec.elaborator import build_signatures, check_program, elaborate, infer_expr_type
from preludec.parser import parse
from preludec.rational import Rational
from preludec.types import BOOL, INT, ArrayType, FlowType, Kind, bflow, sflow

from corpus import MONITOR, MUTANTS, SAMPLING


def C(n, num=0, den=1):
    return Clock(n, Rational(num, den))


def codes(ds, severity="error"):
    return sorted(d.code for d in ds if d.severity == severity)


def check(src):
    return check_program(parse(src))


def node_src(params, outs, body, locals_=""):
    return f"node n ({params}) returns ({outs}) {locals_} let {body} tel"


class TestSignatures:
    def test_reference_headers(self):
        sigs, ds = build_signatures(parse(SAMPLING))
        assert ds == []
        assert sigs["database"].inputs == (sflow(INT, C(10)),)
        assert sigs["database"].outputs == (sflow(INT, C(10)),)
        assert sigs["controller"].inputs == (sflow(INT, C(100)),) * 2
        assert sigs["controller"].outputs == (sflow(INT, C(100)),) * 2
        assert sigs["database"].imported and not sigs["sampling"].imported

    def test_non_positive_period(self):
        _, ds = build_signatures(parse("imported node f (x: rate (0, 0)) returns ();"))
        assert codes(ds) == ["E_NONPOSITIVE_PERIOD"]

    def test_non_integer_start(self):
        _, ds = build_signatures(parse("imported node f (x: rate (10, 1/3)) returns ();"))
        assert codes(ds) == ["E_NONINTEGER_START"]

    def test_duplicate_names(self):
        ds = check(SAMPLING + "\n" + SAMPLING.split("sensor")[0])
        assert codes(ds) == ["E_DUPLICATE_NAME", "E_DUPLICATE_NAME"]
        ds = check("sensor a; actuator a; imported node a () returns ();")
        assert codes(ds) == ["E_DUPLICATE_NAME"]

    def test_duplicate_flow_in_node(self):
        ds = check(node_src("a: rate (1, 0)", "a: rate (1, 0)", "a = 0 fby a"))
        assert "E_DUPLICATE_NAME" in codes(ds)

    def test_negative_start_declaration_warns(self):
        ds = check(node_src("a: rate (10, -1)", "b: rate (10, -1)", "b = a"))
        assert codes(ds) == []
        assert codes(ds, "warning") == ["W_NEGATIVE_START", "W_NEGATIVE_START"]


class TestInferExpr:
    def infer(self, env, text):
        e = parse(f"node n () returns () let y = {text} tel").nodes[0].equations[0].rhs
        return infer_expr_type(env, e)

    def test_under_sampling(self):
        t, ds = self.infer({"i": sflow(INT, C(10))}, "i/^10")
        assert ds == [] and t == sflow(INT, C(100))

    def test_over_sampling(self):
        t, ds = self.infer({"command": sflow(INT, C(100))}, "command*^10")
        assert ds == [] and t == sflow(INT, C(10))

    def test_when_yields_boolean_flow(self):
        env = {"temperature": sflow(INT, C(10)), "fault": sflow(BOOL, C(100))}
        t, ds = self.infer(env, "(temperature /^ 10) when fault")
        assert ds == [] and t == bflow(INT, C(100))

    def test_boolean_flow_rejected_by_clock_operator(self):
        t, ds = self.infer({"x": bflow(INT, C(100))}, "x*^2")
        assert t is None and codes(ds) == ["E_BOOLEAN_FLOW_MISUSE"]

    @pytest.mark.parametrize("text", ["merge(c, x, x)", "0 fby x", "tail(x)", "x ~> 1", "x when c"])
    def test_boolean_flow_rejected_everywhere(self, text):
        t, ds = self.infer({"x": bflow(INT, C(10)), "c": sflow(BOOL, C(10))}, text)
        assert t is None and set(codes(ds)) == {"E_BOOLEAN_FLOW_MISUSE"}

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("x ~> 1/2", sflow(INT, C(10, 1, 2))),
            ("cons(3, x)", sflow(INT, C(10, -1))),
            ("tail(x)", sflow(INT, C(10, 1))),
            ("0 fby x", sflow(INT, C(10))),
            ("x /^^ 3", sflow(ArrayType(INT, 3), C(30))),
            ("merge(c, x, 1 fby x)", sflow(INT, C(10))),
            ("tail(cons(1, x))", sflow(INT, C(10))),
        ],
    )
    def test_operator_rules(self, text, expected):
        t, ds = self.infer({"x": sflow(INT, C(10)), "c": sflow(BOOL, C(10))}, text)
        assert [d.code for d in ds if d.is_error] == []
        assert t == expected

    def test_cons_warns_negative_start(self):
        _, ds = self.infer({"x": sflow(INT, C(10))}, "cons(3, x)")
        assert codes(ds, "warning") == ["W_NEGATIVE_START"]

    @pytest.mark.parametrize(
        "text, code",
        [
            ("x*^3", "E_DIVISIBILITY"),
            ("x/^0", "E_NONPOSITIVE_FACTOR"),
            ("x/^^0", "E_NONPOSITIVE_FACTOR"),
            ("x ~> 1/3", "E_NONINTEGER_SHIFT"),
            ("true fby x", "E_VALUE_TYPE"),
            ("x when x", "E_VALUE_TYPE"),
            ("x when (c ~> 1)", "E_CLOCK_MISMATCH"),
            ("merge(c, x, x ~> 1)", "E_CLOCK_MISMATCH"),
            ("merge(x, x, x)", "E_VALUE_TYPE"),
            ("merge(c, x, c)", "E_VALUE_TYPE"),
            ("nope", "E_UNKNOWN_FLOW"),
            ("3", "E_CONSTANT_FLOW"),
            ("f(x)", "E_UNKNOWN_NODE"),
        ],
    )
    def test_operator_errors(self, text, code):
        t, ds = self.infer({"x": sflow(INT, C(10)), "c": sflow(BOOL, C(10))}, text)
        assert t is None
        assert codes(ds) == [code]

    def test_mismatch_reports_clocks(self):
        _, ds = self.infer({"x": sflow(INT, C(10)), "c": sflow(BOOL, C(10))}, "x when (c ~> 1)")
        assert (ds[0].expected, ds[0].actual) == ("(10, 0)", "(10, 1)")


class TestCheckNode:
    def test_reference_programs_accepted(self):
        assert check(SAMPLING) == []
        assert check(MONITOR) == []

    def test_monitor_output_type(self):
        elab = elaborate(parse(MONITOR))
        assert elab.inferred["monitor"]["alert"] == FlowType(INT, Kind.BOOLEAN, C(100))
        assert elab.signatures["monitor"].outputs == (bflow(INT, C(100)),)

    @pytest.mark.parametrize("name", sorted(MUTANTS))
    def test_mutants(self, name):
        src, code = MUTANTS[name]
        assert set(codes(check(src))) == {code}

    def test_command_rate_mutant_details(self):
        # hand-applied rules: controller's second output is on (100, 0) while
        # command is now declared (10, 0); database then receives
        # (10, 0) *^ 10 = (1, 0) where it expects (10, 0)
        ds = check(MUTANTS["command_rate"][0])
        got = sorted((d.line, d.expected, d.actual) for d in ds)
        assert got == [(17, "(10, 0)", "(100, 0)"), (18, "(10, 0)", "(1, 0)")]

    def test_undefined_flow_reported_at_declaration(self):
        (d,) = check(MUTANTS["no_response_eq"][0])
        assert (d.code, d.line) == ("E_UNDEFINED_FLOW", 15)
        assert "response" in d.message

    def test_multiple_definition_at_second(self):
        (d,) = check(MUTANTS["dup_response_eq"][0])
        assert (d.code, d.line) == ("E_MULTIPLE_DEFINITION", 19)

    def test_futures_defined_once(self):
        elab = elaborate(parse(SAMPLING))
        futs = elab.futures["sampling"]
        assert sorted(futs) == ["command", "o", "response"]
        assert all(f.defined for f in futs.values())

    def test_arity_and_assignment_errors(self):
        base = "imported node f (a: rate (10, 0)) returns (b: rate (10, 0); c: rate (10, 0));\n"
        assert codes(check(base + node_src("x: rate (10, 0)", "y: rate (10, 0)", "y = f(x)"))) == ["E_ARITY"]
        assert codes(check(base + node_src("x: rate (10, 0)", "y: rate (10, 0)", "y = f(x, x)"))) == ["E_ARITY"]
        assert codes(check(base + node_src("x: rate (10, 0)", "y: rate (10, 0)", "y = x; x = y"))) == ["E_INPUT_ASSIGNED"]
        assert codes(check(base + node_src("x: rate (10, 0)", "y: rate (10, 0)", "y = x; z = x"))) == ["E_UNKNOWN_FLOW"]
        assert codes(check(base + node_src("x: rate (10, 0)", "y: rate (10, 0)", "y = f(x) *^ 2"))) == ["E_ARITY"]

    def test_argument_checks(self):
        base = "imported node f (a: rate (10, 0)) returns (b: rate (10, 0));\n"
        ds = check(base + node_src("x: rate (20, 0)", "y: rate (10, 0)", "y = f(x)"))
        assert codes(ds) == ["E_CLOCK_MISMATCH"]
        assert (ds[0].expected, ds[0].actual) == ("(10, 0)", "(20, 0)")
        ds = check(base + node_src("x: bool rate (10, 0)", "y: rate (10, 0)", "y = f(x)"))
        assert codes(ds) == ["E_VALUE_TYPE"]
        ds = check(base + node_src("x: rate (10, 0); c: bool rate (10, 0)", "y: rate (10, 0)", "y = f(x when c)"))
        assert codes(ds) == ["E_BOOLEAN_FLOW_MISUSE"]

    def test_boolean_kind_propagates_through_copies_and_calls(self):
        src = MONITOR + """
        node top (t: rate (10, 0); f: bool rate (100, 0)) returns (a: rate (100, 0))
          var m: rate (100, 0);
        let m = monitor(t, f); a = m tel"""
        elab = elaborate(parse(src))
        assert elab.diagnostics == []
        assert elab.flow_types["top"]["a"].kind is Kind.BOOLEAN
        bad = src.replace("a = m", "a = m *^ 1")
        assert codes(check(bad)) == ["E_BOOLEAN_FLOW_MISUSE"]

    def test_recursive_nodes_rejected(self):
        src = node_src("x: rate (1, 0)", "y: rate (1, 0)", "y = n(x)")
        assert codes(check(src)) == ["E_RECURSIVE_NODE"]

    def test_value_type_of_definition(self):
        ds = check(node_src("x: rate (10, 0)", "y: bool rate (10, 0)", "y = x"))
        assert codes(ds) == ["E_VALUE_TYPE"]
        ds = check(node_src("x: rate (10, 0)", "y: int[2] rate (20, 0)", "y = x /^^ 2"))
        assert ds == []

    def test_invalid_declared_clock_does_not_cascade(self):
        ds = check(node_src("x: rate (10, 1/3)", "y: rate (10, 0)", "y = x"))
        assert codes(ds) == ["E_NONINTEGER_START"]


class TestCausality:
    def test_undelayed_self_loop(self):
        ds = check(node_src("a: rate (1, 0)", "x: rate (1, 0)", "x = x"))
        assert codes(ds) == ["E_CAUSALITY_CYCLE"]

    def test_delayed_self_loop(self):
        assert check(node_src("a: rate (1, 0)", "x: rate (1, 0)", "x = 0 fby x")) == []

    def test_reference_cycle_broken_by_fby(self):
        assert check(SAMPLING) == []

    def test_cycle_without_fby_lists_members(self):
        (d,) = check(MUTANTS["no_fby"][0])
        assert d.code == "E_CAUSALITY_CYCLE"
        assert "command" in d.message and "response" in d.message

    def test_positive_shift_delays(self):
        src = node_src("a: rate (2, 0)", "x: rate (2, 1)", "x = cons(0, x ~> 1)")
        assert check(src) == []

    def test_cons_of_tail_is_not_a_delay(self):
        # cons undoes the tail's advance, so x depends on itself at the same date
        src = node_src("a: rate (2, 0)", "x: rate (2, 0)", "x = cons(0, tail(x))")
        assert codes(check(src)) == ["E_CAUSALITY_CYCLE"]

    def test_negative_shift_cancels_fby(self):
        src = node_src("a: rate (2, 0)", "x: rate (2, 0)", "x = 0 fby tail(x ~> -1)")
        assert codes(check(src)) == ["E_CAUSALITY_CYCLE"]

    def test_delay_through_concrete_node(self):
        callee = node_src("u: rate (10, 0)", "v: rate (10, 0)", "v = 0 fby u").replace("node n", "node delay")
        caller = "node top (a: rate (10, 0)) returns (x: rate (10, 0)) let x = delay(x) tel"
        assert check(callee + "\n" + caller) == []
        passthrough = callee.replace("0 fby u", "u")
        assert codes(check(passthrough + "\n" + caller)) == ["E_CAUSALITY_CYCLE"]

    def test_callee_output_independent_of_input(self):
        callee = "node k (u: rate (10, 0); w: rate (10, 0)) returns (v: rate (10, 0)) let v = w tel"
        caller = "node top (a: rate (10, 0)) returns (x: rate (10, 0)) let x = k(x, a) tel"
        assert check(callee + "\n" + caller) == []


class TestMutationSensitivity:
    """Every single edit from the mutation families breaks the reference program."""

    RATES = [("rate (10, 0)", "rate (20, 0)"), ("rate (100, 0)", "rate (50, 0)"), ("rate (10, 0)", "rate (10, 1)")]

    def test_every_rate_literal(self):
        import re

        spots = [m.start() for m in re.finditer(r"rate \(", SAMPLING)]
        assert len(spots) == 10
        for pos in spots:
            for old, new in self.RATES:
                if SAMPLING.startswith(old, pos):
                    mutant = SAMPLING[:pos] + new + SAMPLING[pos + len(old):]
                    assert any(d.is_error for d in check(mutant)), (pos, new)

    @pytest.mark.parametrize("old, new", [
        ("i/^10", "i/^5"), ("i/^10", "i/^2"), ("response)/^10", "response)/^5"),
        ("command*^10", "command*^5"), ("command*^10", "command*^2"),
    ])
    def test_every_factor(self, old, new):
        assert any(d.is_error for d in check(SAMPLING.replace(old, new)))

    @pytest.mark.parametrize("name", ["no_fby", "no_response_eq"])
    def test_deletions(self, name):
        assert any(d.is_error for d in check(MUTANTS[name][0]))

    def test_delete_other_equation(self):
        mutant = SAMPLING.replace("  (o, command) = controller(i/^10, (0 fby response)/^10);\n", "")
        assert codes(check(mutant)) == ["E_UNDEFINED_FLOW", "E_UNDEFINED_FLOW"]


def test_diagnostics_deterministic():
    src = "\n".join(m[0] for m in MUTANTS.values())
    runs = [check(src) for _ in range(3)]
    assert runs[0] == runs[1] == runs[2]
    assert runs[0] == sorted(runs[0], key=lambda d: d.sort_key())
