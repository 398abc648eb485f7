import json

import pytest
from hypothesis import given, settings

from isocalc.core import ABS, EMPTY, STAR, TOP, App, Arrow, Context, Iso, Lam, Sym, Var
from isocalc.evaluation import (
    FuelExhausted,
    NotAValue,
    check_trace,
    evaluate,
    format_trace,
    trace_from_json,
    trace_to_json,
)
from isocalc.rewrite import Pos, StepKind
from strategies import typed_terms

TT = Arrow(TOP, TOP)
SELF = Lam(TOP, App(Iso(Sym(ABS), Var(0), TT), Var(0)))
OMEGA = App(SELF, Iso(ABS, SELF))


def test_star_evaluates_to_itself():
    tr = evaluate(EMPTY, STAR, 10)
    assert tr.steps == () and tr.final == STAR and tr.final_is_value
    assert format_trace(tr) == "0 steps; normal form: *"


def test_omega_trace():
    tr = evaluate(EMPTY, OMEGA, 100)
    assert [s.kind for s in tr.steps] == [StepKind.ISO, StepKind.BETA] * 3
    assert [s.rule for s in tr.steps] == ["abs-i", "β-λ", "abs-i", "β-λ", "abs", "β-λ"]
    A, B, L, I = Pos.APP_LEFT, Pos.APP_RIGHT, Pos.LAM_BODY, Pos.ISO_BODY
    assert [s.path for s in tr.steps] == [(A, L, A), (A, L), (B, I, L, A), (B, I, L), (B,), ()]
    assert tr.final == STAR and tr.final_is_value
    assert check_trace(tr) is None
    lines = format_trace(tr).splitlines()
    assert lines[0].startswith("1 <=> abs-i @ AppLeft.LamBody.AppLeft  ")
    assert lines[5] == "6 |-> β-λ @ root  *"
    assert lines[6] == "6 steps; normal form: *"


def test_zero_fuel():
    with pytest.raises(FuelExhausted) as e:
        evaluate(EMPTY, App(Lam(TOP, Var(0)), STAR), 0)
    assert "strongly normalizing" in str(e.value)
    assert e.value.trace.steps == ()


def test_partial_trace_on_exhaustion():
    with pytest.raises(FuelExhausted) as e:
        evaluate(EMPTY, OMEGA, 2)
    assert len(e.value.trace.steps) == 2
    assert "stopped at" in format_trace(e.value.trace)


def test_open_terms_end_in_normal_forms():
    g = Context.of([TOP])
    tr = evaluate(g, App(Lam(TOP, Var(0)), Var(0)))
    assert tr.final == Var(0) and not tr.final_is_value


def test_closed_non_value_is_reported():
    # not well typed, so the value check is what catches it
    with pytest.raises(NotAValue):
        evaluate(EMPTY, Var(0))


def test_json_schema():
    data = trace_to_json(evaluate(EMPTY, OMEGA))
    assert set(data) == {"initial", "steps", "final", "value", "fuelUsed"}
    assert data["fuelUsed"] == 6 and data["value"] is True and data["final"] == "*"
    assert data["steps"][0] == {
        "kind": "iso", "rule": "abs-i", "path": ["AppLeft", "LamBody", "AppLeft"],
        "term": data["steps"][0]["term"], "type": "T",
    }
    assert json.loads(format_trace(evaluate(EMPTY, OMEGA), "json")) == data


@settings(max_examples=60)
@given(typed_terms(fuel=4))
def test_json_round_trip(sample):
    g, t, _ = sample
    names = [f"v{i}" for i in range(len(g))]
    tr = evaluate(g, t)
    assert check_trace(tr) is None
    text = format_trace(tr, "json", names)
    back = trace_from_json(text, names, g)
    assert back == tr
    assert format_trace(back, "json", names) == text
