"""Fuel-bounded evaluation to normal form, recording every step."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import EMPTY, Context, Term
from .rewrite import Done, Pos, StepKind, progress
from .syntax import elaborate, parse_term, print_term, print_type
from .typecheck import infer, is_normal, is_value

DEFAULT_FUEL = 100_000


@dataclass(frozen=True)
class TraceStep:
    kind: StepKind
    rule: str
    path: tuple[Pos, ...]
    before: Term
    after: Term


@dataclass(frozen=True)
class Trace:
    context: Context
    initial: Term
    steps: tuple[TraceStep, ...]
    final: Term
    final_is_value: bool


class FuelExhausted(Exception):
    code = "FuelExhausted"

    def __init__(self, fuel: int, trace: Trace):
        super().__init__(
            f"no normal form after {fuel} steps; well-typed terms are strongly normalizing, "
            "so either the fuel is too small or the evaluator has a bug")
        self.fuel = fuel
        self.trace = trace


class NotAValue(Exception):
    """A closed term reached a normal form that is not a value."""
    code = "NotAValue"


def evaluate(g: Context, t: Term, fuel: int = DEFAULT_FUEL) -> Trace:
    steps: list[TraceStep] = []
    current = t
    while True:
        r = progress(g, current)
        if isinstance(r, Done):
            break
        if len(steps) >= fuel:
            raise FuelExhausted(fuel, Trace(g, t, tuple(steps), current, False))
        steps.append(TraceStep(r.kind, r.rule, r.path, current, r.result))
        current = r.result
    value = is_value(current)
    if len(g) == 0 and not value:
        raise NotAValue(f"closed term stopped at a non-value normal form: {print_term(current)}")
    return Trace(g, t, tuple(steps), current, value)


_GLYPH = {StepKind.ISO: "<=>", StepKind.BETA: "|->"}


def _path_text(path: Sequence[Pos]) -> str:
    return ".".join(p.value for p in path) if path else "root"


def format_trace(tr: Trace, mode: str = "text", names: Sequence[str] = ()) -> str:
    if mode == "json":
        return json.dumps(trace_to_json(tr, names), ensure_ascii=False, indent=2)
    if mode != "text":
        raise ValueError(f"unknown trace format {mode!r}")
    lines = [
        f"{i} {_GLYPH[s.kind]} {s.rule} @ {_path_text(s.path)}  {print_term(s.after, names)}"
        for i, s in enumerate(tr.steps, 1)
    ]
    label = "normal form" if is_normal(tr.final) else "stopped at"
    lines.append(f"{len(tr.steps)} steps; {label}: {print_term(tr.final, names)}")
    return "\n".join(lines)


def trace_to_json(tr: Trace, names: Sequence[str] = ()) -> dict:
    return {
        "initial": print_term(tr.initial, names),
        "steps": [
            {
                "kind": s.kind.value,
                "rule": s.rule,
                "path": [p.value for p in s.path],
                "term": print_term(s.after, names),
                "type": print_type(infer(tr.context, s.after)),
            }
            for s in tr.steps
        ],
        "final": print_term(tr.final, names),
        "value": tr.final_is_value,
        "fuelUsed": len(tr.steps),
    }


def trace_from_json(data, names: Sequence[str] = (), context: Optional[Context] = None) -> Trace:
    """Rebuild a trace from :func:`trace_to_json` output (a dict or JSON text)."""
    if isinstance(data, str):
        data = json.loads(data)
    g = context if context is not None else EMPTY

    def term(text: str) -> Term:
        return elaborate(parse_term(text), names, context)

    before = term(data["initial"])
    steps = []
    for s in data["steps"]:
        after = term(s["term"])
        steps.append(TraceStep(StepKind(s["kind"]), s["rule"], tuple(Pos(p) for p in s["path"]), before, after))
        before = after
    final = term(data["final"])
    return Trace(g, term(data["initial"]), tuple(steps), final, bool(data["value"]))


def check_trace(tr: Trace) -> Optional[str]:
    """Structural and typing invariants of a trace; None when all hold."""
    expected = infer(tr.context, tr.initial)
    prev = tr.initial
    for i, s in enumerate(tr.steps, 1):
        if s.before != prev:
            return f"step {i} does not start where step {i - 1} ended"
        if s.after == s.before:
            return f"step {i} does not change the term"
        got = infer(tr.context, s.after)
        if got != expected:
            return f"step {i} ({s.rule}) changes the type from {print_type(expected)} to {print_type(got)}"
        prev = s.after
    if tr.final != prev:
        return "final term is not the last step's result"
    if not is_normal(tr.final):
        return "final term is not normal"
    return None
