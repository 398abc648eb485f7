"""Random well-typed terms and executable checks of preservation, progress,
termination and closed-normal-is-value.

Randomness comes from :class:`random.Random` (Mersenne Twister) seeded per
sample with ``seed * 2**32 + index``, and only ``rng.random()`` is consumed,
so reports are identical across platforms and Python versions.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

from .core import (
    EMPTY,
    STAR,
    TOP,
    App,
    Arrow,
    Context,
    Iso,
    Lam,
    Pair,
    Product,
    Proj,
    Side,
    Term,
    Type,
    Var,
)
from .evaluation import DEFAULT_FUEL
from .iso import synth_path, wrap_path
from .rewrite import Done, StuckTerm, progress
from .syntax import print_term, print_type
from .typecheck import TypeCheckError, infer, is_value


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    type_depth: int = 4
    term_fuel: int = 6
    iso_rate: float = 0.3
    count: int = 10_000
    fuel: int = DEFAULT_FUEL
    jobs: int = 1

    def __post_init__(self):
        if self.type_depth < 0:
            raise ValueError("type_depth must be >= 0")
        if not 0.0 <= self.iso_rate <= 1.0:
            raise ValueError("iso_rate must lie in [0, 1]")
        if self.count < 1:
            raise ValueError("count must be >= 1")


def _pick(rng: random.Random, options: Sequence):
    return options[int(rng.random() * len(options))]


def sample_rng(seed: int, index: int) -> random.Random:
    return random.Random(seed * 2**32 + index)


# ---------------------------------------------------------------------------
# Generation

def gen_type(rng: random.Random, depth: int) -> Type:
    if depth <= 0:
        return TOP
    match _pick(rng, ("top", "arrow", "product")):
        case "arrow":
            return Arrow(gen_type(rng, depth - 1), gen_type(rng, depth - 1))
        case "product":
            return Product(gen_type(rng, depth - 1), gen_type(rng, depth - 1))
    return TOP


def canonical(a: Type) -> Term:
    match a:
        case Arrow(x, y):
            return Lam(x, canonical(y))
        case Product(x, y):
            return Pair(canonical(x), canonical(y))
    return STAR


def _vars_of(g: Context, a: Type) -> list[Var]:
    return [Var(i) for i in range(len(g)) if g.lookup(i) == a]


def gen_term(rng: random.Random, g: Context, target: Type, fuel: int,
             iso_rate: float = 0.3, aux_depth: int = 2) -> Term:
    """A term with ``infer(g, result) == target``.

    ``aux_depth`` bounds the types invented along the way (argument types,
    the other half of projected pairs, coercion sources).
    """
    def go(g: Context, target: Type, fuel: int) -> Term:
        if fuel <= 0:
            vs = _vars_of(g, target)
            if vs and rng.random() < 0.5:
                return _pick(rng, vs)
            return canonical(target)
        if rng.random() < iso_rate:
            src = gen_type(rng, aux_depth)
            return wrap_path(synth_path(src, target), go(g, src, fuel - 1))
        forms = ["intro", "intro", "app", "proj"]
        vs = _vars_of(g, target)
        if vs:
            forms.append("var")
        match _pick(rng, forms):
            case "app":
                a = gen_type(rng, aux_depth)
                return App(go(g, Arrow(a, target), fuel - 1), go(g, a, fuel - 1))
            case "proj":
                other = gen_type(rng, aux_depth)
                if rng.random() < 0.5:
                    return Proj(target, Side.LEFT, go(g, Product(target, other), fuel - 1))
                return Proj(target, Side.RIGHT, go(g, Product(other, target), fuel - 1))
            case "var":
                return _pick(rng, vs)
        match target:
            case Arrow(a, b):
                return Lam(a, go(g.extend(a), b, fuel - 1))
            case Product(a, b):
                return Pair(go(g, a, fuel - 1), go(g, b, fuel - 1))
        return STAR

    return go(g, target, fuel)


def gen_sample(config: GenConfig, index: int) -> tuple[Type, Term]:
    rng = sample_rng(config.seed, index)
    target = gen_type(rng, config.type_depth)
    aux = max(0, min(2, config.type_depth // 2))
    return target, gen_term(rng, EMPTY, target, config.term_fuel, config.iso_rate, aux)


# ---------------------------------------------------------------------------
# Checking one term

PRESERVATION = "preservation"
PROGRESS = "progress"
TERMINATION = "termination"
VALUE = "value"
GENERATION = "generation"


@dataclass(frozen=True)
class Outcome:
    steps: int
    failure: Optional[str] = None
    detail: str = ""


def check_term(g: Context, t: Term, fuel: int, expected: Optional[Type] = None) -> Outcome:
    """Evaluate ``t`` checking every invariant along the way."""
    try:
        ty = infer(g, t)
    except TypeCheckError as e:
        return Outcome(0, GENERATION, f"does not typecheck: {e}")
    if expected is not None and ty != expected:
        return Outcome(0, GENERATION, f"has type {print_type(ty)}, wanted {print_type(expected)}")
    current, steps = t, 0
    while True:
        try:
            r = progress(g, current)
        except StuckTerm as e:
            return Outcome(steps, PROGRESS, f"stuck at {print_term(current)}: {e}")
        except Exception as e:  # a crash inside a rule is a progress failure too
            return Outcome(steps, PROGRESS, f"{type(e).__name__} at {print_term(current)}: {e}")
        if isinstance(r, Done):
            break
        if steps >= fuel:
            return Outcome(steps, TERMINATION, f"no normal form within {fuel} steps")
        steps += 1
        try:
            after = infer(g, r.result)
        except TypeCheckError as e:
            after = None
            why = str(e)
        if after != ty:
            shown = "an ill-typed term: " + why if after is None else print_type(after)
            return Outcome(steps, PRESERVATION,
                           f"step {steps} ({r.rule}) turns {print_term(current)} of type "
                           f"{print_type(ty)} into {print_term(r.result)}, {shown}")
        current = r.result
    if len(g) == 0 and not is_value(current):
        return Outcome(steps, VALUE, f"closed normal form {print_term(current)} is not a value")
    return Outcome(steps)


# ---------------------------------------------------------------------------
# Shrinking

def _positions(g: Context, t: Term, path=()):
    """Every subterm with its context and its path of child indices."""
    yield path, g, t
    match t:
        case Lam(a, b):
            yield from _positions(g.extend(a), b, path + (0,))
        case App(f, x) | Pair(f, x):
            yield from _positions(g, f, path + (0,))
            yield from _positions(g, x, path + (1,))
        case Proj(_, _, s) | Iso(_, s, _):
            yield from _positions(g, s, path + (0,))


def _replace(t: Term, path: tuple[int, ...], new: Term) -> Term:
    if not path:
        return new
    i, rest = path[0], path[1:]
    match t:
        case Lam(a, b):
            return Lam(a, _replace(b, rest, new))
        case App(f, x):
            return App(_replace(f, rest, new), x) if i == 0 else App(f, _replace(x, rest, new))
        case Pair(l, r):
            return Pair(_replace(l, rest, new), r) if i == 0 else Pair(l, _replace(r, rest, new))
        case Proj(c, side, s):
            return Proj(c, side, _replace(s, rest, new))
        case Iso(w, s, target):
            return Iso(w, _replace(s, rest, new), target)
    raise ValueError("path leads outside the term")


def shrink(g: Context, t: Term, fails: Callable[[Term], bool], budget: int = 500) -> Term:
    """Replace subterms by canonical inhabitants of their type while ``fails``
    still holds; outermost candidates first."""
    changed = True
    while changed and budget > 0:
        changed = False
        for path, h, sub in _positions(g, t):
            try:
                candidate = canonical(infer(h, sub))
            except TypeCheckError:
                continue
            if candidate == sub:
                continue
            budget -= 1
            smaller = _replace(t, path, candidate)
            if fails(smaller):
                t, changed = smaller, True
                break
            if budget <= 0:
                break
    return t


# ---------------------------------------------------------------------------
# Suite

@dataclass(frozen=True)
class Failure:
    kind: str
    index: int
    term: str
    shrunk: str
    detail: str


@dataclass
class SuiteReport:
    generated: int = 0
    steps: int = 0
    max_steps: int = 0
    failures: list[Failure] = field(default_factory=list)

    def count(self, kind: str) -> int:
        return sum(1 for f in self.failures if f.kind == kind)

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: "SuiteReport") -> "SuiteReport":
        return SuiteReport(self.generated + other.generated, self.steps + other.steps,
                           max(self.max_steps, other.max_steps), self.failures + other.failures)

    def to_text(self) -> str:
        lines = [f"generated {self.generated} terms, {self.steps} steps in total "
                 f"(longest trace {self.max_steps})"]
        for kind in (GENERATION, PRESERVATION, PROGRESS, TERMINATION, VALUE):
            lines.append(f"{kind + ' failures:':<26}{self.count(kind)}")
        for f in self.failures:
            lines.append(f"[{f.kind}] sample {f.index}: {f.detail}")
            lines.append(f"    shrunk: {f.shrunk}")
        return "\n".join(lines)

    def to_json(self) -> str:
        data = {
            "generated": self.generated,
            "steps": self.steps,
            "maxSteps": self.max_steps,
            **{f"{k}Failures": self.count(k) for k in (GENERATION, PRESERVATION, PROGRESS, TERMINATION, VALUE)},
            "counterexamples": [asdict(f) for f in self.failures],
        }
        return json.dumps(data, ensure_ascii=False, indent=2)


def _check_one(index: int, g: Context, t: Term, fuel: int, expected: Optional[Type]) -> SuiteReport:
    out = check_term(g, t, fuel, expected)
    report = SuiteReport(1, out.steps, out.steps)
    if out.failure is not None:
        kind = out.failure
        if kind == GENERATION:
            small = t
        else:
            small = shrink(g, t, lambda u: check_term(g, u, fuel).failure == kind)
        report.failures.append(Failure(kind, index, print_term(t), print_term(small), out.detail))
    return report


def _run_range(config: GenConfig, start: int, stop: int) -> SuiteReport:
    report = SuiteReport()
    for i in range(start, stop):
        target, t = gen_sample(config, i)
        report = report.merge(_check_one(i, EMPTY, t, config.fuel, target))
    return report


def run_suite(config: GenConfig, corpus: Optional[Sequence[tuple[Context, Term]]] = None) -> SuiteReport:
    """Check ``config.count`` generated closed terms, or the given corpus
    instead when one is supplied."""
    if corpus is not None:
        report = SuiteReport()
        for i, (g, t) in enumerate(corpus):
            report = report.merge(_check_one(i, g, t, config.fuel, None))
        return report
    if config.jobs <= 1:
        return _run_range(config, 0, config.count)
    # contiguous index blocks, merged in order, so the report does not depend on jobs
    size = -(-config.count // config.jobs)
    bounds = [(s, min(s + size, config.count)) for s in range(0, config.count, size)]
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        parts = list(pool.map(_run_range, [config] * len(bounds), *zip(*bounds)))
    report = SuiteReport()
    for part in parts:
        report = report.merge(part)
    return report
