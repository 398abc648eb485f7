"""Renamings, substitutions, the two root step relations and the progress
strategy that finds the next redex."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .core import (
    STAR,
    TOP,
    Abs,
    App,
    Asso,
    Comm,
    CongArrow1,
    CongArrow2,
    CongProd1,
    CongProd2,
    Context,
    Curry,
    Dist,
    IdArrow,
    IdProd,
    Iso,
    Lam,
    Pair,
    Product,
    Proj,
    Side,
    Star,
    Sym,
    Term,
    Type,
    Var,
)
from .iso import NotApplicable, apply_iso, needs_target, sym_normalize
from .typecheck import (
    NF_LAM,
    NF_NEUTRAL,
    NF_STAR,
    NfLam,
    NfNeutral,
    NfPair,
    NormalKind,
    infer,
)

Renaming = Callable[[int], int]
Substitution = Callable[[int], Term]


# ---------------------------------------------------------------------------
# Renamings and substitutions

def shift(i: int) -> int:
    return i + 1


def lift(r: Renaming) -> Renaming:
    return lambda i: 0 if i == 0 else r(i - 1) + 1


def ids(i: int) -> Term:
    return Var(i)


def cons(t: Term, s: Substitution) -> Substitution:
    return lambda i: t if i == 0 else s(i - 1)


def exts(s: Substitution) -> Substitution:
    return lambda i: Var(0) if i == 0 else rename(shift, s(i - 1))


def compose(s: Substitution, r: Renaming) -> Substitution:
    """``s ∘ r``: rename first, then substitute."""
    return lambda i: s(r(i))


def rename(r: Renaming, t: Term) -> Term:
    match t:
        case Var(i):
            return Var(r(i))
        case Star():
            return t
        case Lam(a, b):
            return Lam(a, rename(lift(r), b))
        case App(f, x):
            return App(rename(r, f), rename(r, x))
        case Pair(l, x):
            return Pair(rename(r, l), rename(r, x))
        case Proj(c, side, s):
            return Proj(c, side, rename(r, s))
        case Iso(w, s, target):
            return Iso(w, rename(r, s), target)
    raise TypeError(f"not a term: {t!r}")


def subst(s: Substitution, t: Term) -> Term:
    match t:
        case Var(i):
            return s(i)
        case Star():
            return t
        case Lam(a, b):
            return Lam(a, subst(exts(s), b))
        case App(f, x):
            return App(subst(s, f), subst(s, x))
        case Pair(l, r):
            return Pair(subst(s, l), subst(s, r))
        case Proj(c, side, u):
            return Proj(c, side, subst(s, u))
        case Iso(w, u, target):
            return Iso(w, subst(s, u), target)
    raise TypeError(f"not a term: {t!r}")


def subst_one(t: Term, s: Term) -> Term:
    """``t[s]``: replace index 0 by ``s`` and lower the other free indices."""
    return subst(cons(s, ids), t)


def sigma_curry(a: Type, b: Type) -> Substitution:
    """From the context ``Γ, a, b`` to ``Γ, a × b``."""
    def s(i: int) -> Term:
        if i == 0:
            return Proj(b, Side.RIGHT, Var(0))
        if i == 1:
            return Proj(a, Side.LEFT, Var(0))
        return Var(i - 1)
    return s


def sigma_uncurry() -> Substitution:
    """From the context ``Γ, a × b`` to ``Γ, a, b``."""
    return lambda i: Pair(Var(1), Var(0)) if i == 0 else Var(i + 1)


def _shift(t: Term) -> Term:
    return rename(shift, t)


# ---------------------------------------------------------------------------
# Root steps

class IllFormedRedex(Exception):
    code = "IllFormedRedex"


def step_beta_root(g: Context, t: Term) -> Optional[tuple[Term, str]]:
    match t:
        case App(Lam(_, b), s):
            return subst_one(b, s), "β-λ"
        case Proj(_, Side.LEFT, Pair(r, _)):
            return r, "β-π₁"
        case Proj(_, Side.RIGHT, Pair(_, s)):
            return s, "β-π₂"
    return None


def _coerce(w, t: Term, target: Callable[[], Type]) -> Term:
    return Iso(w, t, target() if needs_target(w) else None)


def step_iso_root(g: Context, t: Term) -> Optional[tuple[Term, str]]:
    """One term-isomorphism step at the root of ``Iso(w, v)`` with ``v`` normal.

    Returns None when no rule applies, which for a well-typed term means
    ``v`` is neutral and so is the whole coercion.
    """
    if not isinstance(t, Iso):
        return None
    w = sym_normalize(t.witness)
    v = t.subject
    x0 = Var(0)
    match w, v:
        case Comm(), Pair(r, s):
            return Pair(s, r), "comm"

        case Asso(), Pair(r, Pair(s, u)):
            return Pair(Pair(r, s), u), "asso"
        case Asso(), Pair(r, n):
            bc = infer(g, n)
            return Pair(Pair(r, Proj(bc.left, Side.LEFT, n)), Proj(bc.right, Side.RIGHT, n)), "split-asso"
        case Sym(Asso()), Pair(Pair(r, s), u):
            return Pair(r, Pair(s, u)), "sym-asso"
        case Sym(Asso()), Pair(n, u):
            ab = infer(g, n)
            return Pair(Proj(ab.left, Side.LEFT, n), Pair(Proj(ab.right, Side.RIGHT, n), u)), "split-sym-asso"

        case Dist(), Pair(Lam(a, r), Lam(_, s)):
            return Lam(a, Pair(r, s)), "dist-λ"
        case Dist(), Pair(Lam(a, r), n):
            return Lam(a, Pair(r, App(_shift(n), x0))), "dist-λη-r"
        case Dist(), Pair(n, Lam(a, s)):
            return Lam(a, Pair(App(_shift(n), x0), s)), "dist-λη-l"
        case Dist(), Pair(n1, n2):
            a = infer(g, n1).dom
            return Lam(a, Pair(App(_shift(n1), x0), App(_shift(n2), x0))), "η-dist-app"
        case Sym(Dist()), Lam(a, Pair(r, s)):
            return Pair(Lam(a, r), Lam(a, s)), "split-dist-λ"
        case Sym(Dist()), Lam(a, n):
            bc = infer(g.extend(a), n)
            return (Pair(Lam(a, Proj(bc.left, Side.LEFT, n)), Lam(a, Proj(bc.right, Side.RIGHT, n))),
                    "split-dist-λ-η")

        case Curry(), Lam(a, Lam(b, body)):
            return Lam(Product(a, b), subst(sigma_curry(a, b), body)), "curry"
        case Curry(), Lam(a, n):
            b = infer(g.extend(a), n).dom
            return Lam(Product(a, b), subst(sigma_curry(a, b), App(_shift(n), x0))), "η-curry"
        case Sym(Curry()), Lam(Product(a, b), body):
            return Lam(a, Lam(b, subst(sigma_uncurry(), body))), "uncurry"

        case IdProd(), Pair(r, _):
            return r, "id-×"
        case Sym(IdProd()), _:
            return Pair(v, STAR), "id-×-i"
        case IdArrow(), _:
            return App(v, STAR), "id-⇒"
        case Sym(IdArrow()), _:
            return Lam(TOP, _shift(v)), "id-⇒-i"
        case Abs(), _:
            return STAR, "abs"
        case Sym(Abs()), _:
            target = t.target if t.target is not None else infer(g, t)
            return Lam(target.dom, _shift(v)), "abs-i"

        case CongProd1(p), Pair(r, s):
            return Pair(_coerce(p, r, lambda: infer(g, t).left), s), "cong-×₁"
        case CongProd2(p), Pair(r, s):
            return Pair(r, _coerce(p, s, lambda: infer(g, t).right)), "cong-×₂"
        case CongArrow2(p), Lam(a, b):
            return Lam(a, _coerce(p, b, lambda: infer(g, t).cod)), "cong-⇒₂"
        case CongArrow1(p), Lam(a, b):
            new_dom = infer(g, t).dom
            back = sym_normalize(Sym(p))
            back_var = Iso(back, x0, a if needs_target(back) else None)
            sigma = lambda i: back_var if i == 0 else Var(i)
            return Lam(new_dom, subst(sigma, b)), "t-subst"

    if isinstance(apply_iso(w, infer(g, v)), NotApplicable):
        raise IllFormedRedex(f"witness {w!r} does not apply to the subject's type")
    return None


# ---------------------------------------------------------------------------
# Progress

class StepKind(enum.Enum):
    ISO = "iso"
    BETA = "beta"


class Pos(enum.Enum):
    APP_LEFT = "AppLeft"
    APP_RIGHT = "AppRight"
    PAIR_LEFT = "PairLeft"
    PAIR_RIGHT = "PairRight"
    PROJ_BODY = "ProjBody"
    ISO_BODY = "IsoBody"
    LAM_BODY = "LamBody"


@dataclass(frozen=True, slots=True)
class Step:
    kind: StepKind
    rule: str
    path: tuple[Pos, ...]
    result: Term


@dataclass(frozen=True, slots=True)
class Done:
    kind: NormalKind


StepResult = Union[Step, Done]


class StuckTerm(Exception):
    code = "StuckTerm"


def _under(pos: Pos, st: Step, rebuild: Callable[[Term], Term]) -> Step:
    return Step(st.kind, st.rule, (pos,) + st.path, rebuild(st.result))


def progress(g: Context, t: Term) -> StepResult:
    """Locate and fire the next redex: left to right, subterms before the
    root, under binders too."""
    match t:
        case Star():
            return Done(NF_STAR)
        case Var():
            return Done(NF_NEUTRAL)
        case Lam(a, b):
            r = progress(g.extend(a), b)
            if isinstance(r, Step):
                return _under(Pos.LAM_BODY, r, lambda x: Lam(a, x))
            return Done(NF_LAM)
        case Pair(l, r):
            rl = progress(g, l)
            if isinstance(rl, Step):
                return _under(Pos.PAIR_LEFT, rl, lambda x: Pair(x, r))
            rr = progress(g, r)
            if isinstance(rr, Step):
                return _under(Pos.PAIR_RIGHT, rr, lambda x: Pair(l, x))
            return Done(NfPair(rl.kind, rr.kind))
        case App(f, x):
            rf = progress(g, f)
            if isinstance(rf, Step):
                return _under(Pos.APP_LEFT, rf, lambda y: App(y, x))
            rx = progress(g, x)
            if isinstance(rx, Step):
                return _under(Pos.APP_RIGHT, rx, lambda y: App(f, y))
            if isinstance(rf.kind, NfLam):
                result, rule = step_beta_root(g, t)
                return Step(StepKind.BETA, rule, (), result)
            if isinstance(rf.kind, NfNeutral):
                return Done(NF_NEUTRAL)
        case Proj(c, side, s):
            rs = progress(g, s)
            if isinstance(rs, Step):
                return _under(Pos.PROJ_BODY, rs, lambda y: Proj(c, side, y))
            if isinstance(rs.kind, NfPair):
                result, rule = step_beta_root(g, t)
                return Step(StepKind.BETA, rule, (), result)
            if isinstance(rs.kind, NfNeutral):
                return Done(NF_NEUTRAL)
        case Iso(w, s, target):
            rs = progress(g, s)
            if isinstance(rs, Step):
                return _under(Pos.ISO_BODY, rs, lambda y: Iso(w, y, target))
            fired = step_iso_root(g, t)
            if fired is not None:
                return Step(StepKind.ISO, fired[1], (), fired[0])
            if isinstance(rs.kind, NfNeutral):
                return Done(NF_NEUTRAL)
        case _:
            raise TypeError(f"not a term: {t!r}")
    raise StuckTerm(f"no rule applies to a {type(t).__name__} node whose subterms are normal")
