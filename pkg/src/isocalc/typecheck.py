"""Syntax-directed typing of core terms and the normal-form classifiers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .core import (
    TOP,
    App,
    Arrow,
    Context,
    IndexOutOfRange,
    Iso,
    Lam,
    Pair,
    Product,
    Proj,
    Side,
    Star,
    Term,
    Type,
    Var,
)
from .iso import Ambiguous, Determined, Pattern, apply_iso, check_iso, is_complete, merge


class TypeCheckError(Exception):
    """Base class; ``code`` is the structured name reported by the CLI."""

    code = "TypeError"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class UnboundVariable(TypeCheckError):
    code = "UnboundVariable"


class DomainMismatch(TypeCheckError):
    code = "DomainMismatch"

    def __init__(self, expected: Type, got: Type):
        from .syntax import print_type
        super().__init__(f"argument has type {print_type(got)}, function expects {print_type(expected)}")
        self.expected = expected
        self.got = got


class NotAFunction(TypeCheckError):
    code = "NotAFunction"


class ProjectionMismatch(TypeCheckError):
    code = "ProjectionMismatch"


class IsoNotApplicable(TypeCheckError):
    code = "IsoNotApplicable"


class IsoAmbiguous(TypeCheckError):
    code = "IsoAmbiguous"


class AscriptionRequired(IsoAmbiguous):
    code = "AscriptionRequired"


class TypeMismatch(TypeCheckError):
    code = "TypeMismatch"


def _show(a) -> str:
    from .syntax import print_type
    return print_type(a)


def _lookup(g: Context, i: int) -> Type:
    try:
        return g.lookup(i)
    except IndexOutOfRange:
        raise UnboundVariable(f"variable #{i} is not bound in a context of length {len(g)}") from None


def _iso_type(w, src: Type, target: Optional[Type]) -> Type:
    r = apply_iso(w, src)
    if isinstance(r, Determined):
        if target is not None and target != r.target:
            raise IsoNotApplicable(f"witness sends {_show(src)} to {_show(r.target)}, not {_show(target)}")
        return r.target
    if isinstance(r, Ambiguous):
        if target is None:
            raise IsoAmbiguous(f"witness does not determine the target of {_show(src)}; add an ascription")
        if not check_iso(w, src, target):
            raise IsoNotApplicable(f"witness does not relate {_show(src)} to {_show(target)}")
        return target
    raise IsoNotApplicable(f"witness does not apply to {_show(src)}")


def infer(g: Context, t: Term) -> Type:
    match t:
        case Star():
            return TOP
        case Var(i):
            return _lookup(g, i)
        case Lam(a, body):
            return Arrow(a, infer(g.extend(a), body))
        case App(f, x):
            ft = infer(g, f)
            if not isinstance(ft, Arrow):
                raise NotAFunction(f"applying a term of type {_show(ft)}")
            xt = infer(g, x)
            if xt != ft.dom:
                raise DomainMismatch(ft.dom, xt)
            return ft.cod
        case Pair(l, r):
            return Product(infer(g, l), infer(g, r))
        case Proj(c, side, s):
            st = infer(g, s)
            if not isinstance(st, Product):
                raise ProjectionMismatch(f"projecting from a term of type {_show(st)}")
            chosen = st.left if side is Side.LEFT else st.right
            if chosen != c:
                raise ProjectionMismatch(f"{side.value} component has type {_show(chosen)}, not {_show(c)}")
            return c
        case Iso(w, s, target):
            return _iso_type(w, infer(g, s), target)
    raise TypeError(f"not a term: {t!r}")


def check_with_ascription(g: Context, t: Term, expected: Type) -> Type:
    """Check ``t`` against ``expected``.

    Unlike :func:`infer`, an ambiguous coercion without a cached target takes
    its target from the expected type, propagated through lambda bodies,
    pair components and the function position of applications.
    """
    try:
        return _check(g, t, expected)
    except AscriptionRequired:
        raise
    except IsoAmbiguous as e:
        raise AscriptionRequired(e.message) from None


def _check(g: Context, t: Term, expected: Pattern) -> Type:
    match t:
        case Iso(w, s, None):
            src = infer(g, s)
            r = apply_iso(w, src)
            if isinstance(r, Ambiguous):
                resolved = merge(r.pattern, expected)
                if resolved is None:
                    raise IsoNotApplicable(f"witness does not relate {_show(src)} to {_show(expected)}")
                if not is_complete(resolved):
                    raise AscriptionRequired(f"cannot resolve the target of a coercion from {_show(src)}")
                return resolved
        case Lam(a, body) if isinstance(expected, Arrow) and expected.dom == a:
            return Arrow(a, _check(g.extend(a), body, expected.cod))
        case Pair(l, r) if isinstance(expected, Product):
            return Product(_check(g, l, expected.left), _check(g, r, expected.right))
        case App(f, x):
            xt = infer(g, x)
            ft = _check(g, f, Arrow(xt, expected))
            if not isinstance(ft, Arrow):
                raise NotAFunction(f"applying a term of type {_show(ft)}")
            if ft.dom != xt:
                raise DomainMismatch(ft.dom, xt)
            return ft.cod
    got = infer(g, t)
    if merge(got, expected) is None:
        raise TypeMismatch(f"expected {_show(expected)}, got {_show(got)}")
    return got


# ---------------------------------------------------------------------------
# Normal forms

@dataclass(frozen=True, slots=True)
class NfLam:
    pass


@dataclass(frozen=True, slots=True)
class NfStar:
    pass


@dataclass(frozen=True, slots=True)
class NfPair:
    left: "NormalKind"
    right: "NormalKind"


@dataclass(frozen=True, slots=True)
class NfNeutral:
    pass


NormalKind = Union[NfLam, NfStar, NfPair, NfNeutral]

NF_LAM = NfLam()
NF_STAR = NfStar()
NF_NEUTRAL = NfNeutral()


def is_neutral(t: Term) -> bool:
    match t:
        case Var():
            return True
        case App(f, x):
            return is_neutral(f) and is_normal(x)
        case Proj(_, _, s) | Iso(_, s, _):
            return is_neutral(s)
    return False


def is_normal(t: Term) -> bool:
    match t:
        case Pair(l, r):
            return is_normal(l) and is_normal(r)
        case Lam(_, body):
            return is_normal(body)
        case Star():
            return True
    return is_neutral(t)


def is_value(t: Term) -> bool:
    match t:
        case Lam() | Star():
            return True
        case Pair(l, r):
            return is_value(l) and is_value(r)
    return False

