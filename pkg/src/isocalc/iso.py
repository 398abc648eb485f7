"""Witness engine: normalising ``sym``, applying and checking witnesses on
types, and synthesising witness chains between any two types.

With ⊤ as the only base type every type is isomorphic to ⊤, so chains always
exist: collapse the source to ⊤, then expand ⊤ into the target.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

from .core import (
    ABS,
    ID_PROD,
    TOP,
    Abs,
    Arrow,
    Asso,
    Comm,
    CongArrow1,
    CongArrow2,
    CongProd1,
    CongProd2,
    Curry,
    Dist,
    IdArrow,
    IdProd,
    Iso,
    Product,
    Sym,
    Term,
    Top,
    Type,
    Witness,
)


# ---------------------------------------------------------------------------
# Partial types: a type that may contain holes. Only ``sym abs`` creates them.

@dataclass(frozen=True, slots=True)
class Hole:
    pass


HOLE = Hole()

Pattern = Union[Type, Hole]


def is_complete(p: Pattern) -> bool:
    match p:
        case Hole():
            return False
        case Arrow(x, y):
            return is_complete(x) and is_complete(y)
        case Product(x, y):
            return is_complete(x) and is_complete(y)
    return True


def merge(p: Pattern, q: Pattern) -> Optional[Pattern]:
    """Most specific pattern matching both, or None when they clash.

    Holes are never shared between positions, so no substitution is needed.
    """
    match p, q:
        case Hole(), _:
            return q
        case _, Hole():
            return p
        case Top(), Top():
            return p
        case Arrow(a, b), Arrow(c, d):
            x, y = merge(a, c), merge(b, d)
            return None if x is None or y is None else Arrow(x, y)
        case Product(a, b), Product(c, d):
            x, y = merge(a, c), merge(b, d)
            return None if x is None or y is None else Product(x, y)
    return None


# ---------------------------------------------------------------------------
# Sym normalisation

_CONG = (CongArrow1, CongArrow2, CongProd1, CongProd2)


@lru_cache(maxsize=4096)
def sym_normalize(w: Witness) -> Witness:
    """Push ``sym`` down to primitive leaves and cancel it where possible.

    Afterwards ``Sym`` only wraps asso, dist, curry, idx, idarr or abs.
    """
    match w:
        case Sym(inner):
            return _inverse(inner)
        case CongArrow1(x) | CongArrow2(x) | CongProd1(x) | CongProd2(x):
            return type(w)(sym_normalize(x))
    return w


def _inverse(w: Witness) -> Witness:
    # normal form of Sym(w)
    match w:
        case Sym(x):
            return sym_normalize(x)
        case Comm():
            return w
        case CongArrow1(x) | CongArrow2(x) | CongProd1(x) | CongProd2(x):
            return type(w)(_inverse(x))
    return Sym(w)


def needs_target(w: Witness) -> bool:
    """True when ``w`` introduces an arrow domain it cannot determine."""
    w = sym_normalize(w)
    while isinstance(w, _CONG):
        w = w.inner
    return w == Sym(ABS)


# ---------------------------------------------------------------------------
# Application

@dataclass(frozen=True, slots=True)
class Determined:
    target: Type


@dataclass(frozen=True, slots=True)
class Ambiguous:
    """Several targets; ``pattern`` describes all of them (holes are free)."""
    pattern: Pattern


@dataclass(frozen=True, slots=True)
class NotApplicable:
    pass


ApplyResult = Union[Determined, Ambiguous, NotApplicable]

NOT_APPLICABLE = NotApplicable()


def apply_pattern(w: Witness, a: Type) -> Optional[Pattern]:
    """Image of ``a`` under a sym-normalised witness, or None."""
    match w:
        case Comm():
            if isinstance(a, Product):
                return Product(a.right, a.left)
        case Asso():
            if isinstance(a, Product) and isinstance(a.right, Product):
                return Product(Product(a.left, a.right.left), a.right.right)
        case Dist():
            match a:
                case Product(Arrow(x, y), Arrow(x2, z)) if x == x2:
                    return Arrow(x, Product(y, z))
        case Curry():
            match a:
                case Arrow(x, Arrow(y, z)):
                    return Arrow(Product(x, y), z)
        case IdProd():
            match a:
                case Product(x, Top()):
                    return x
        case IdArrow():
            match a:
                case Arrow(Top(), x):
                    return x
        case Abs():
            match a:
                case Arrow(_, Top()):
                    return TOP
        case Sym(Asso()):
            match a:
                case Product(Product(x, y), z):
                    return Product(x, Product(y, z))
        case Sym(Dist()):
            match a:
                case Arrow(x, Product(y, z)):
                    return Product(Arrow(x, y), Arrow(x, z))
        case Sym(Curry()):
            match a:
                case Arrow(Product(x, y), z):
                    return Arrow(x, Arrow(y, z))
        case Sym(IdProd()):
            return Product(a, TOP)
        case Sym(IdArrow()):
            return Arrow(TOP, a)
        case Sym(Abs()):
            if isinstance(a, Top):
                return Arrow(HOLE, TOP)
        case CongArrow1(p):
            if isinstance(a, Arrow):
                x = apply_pattern(p, a.dom)
                return None if x is None else Arrow(x, a.cod)
        case CongArrow2(p):
            if isinstance(a, Arrow):
                x = apply_pattern(p, a.cod)
                return None if x is None else Arrow(a.dom, x)
        case CongProd1(p):
            if isinstance(a, Product):
                x = apply_pattern(p, a.left)
                return None if x is None else Product(x, a.right)
        case CongProd2(p):
            if isinstance(a, Product):
                x = apply_pattern(p, a.right)
                return None if x is None else Product(a.left, x)
        case Sym(_):
            raise ValueError(f"witness is not sym-normalised: {w!r}")
    return None


def apply_iso(w: Witness, a: Type) -> ApplyResult:
    p = apply_pattern(sym_normalize(w), a)
    if p is None:
        return NOT_APPLICABLE
    if is_complete(p):
        return Determined(p)
    return Ambiguous(p)


def check_iso(w: Witness, a: Type, b: Type) -> bool:
    """Does the one-step relation denoted by ``w`` relate ``a`` to ``b``?

    Defined clause by clause on the raw witness (``sym`` swaps the sides),
    independently of :func:`sym_normalize` and :func:`apply_iso`.
    """
    return _CHECK[type(w)](w, a, b)


def _check_sym(w, a, b):
    return check_iso(w.inner, b, a)


def _check_comm(w, a, b):
    return (type(a) is Product and type(b) is Product
            and a.left == b.right and a.right == b.left)


def _check_asso(w, a, b):
    # A × (B × C)  ~  (A × B) × C
    return (type(a) is Product and type(a.right) is Product
            and type(b) is Product and type(b.left) is Product
            and a.left == b.left.left and a.right.left == b.left.right
            and a.right.right == b.right)


def _check_dist(w, a, b):
    # (A → B) × (A → C)  ~  A → B × C
    return (type(a) is Product and type(a.left) is Arrow and type(a.right) is Arrow
            and type(b) is Arrow and type(b.cod) is Product
            and a.left.dom == a.right.dom == b.dom
            and a.left.cod == b.cod.left and a.right.cod == b.cod.right)


def _check_curry(w, a, b):
    # A → B → C  ~  (A × B) → C
    return (type(a) is Arrow and type(a.cod) is Arrow
            and type(b) is Arrow and type(b.dom) is Product
            and a.dom == b.dom.left and a.cod.dom == b.dom.right
            and a.cod.cod == b.cod)


def _check_id_prod(w, a, b):
    return type(a) is Product and type(a.right) is Top and a.left == b


def _check_id_arrow(w, a, b):
    return type(a) is Arrow and type(a.dom) is Top and a.cod == b


def _check_abs(w, a, b):
    return type(a) is Arrow and type(a.cod) is Top and type(b) is Top


def _check_cong_arrow1(w, a, b):
    return (type(a) is Arrow and type(b) is Arrow and a.cod == b.cod
            and check_iso(w.inner, a.dom, b.dom))


def _check_cong_arrow2(w, a, b):
    return (type(a) is Arrow and type(b) is Arrow and a.dom == b.dom
            and check_iso(w.inner, a.cod, b.cod))


def _check_cong_prod1(w, a, b):
    return (type(a) is Product and type(b) is Product and a.right == b.right
            and check_iso(w.inner, a.left, b.left))


def _check_cong_prod2(w, a, b):
    return (type(a) is Product and type(b) is Product and a.left == b.left
            and check_iso(w.inner, a.right, b.right))


_CHECK = {
    Sym: _check_sym,
    Comm: _check_comm,
    Asso: _check_asso,
    Dist: _check_dist,
    Curry: _check_curry,
    IdProd: _check_id_prod,
    IdArrow: _check_id_arrow,
    Abs: _check_abs,
    CongArrow1: _check_cong_arrow1,
    CongArrow2: _check_cong_arrow2,
    CongProd1: _check_cong_prod1,
    CongProd2: _check_cong_prod2,
}


# ---------------------------------------------------------------------------
# Chains

WitnessChain = list[Witness]


def chain_to_top(a: Type) -> WitnessChain:
    """Collapse ``a`` to ⊤: children first (left, then right), then the axiom."""
    match a:
        case Product(x, y):
            return ([CongProd1(w) for w in chain_to_top(x)]
                    + [CongProd2(w) for w in chain_to_top(y)]
                    + [ID_PROD])
        case Arrow(_, y):
            return [CongArrow2(w) for w in chain_to_top(y)] + [ABS]
    return []


def _types_along(chain: Sequence[Witness], a: Type) -> list[Type]:
    out = [a]
    for w in chain:
        r = apply_iso(w, out[-1])
        if not isinstance(r, Determined):
            raise AssertionError(f"collapse chain stuck at {w!r} on {out[-1]!r}")
        out.append(r.target)
    return out


def synth_path(a: Type, b: Type) -> list[tuple[Witness, Type]]:
    """Witness chain from ``a`` to ``b`` paired with the type after each step."""
    down = chain_to_top(a)
    path = list(zip(down, _types_along(down, a)[1:]))
    up = chain_to_top(b)
    up_types = _types_along(up, b)
    # walking the collapse of b backwards: step i goes up_types[i+1] -> up_types[i]
    for i in reversed(range(len(up))):
        path.append((sym_normalize(Sym(up[i])), up_types[i]))
    return path


def synth_chain(a: Type, b: Type) -> WitnessChain:
    return [w for w, _ in synth_path(a, b)]


def apply_chain(chain: Sequence[Witness], a: Type) -> ApplyResult:
    current: Type = a
    for w in chain:
        r = apply_iso(w, current)
        if not isinstance(r, Determined):
            return r
        current = r.target
    return Determined(current)


def check_chain(chain: Sequence[Witness], types: Sequence[Type]) -> bool:
    """``types`` has one more element than ``chain``; each step must check."""
    if len(types) != len(chain) + 1:
        return False
    return all(check_iso(w, types[i], types[i + 1]) for i, w in enumerate(chain))


def wrap_chain(chain: Sequence[Witness], t: Term,
               targets: Optional[Sequence[Type]] = None) -> Term:
    """Nest ``Iso`` nodes around ``t``; the last witness ends up outermost.

    ``targets[i]`` is the type after step ``i`` (as produced by
    :func:`synth_path`); it is cached on the nodes that need it.
    """
    for i, w in enumerate(chain):
        target = targets[i] if targets is not None and needs_target(w) else None
        t = Iso(w, t, target)
    return t


def wrap_path(path: Sequence[tuple[Witness, Type]], t: Term) -> Term:
    return wrap_chain([w for w, _ in path], t, [b for _, b in path])
