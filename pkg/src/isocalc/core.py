"""Shared data model: types, isomorphism witnesses, nameless terms and contexts.

Everything here is immutable; structural equality is the dataclass ``==``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union


# ---------------------------------------------------------------------------
# Types

@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Arrow:
    dom: "Type"
    cod: "Type"


@dataclass(frozen=True, slots=True)
class Product:
    left: "Type"
    right: "Type"


Type = Union[Top, Arrow, Product]

TOP = Top()


def type_eq(a: Type, b: Type) -> bool:
    return a == b


def type_depth(a: Type) -> int:
    match a:
        case Arrow(x, y):
            return 1 + max(type_depth(x), type_depth(y))
        case Product(x, y):
            return 1 + max(type_depth(x), type_depth(y))
    return 0


# ---------------------------------------------------------------------------
# Witnesses
#
# Primitive orientations:
#   Comm     A × B         ≡ B × A
#   Asso     A × (B × C)   ≡ (A × B) × C
#   Dist     (A→B) × (A→C) ≡ A → B × C
#   Curry    A → B → C     ≡ (A × B) → C
#   IdProd   A × ⊤         ≡ A
#   IdArrow  ⊤ → A         ≡ A
#   Abs      A → ⊤         ≡ ⊤

@dataclass(frozen=True, slots=True)
class Comm:
    pass


@dataclass(frozen=True, slots=True)
class Asso:
    pass


@dataclass(frozen=True, slots=True)
class Dist:
    pass


@dataclass(frozen=True, slots=True)
class Curry:
    pass


@dataclass(frozen=True, slots=True)
class IdProd:
    pass


@dataclass(frozen=True, slots=True)
class IdArrow:
    pass


@dataclass(frozen=True, slots=True)
class Abs:
    pass


@dataclass(frozen=True, slots=True)
class Sym:
    inner: "Witness"


@dataclass(frozen=True, slots=True)
class CongArrow1:
    """``A ≡ B`` lifted to ``A → C ≡ B → C``."""
    inner: "Witness"


@dataclass(frozen=True, slots=True)
class CongArrow2:
    """``A ≡ B`` lifted to ``C → A ≡ C → B``."""
    inner: "Witness"


@dataclass(frozen=True, slots=True)
class CongProd1:
    """``A ≡ B`` lifted to ``A × C ≡ B × C``."""
    inner: "Witness"


@dataclass(frozen=True, slots=True)
class CongProd2:
    """``A ≡ B`` lifted to ``C × A ≡ C × B``."""
    inner: "Witness"


Primitive = Union[Comm, Asso, Dist, Curry, IdProd, IdArrow, Abs]
Congruence = Union[CongArrow1, CongArrow2, CongProd1, CongProd2]
Witness = Union[Primitive, Sym, Congruence]

COMM = Comm()
ASSO = Asso()
DIST = Dist()
CURRY = Curry()
ID_PROD = IdProd()
ID_ARROW = IdArrow()
ABS = Abs()

PRIMITIVES: tuple[Primitive, ...] = (COMM, ASSO, DIST, CURRY, ID_PROD, ID_ARROW, ABS)
CONGRUENCES = (CongArrow1, CongArrow2, CongProd1, CongProd2)
UNARY_WITNESSES = (Sym,) + CONGRUENCES


def witness_size(w: Witness) -> int:
    n = 1
    while isinstance(w, UNARY_WITNESSES):
        w = w.inner
        n += 1
    return n


# ---------------------------------------------------------------------------
# Terms (de Bruijn)

class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True, slots=True)
class Star:
    pass


@dataclass(frozen=True, slots=True)
class Var:
    index: int


@dataclass(frozen=True, slots=True)
class Lam:
    dom: Type
    body: "Term"


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class Pair:
    left: "Term"
    right: "Term"


@dataclass(frozen=True, slots=True)
class Proj:
    """Projection by type; ``side`` says which component the type names."""
    type: Type
    side: Side
    subject: "Term"


@dataclass(frozen=True, slots=True)
class Iso:
    """Coercion ``[witness] subject``.

    ``target`` caches the resolved result type when the witness alone does not
    determine it (a ``sym abs`` leaf invents an arrow domain). It is ``None``
    for every deterministic witness.
    """
    witness: Witness
    subject: "Term"
    target: Optional[Type] = None


Term = Union[Star, Var, Lam, App, Pair, Proj, Iso]

STAR = Star()


def term_size(t: Term) -> int:
    match t:
        case Lam(_, b):
            return 1 + term_size(b)
        case App(f, a):
            return 1 + term_size(f) + term_size(a)
        case Pair(l, r):
            return 1 + term_size(l) + term_size(r)
        case Proj(_, _, s) | Iso(_, s, _):
            return 1 + term_size(s)
    return 1


def is_closed(t: Term, depth: int = 0) -> bool:
    match t:
        case Var(i):
            return i < depth
        case Lam(_, b):
            return is_closed(b, depth + 1)
        case App(f, a):
            return is_closed(f, depth) and is_closed(a, depth)
        case Pair(l, r):
            return is_closed(l, depth) and is_closed(r, depth)
        case Proj(_, _, s) | Iso(_, s, _):
            return is_closed(s, depth)
    return True


# ---------------------------------------------------------------------------
# Contexts

class IndexOutOfRange(LookupError):
    pass


@dataclass(frozen=True, slots=True)
class Context:
    """Types of the variables in scope, innermost (index 0) last."""
    types: tuple[Type, ...] = ()

    @classmethod
    def of(cls, types: Iterable[Type]) -> "Context":
        return cls(tuple(types))

    def extend(self, a: Type) -> "Context":
        return Context(self.types + (a,))

    def lookup(self, i: int) -> Type:
        if i < 0 or i >= len(self.types):
            raise IndexOutOfRange(f"variable index {i} out of range for context of length {len(self.types)}")
        return self.types[-1 - i]

    def __len__(self) -> int:
        return len(self.types)

    def __iter__(self) -> Iterator[Type]:
        return iter(self.types)


EMPTY = Context()


def context_lookup(g: Context, i: int) -> Type:
    return g.lookup(i)
