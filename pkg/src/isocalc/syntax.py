"""Concrete syntax: parsing, elaboration to de Bruijn terms, printing.

Types      T | Top | A -> B | A * B | (A)        (* binds tighter; -> right, * left)
Witnesses  comm asso dist curry idx idarr abs | sym W | cx1 W | cx2 W | ca1 W | ca2 W
Terms      * | x | \\x:A. t | t s | <t, s> | pi1[C] t | pi2[C] t | pi[C] t
           | [W] t | (t : A)

Unicode spellings ⊤ λ ⋆ × → π ⟨ ⟩ are accepted on input. ``#`` starts a
line comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .core import (
    ABS,
    ASSO,
    COMM,
    CURRY,
    DIST,
    ID_ARROW,
    ID_PROD,
    STAR,
    TOP,
    App,
    Arrow,
    CongArrow1,
    CongArrow2,
    CongProd1,
    CongProd2,
    Context,
    Iso,
    Lam,
    Pair,
    Product,
    Proj,
    Side,
    Star,
    Sym,
    Term,
    Top,
    Type,
    Var,
    Witness,
)
from .iso import (
    HOLE,
    Ambiguous,
    Determined,
    Hole,
    Pattern,
    apply_iso,
    is_complete,
    merge,
    needs_target,
)
from .typecheck import AscriptionRequired, IsoNotApplicable, TypeCheckError, TypeMismatch


class ParseError(SyntaxError):
    code = "SyntaxError"

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.message = message
        self.line = line
        self.col = col


class ElaborationError(TypeCheckError):
    code = "ElaborationError"


class UnboundName(ElaborationError):
    code = "UnboundName"

    def __init__(self, name: str):
        super().__init__(f"unbound name {name!r}")
        self.name = name


class AmbiguityUnresolvable(ElaborationError):
    code = "AmbiguityUnresolvable"


# ---------------------------------------------------------------------------
# Surface terms

@dataclass(frozen=True)
class SStar:
    pass


@dataclass(frozen=True)
class SVar:
    name: str


@dataclass(frozen=True)
class SLam:
    name: str
    dom: Type
    body: "SurfaceTerm"


@dataclass(frozen=True)
class SApp:
    fun: "SurfaceTerm"
    arg: "SurfaceTerm"


@dataclass(frozen=True)
class SPair:
    left: "SurfaceTerm"
    right: "SurfaceTerm"


@dataclass(frozen=True)
class SProj:
    type: Type
    side: Optional[Side]
    subject: "SurfaceTerm"


@dataclass(frozen=True)
class SIso:
    witness: Witness
    subject: "SurfaceTerm"


@dataclass(frozen=True)
class SAscribe:
    term: "SurfaceTerm"
    type: Type


SurfaceTerm = Union[SStar, SVar, SLam, SApp, SPair, SProj, SIso, SAscribe]


# ---------------------------------------------------------------------------
# Lexing

_TOKEN = re.compile(r"""
    (?P<skip>[ \t\r\n]+|\#[^\n]*)
  | (?P<arrow>->|→)
  | (?P<lam>\\|λ)
  | (?P<top>⊤)
  | (?P<star>⋆)
  | (?P<times>×)
  | (?P<langle><|⟨)
  | (?P<rangle>>|⟩)
  | (?P<punct>[()\[\],:.*])
  | (?P<ident>(?:π|[A-Za-z_])[A-Za-z0-9_']*)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "skip":
            value = m.group()
            if kind == "punct":
                kind = value
            elif kind == "langle":
                kind = "<"
            elif kind == "rangle":
                kind = ">"
            toks.append(_Tok(kind, value, line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


_PRIMS = {
    "comm": COMM, "asso": ASSO, "dist": DIST, "curry": CURRY,
    "idx": ID_PROD, "idarr": ID_ARROW, "abs": ABS,
}
_PREFIX = {"sym": Sym, "cx1": CongProd1, "cx2": CongProd2, "ca1": CongArrow1, "ca2": CongArrow2}
_PROJ = {"pi": None, "π": None, "pi1": Side.LEFT, "π1": Side.LEFT, "pi2": Side.RIGHT, "π2": Side.RIGHT}


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, what: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"expected {what}, found {found}", t.line, t.col)

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.fail(repr(kind))
        return self.advance()

    def finish(self):
        if self.tok.kind != "eof":
            self.fail("end of input")

    # types

    def type(self) -> Type:
        left = self.product()
        if self.tok.kind == "arrow":
            self.advance()
            return Arrow(left, self.type())
        return left

    def product(self) -> Type:
        a = self.type_atom()
        while self.tok.kind in ("*", "times"):
            self.advance()
            a = Product(a, self.type_atom())
        return a

    def type_atom(self) -> Type:
        t = self.tok
        if t.kind == "top" or (t.kind == "ident" and t.text in ("T", "Top")):
            self.advance()
            return TOP
        if t.kind == "(":
            self.advance()
            a = self.type()
            self.expect(")")
            return a
        self.fail("a type")

    # witnesses

    def witness(self) -> Witness:
        t = self.tok
        if t.kind == "ident":
            name = t.text.lower()
            if name in _PREFIX:
                self.advance()
                return _PREFIX[name](self.witness())
            if name in _PRIMS:
                self.advance()
                return _PRIMS[name]
        if t.kind == "(":
            self.advance()
            w = self.witness()
            self.expect(")")
            return w
        self.fail("a witness")

    # terms

    def term(self) -> SurfaceTerm:
        if self.tok.kind == "lam":
            return self.lam()
        return self.app()

    def lam(self) -> SurfaceTerm:
        self.expect("lam")
        name = self.variable_name()
        self.expect(":")
        dom = self.type()
        self.expect(".")
        return SLam(name, dom, self.term())

    def variable_name(self) -> str:
        t = self.tok
        if t.kind != "ident" or t.text in _PROJ:
            self.fail("a variable name")
        self.advance()
        return t.text

    def starts_unary(self) -> bool:
        t = self.tok
        return t.kind in ("[", "*", "star", "(", "<", "ident")

    def app(self) -> SurfaceTerm:
        if not self.starts_unary():
            self.fail("a term")
        t = self.unary()
        while True:
            if self.tok.kind == "lam":
                return SApp(t, self.lam())
            if not self.starts_unary():
                return t
            t = SApp(t, self.unary())

    def operand(self) -> SurfaceTerm:
        return self.lam() if self.tok.kind == "lam" else self.unary()

    def unary(self) -> SurfaceTerm:
        t = self.tok
        if t.kind == "[":
            self.advance()
            w = self.witness()
            self.expect("]")
            return SIso(w, self.operand())
        if t.kind == "ident" and t.text in _PROJ:
            self.advance()
            self.expect("[")
            c = self.type()
            self.expect("]")
            return SProj(c, _PROJ[t.text], self.operand())
        return self.atom()

    def atom(self) -> SurfaceTerm:
        t = self.tok
        if t.kind in ("*", "star"):
            self.advance()
            return SStar()
        if t.kind == "ident":
            return SVar(self.variable_name())
        if t.kind == "(":
            self.advance()
            inner = self.term()
            if self.tok.kind == ":":
                self.advance()
                inner = SAscribe(inner, self.type())
            self.expect(")")
            return inner
        if t.kind == "<":
            self.advance()
            left = self.term()
            self.expect(",")
            right = self.term()
            self.expect(">")
            return SPair(left, right)
        self.fail("a term")


def parse_type(text: str) -> Type:
    p = _Parser(text)
    a = p.type()
    p.finish()
    return a


def parse_witness(text: str) -> Witness:
    p = _Parser(text)
    w = p.witness()
    p.finish()
    return w


def parse_chain(text: str) -> list[Witness]:
    """Whitespace-separated witnesses, e.g. ``idx sym abs``."""
    p = _Parser(text)
    chain = []
    while p.tok.kind != "eof":
        chain.append(p.witness())
    return chain


def parse_term(text: str) -> SurfaceTerm:
    p = _Parser(text)
    t = p.term()
    p.finish()
    return t


def parse_context(text: str) -> tuple[list[str], Context]:
    """``"x:T, y:T->T"`` -> names and types, leftmost binding outermost."""
    names, types = [], []
    if text.strip():
        for part in text.split(","):
            if ":" not in part:
                raise ParseError(f"context entry {part.strip()!r} is missing ':'", 1, 1)
            name, ty = part.split(":", 1)
            name = name.strip()
            if not re.fullmatch(r"(?:π|[A-Za-z_])[A-Za-z0-9_']*", name) or name in _PROJ:
                raise ParseError(f"bad variable name {name!r}", 1, 1)
            names.append(name)
            types.append(parse_type(ty))
    return names, Context.of(types)


# ---------------------------------------------------------------------------
# Elaboration

_Scope = tuple[tuple[str, Optional[Type]], ...]


def elaborate(s: SurfaceTerm, env: Sequence[str] = (), context: Optional[Context] = None) -> Term:
    """Resolve names to de Bruijn indices, fill in projection sides and the
    targets of ambiguous coercions.

    ``env`` names the free variables (innermost last); ``context`` optionally
    gives their types, which projection resolution may need.
    """
    if context is not None and len(context) != len(env):
        raise ValueError("env and context differ in length")
    types = list(context.types) if context is not None else [None] * len(env)
    term, _ = _elab(s, tuple(zip(env, types)), None)
    return term


def _elab(s: SurfaceTerm, scope: _Scope, expected: Optional[Pattern]) -> tuple[Term, Optional[Type]]:
    match s:
        case SStar():
            return STAR, TOP
        case SVar(name):
            for k in range(len(scope) - 1, -1, -1):
                if scope[k][0] == name:
                    return Var(len(scope) - 1 - k), scope[k][1]
            raise UnboundName(name)
        case SLam(name, dom, body):
            b, bt = _elab(body, scope + ((name, dom),), expected.cod if isinstance(expected, Arrow) else None)
            return Lam(dom, b), (None if bt is None else Arrow(dom, bt))
        case SApp(f, x):
            try:
                f_term, ft = _elab(f, scope, None)
            except AscriptionRequired:
                # the argument may pin down an ambiguous coercion in function position
                x_term, xt = _elab(x, scope, None)
                if xt is None:
                    raise
                f_term, ft = _elab(f, scope, Arrow(xt, HOLE if expected is None else expected))
            else:
                x_term, _ = _elab(x, scope, ft.dom if isinstance(ft, Arrow) else None)
            return App(f_term, x_term), (ft.cod if isinstance(ft, Arrow) else None)
        case SPair(l, r):
            el, er = (expected.left, expected.right) if isinstance(expected, Product) else (None, None)
            lt, la = _elab(l, scope, el)
            rt, ra = _elab(r, scope, er)
            return Pair(lt, rt), (None if la is None or ra is None else Product(la, ra))
        case SProj(c, side, sub):
            hint = {Side.LEFT: Product(c, HOLE), Side.RIGHT: Product(HOLE, c)}.get(side)
            st, sty = _elab(sub, scope, hint)
            if side is None:
                if not isinstance(sty, Product):
                    raise AmbiguityUnresolvable(
                        f"pi[{print_type(c)}]: cannot tell which component to project"
                        + ("" if sty is None else f" from {print_type(sty)}"))
                if sty.left == c:
                    side = Side.LEFT
                elif sty.right == c:
                    side = Side.RIGHT
                else:
                    raise AmbiguityUnresolvable(
                        f"pi[{print_type(c)}]: neither component of {print_type(sty)} has that type")
            return Proj(c, side, st), c
        case SIso(w, sub):
            return _elab_iso(w, sub, scope, expected)
        case SAscribe(t, a):
            if expected is not None and merge(a, expected) is None:
                raise TypeMismatch(f"ascribed {print_type(a)} where {print_type(expected)} is expected")
            term, ty = _elab(t, scope, a)
            if ty is not None and ty != a:
                raise TypeMismatch(f"ascribed {print_type(a)} to a term of type {print_type(ty)}")
            return term, a
    raise TypeError(f"not a surface term: {s!r}")


def _elab_iso(w: Witness, sub: SurfaceTerm, scope: _Scope,
              expected: Optional[Pattern]) -> tuple[Term, Optional[Type]]:
    sub_expected = None
    if expected is not None and is_complete(expected):
        back = apply_iso(Sym(w), expected)
        if isinstance(back, Determined):
            sub_expected = back.target
    st, sty = _elab(sub, scope, sub_expected)
    if sty is None:
        if needs_target(w) and expected is not None and is_complete(expected):
            return Iso(w, st, expected), expected
        return Iso(w, st), None
    r = apply_iso(w, sty)
    if isinstance(r, Determined):
        return Iso(w, st), r.target
    if isinstance(r, Ambiguous):
        resolved = r.pattern if expected is None else merge(r.pattern, expected)
        if resolved is None:
            raise IsoNotApplicable(
                f"[{print_witness(w)}] cannot turn {print_type(sty)} into {print_type(expected)}")
        if not is_complete(resolved):
            raise AscriptionRequired(
                f"[{print_witness(w)}] on {print_type(sty)} has no unique target; "
                f"write ([{print_witness(w)}] ... : A)")
        return Iso(w, st, resolved), resolved
    raise IsoNotApplicable(f"[{print_witness(w)}] does not apply to {print_type(sty)}")


# ---------------------------------------------------------------------------
# Printing

def print_type(a: Union[Type, Hole]) -> str:
    return _ptype(a, 0)


def _ptype(a, level: int) -> str:
    match a:
        case Top():
            return "T"
        case Hole():
            return "?"
        case Arrow(x, y):
            s = f"{_ptype(x, 1)} -> {_ptype(y, 0)}"
            return f"({s})" if level > 0 else s
        case Product(x, y):
            s = f"{_ptype(x, 1)} * {_ptype(y, 2)}"
            return f"({s})" if level > 1 else s
    raise TypeError(f"not a type: {a!r}")


_PRIM_NAMES = {v: k for k, v in _PRIMS.items()}
_PREFIX_NAMES = {v: k for k, v in _PREFIX.items()}


def print_witness(w: Witness) -> str:
    parts = []
    while type(w) in _PREFIX_NAMES:
        parts.append(_PREFIX_NAMES[type(w)])
        w = w.inner
    parts.append(_PRIM_NAMES[w])
    return " ".join(parts)


def print_chain(chain: Sequence[Witness]) -> str:
    return " ".join(print_witness(w) for w in chain)


def print_term(t: Term, env: Sequence[str] = ()) -> str:
    """Print with binders named ``x0, x1, ...`` by depth; ``env`` names the
    free variables (innermost last)."""
    return _pterm(t, list(env), set(env), 0, 0)


def _binder_name(depth: int, taken: set[str]) -> str:
    name = f"x{depth}"
    while name in taken:
        name += "'"
    return name


def _pterm(t: Term, names: list[str], taken: set[str], depth: int, level: int) -> str:
    match t:
        case Star():
            return "*"
        case Var(i):
            if i < len(names):
                return names[-1 - i]
            return f"_free{i - len(names)}"
        case Lam(a, body):
            x = _binder_name(depth, taken)
            s = f"\\{x}:{print_type(a)}. {_pterm(body, names + [x], taken, depth + 1, 0)}"
            return f"({s})" if level > 0 else s
        case App(f, x):
            s = f"{_pterm(f, names, taken, depth, 1)} {_pterm(x, names, taken, depth, 2)}"
            return f"({s})" if level > 1 else s
        case Pair(l, r):
            return f"<{_pterm(l, names, taken, depth, 0)}, {_pterm(r, names, taken, depth, 0)}>"
        case Proj(c, side, s):
            op = "pi1" if side is Side.LEFT else "pi2"
            return f"{op}[{print_type(c)}] {_pterm(s, names, taken, depth, 2)}"
        case Iso(w, s, None):
            return f"[{print_witness(w)}] {_pterm(s, names, taken, depth, 2)}"
        case Iso(w, s, target):
            return f"([{print_witness(w)}] {_pterm(s, names, taken, depth, 2)} : {print_type(target)})"
    raise TypeError(f"not a term: {t!r}")
