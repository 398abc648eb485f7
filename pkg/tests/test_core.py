import pytest
from hypothesis import given
from hypothesis import strategies as st

from isocalc.core import (
    EMPTY,
    STAR,
    TOP,
    App,
    Arrow,
    Context,
    IndexOutOfRange,
    Iso,
    Lam,
    Product,
    Sym,
    ABS,
    Var,
    context_lookup,
    is_closed,
    term_size,
    type_depth,
    type_eq,
    witness_size,
)
from strategies import contexts, types

TT = Arrow(TOP, TOP)


def test_type_eq_examples():
    assert type_eq(TOP, TOP)
    assert not type_eq(TT, TOP)
    assert type_eq(Product(TOP, TT), Product(TOP, Arrow(TOP, TOP)))


def test_context_lookup_examples():
    g = Context.of([TT, TOP])
    assert context_lookup(g, 0) == TOP
    assert context_lookup(g, 1) == TT
    with pytest.raises(IndexOutOfRange):
        context_lookup(EMPTY, 0)


def test_values_are_immutable():
    with pytest.raises(AttributeError):
        TT.dom = TOP


def test_sizes():
    assert type_depth(Arrow(Product(TOP, TOP), TOP)) == 2
    assert witness_size(Sym(ABS)) == 2
    t = Iso(ABS, Lam(TOP, App(Var(0), STAR)))
    assert term_size(t) == 5
    assert is_closed(t)
    assert not is_closed(Lam(TOP, Var(1)))


@given(types, types, types)
def test_type_eq_is_an_equivalence(a, b, c):
    assert type_eq(a, a)
    assert type_eq(a, b) == type_eq(b, a)
    if type_eq(a, b) and type_eq(b, c):
        assert type_eq(a, c)


@given(contexts, types, st.integers(0, 6))
def test_lookup_after_extend(g, a, i):
    h = g.extend(a)
    assert context_lookup(h, 0) == a
    if i < len(g):
        assert context_lookup(h, i + 1) == context_lookup(g, i)
    else:
        with pytest.raises(IndexOutOfRange):
            context_lookup(h, i + 1)
