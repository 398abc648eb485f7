import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isocalc.core import (
    ABS,
    ASSO,
    COMM,
    CURRY,
    DIST,
    EMPTY,
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
    Sym,
    Var,
)
from isocalc.rewrite import (
    Done,
    IllFormedRedex,
    Pos,
    StepKind,
    compose,
    cons,
    exts,
    ids,
    progress,
    rename,
    shift,
    sigma_curry,
    sigma_uncurry,
    step_beta_root,
    step_iso_root,
    subst,
    subst_one,
)
from isocalc.typecheck import NF_LAM, NF_STAR, NfPair, infer, is_normal
from named_oracle import oracle_subst_one
from strategies import raw_terms, typed_terms

TT = Arrow(TOP, TOP)
TxT = Product(TOP, TOP)
I = Lam(TOP, Var(0))
V0, V1, V2 = Var(0), Var(1), Var(2)
SELF = Lam(TOP, App(Iso(Sym(ABS), V0, TT), V0))
OMEGA = App(SELF, Iso(ABS, SELF))


def L(t):
    return Proj(TOP, Side.LEFT, t)


def R(t):
    return Proj(TOP, Side.RIGHT, t)


# substitution machinery

def test_rename_examples():
    assert rename(shift, STAR) == STAR
    assert rename(shift, V0) == V1
    assert rename(shift, Lam(TOP, V0)) == Lam(TOP, V0)
    assert rename(shift, Lam(TOP, V1)) == Lam(TOP, V2)


def test_subst_examples():
    assert subst(cons(STAR, ids), V0) == STAR
    assert subst(cons(STAR, ids), Lam(TOP, App(V0, V1))) == Lam(TOP, App(V0, STAR))
    assert oracle_subst_one(Lam(TOP, App(V0, V1)), STAR, 1) == Lam(TOP, App(V0, STAR))


def test_subst_one_examples():
    assert subst_one(V0, STAR) == STAR
    assert subst_one(V1, STAR) == V0
    assert subst_one(App(V0, V0), I) == App(I, I)
    # the substituted term is shifted under binders
    assert subst_one(Lam(TOP, V1), V0) == Lam(TOP, V1)


def test_sigma_examples():
    a, b = TOP, TT
    assert subst(sigma_curry(a, b), V1) == Proj(a, Side.LEFT, V0)
    assert subst(sigma_curry(a, b), V0) == Proj(b, Side.RIGHT, V0)
    assert subst(sigma_curry(a, b), V2) == V1
    assert subst(sigma_uncurry(), V0) == Pair(V1, V0)
    assert subst(sigma_uncurry(), V1) == V2
    # oracle: the rewritten bodies typecheck in the fused and split contexts
    body = App(V0, V1)  # in context (a, b)
    assert infer(Context.of([Product(a, b)]), subst(sigma_curry(a, b), body)) == infer(Context.of([a, b]), body)
    assert infer(Context.of([a, b]), subst(sigma_uncurry(), V0)) == Product(a, b)


@given(raw_terms)
def test_subst_identity(t):
    assert subst(ids, t) == t


@given(raw_terms, st.lists(st.integers(0, 8), min_size=9, max_size=9))
def test_rename_is_subst_of_renaming(t, table):
    def r(i):
        return table[i] if i < len(table) else i + 3

    assert rename(r, t) == subst(compose(ids, r), t)
    assert rename(shift, t) == subst(compose(ids, shift), t)


@given(raw_terms, raw_terms, st.lists(raw_terms, min_size=1, max_size=4))
def test_subst_split(t, s, images):
    def sigma(i):
        return images[i] if i < len(images) else Var(i + 2)

    assert subst_one(subst(exts(sigma), t), s) == subst(cons(s, sigma), t)


@given(raw_terms, raw_terms)
def test_subst_one_matches_named_oracle(t, s):
    # raw terms use indices <= 5, so contexts of 7 and 6 cover every variable
    assert subst_one(t, s) == oracle_subst_one(t, s, 7)


# beta

def test_beta_examples():
    assert step_beta_root(EMPTY, App(I, STAR)) == (STAR, "β-λ")
    assert step_beta_root(EMPTY, Proj(TT, Side.LEFT, Pair(I, STAR))) == (I, "β-π₁")
    assert step_beta_root(EMPTY, Proj(TOP, Side.RIGHT, Pair(I, STAR))) == (STAR, "β-π₂")
    assert step_beta_root(Context.of([TOP]), V0) is None


# iso rows: (context, redex, expected result, rule)

ROWS = [
    ([], Iso(COMM, Pair(STAR, I)), Pair(I, STAR), "comm"),
    ([], Iso(ASSO, Pair(STAR, Pair(STAR, I))), Pair(Pair(STAR, STAR), I), "asso"),
    ([TxT], Iso(ASSO, Pair(I, V0)), Pair(Pair(I, L(V0)), R(V0)), "split-asso"),
    ([], Iso(Sym(ASSO), Pair(Pair(STAR, I), STAR)), Pair(STAR, Pair(I, STAR)), "sym-asso"),
    ([TxT], Iso(Sym(ASSO), Pair(V0, I)), Pair(L(V0), Pair(R(V0), I)), "split-sym-asso"),
    ([], Iso(DIST, Pair(Lam(TOP, STAR), I)), Lam(TOP, Pair(STAR, V0)), "dist-λ"),
    ([TT], Iso(DIST, Pair(I, V0)), Lam(TOP, Pair(V0, App(V1, V0))), "dist-λη-r"),
    ([TT], Iso(DIST, Pair(V0, I)), Lam(TOP, Pair(App(V1, V0), V0)), "dist-λη-l"),
    ([TT, TT], Iso(DIST, Pair(V1, V0)), Lam(TOP, Pair(App(V2, V0), App(V1, V0))), "η-dist-app"),
    ([], Iso(Sym(DIST), Lam(TOP, Pair(V0, STAR))), Pair(I, Lam(TOP, STAR)), "split-dist-λ"),
    ([Arrow(TOP, TxT)], Iso(Sym(DIST), Lam(TOP, App(V1, V0))),
     Pair(Lam(TOP, L(App(V1, V0))), Lam(TOP, R(App(V1, V0)))), "split-dist-λ-η"),
    ([], Iso(CURRY, Lam(TOP, Lam(TT, App(V0, V1)))),
     Lam(Product(TOP, TT), App(Proj(TT, Side.RIGHT, V0), L(V0))), "curry"),
    ([Arrow(TOP, TT)], Iso(CURRY, Lam(TOP, App(V1, V0))),
     Lam(TxT, App(App(V1, L(V0)), R(V0))), "η-curry"),
    ([], Iso(Sym(CURRY), Lam(TxT, V0)), Lam(TOP, Lam(TOP, Pair(V1, V0))), "uncurry"),
    ([], Iso(ID_PROD, Pair(I, STAR)), I, "id-×"),
    ([], Iso(Sym(ID_PROD), STAR), Pair(STAR, STAR), "id-×-i"),
    ([], Iso(ID_ARROW, Lam(TOP, STAR)), App(Lam(TOP, STAR), STAR), "id-⇒"),
    ([TOP], Iso(Sym(ID_ARROW), V0), Lam(TOP, V1), "id-⇒-i"),
    ([], Iso(ABS, Lam(TOP, STAR)), STAR, "abs"),
    ([TOP], Iso(Sym(ABS), V0, TT), Lam(TOP, V1), "abs-i"),
    ([], Iso(CongProd1(COMM), Pair(Pair(STAR, I), STAR)), Pair(Iso(COMM, Pair(STAR, I)), STAR), "cong-×₁"),
    ([], Iso(CongProd2(Sym(ABS)), Pair(STAR, STAR), Product(TOP, TT)),
     Pair(STAR, Iso(Sym(ABS), STAR, TT)), "cong-×₂"),
    ([], Iso(CongArrow2(ID_PROD), Lam(TOP, Pair(V0, STAR))), Lam(TOP, Iso(ID_PROD, Pair(V0, STAR))), "cong-⇒₂"),
    ([], Iso(CongArrow1(ID_PROD), Lam(TxT, L(V0))), Lam(TOP, L(Iso(Sym(ID_PROD), V0))), "t-subst"),
    ([], Iso(CongArrow1(ABS), Lam(TT, App(V0, STAR))), Lam(TOP, App(Iso(Sym(ABS), V0, TT), STAR)), "t-subst"),
    ([], Iso(Sym(CongArrow1(Sym(ABS))), Lam(TT, App(V0, STAR))),
     Lam(TOP, App(Iso(Sym(ABS), V0, TT), STAR)), "t-subst"),
]


@pytest.mark.parametrize("ctx, redex, expected, rule", ROWS, ids=[f"{r[3]}-{i}" for i, r in enumerate(ROWS)])
def test_iso_rows(ctx, redex, expected, rule):
    g = Context.of(ctx)
    assert step_iso_root(g, redex) == (expected, rule)
    assert infer(g, expected) == infer(g, redex)


def test_iso_rows_cover_every_rule():
    expected = {"comm", "asso", "split-asso", "sym-asso", "split-sym-asso", "dist-λ", "dist-λη-r",
                "dist-λη-l", "η-dist-app", "split-dist-λ", "split-dist-λ-η", "curry", "η-curry",
                "uncurry", "id-×", "id-×-i", "id-⇒", "id-⇒-i", "abs", "abs-i", "cong-×₁", "cong-×₂",
                "cong-⇒₂", "t-subst"}
    assert {r[3] for r in ROWS} == expected


def test_neutral_coercions_do_not_step():
    g = Context.of([TxT])
    assert step_iso_root(g, Iso(COMM, V0)) is None
    assert step_iso_root(Context.of([Arrow(TOP, TxT)]), Iso(Sym(DIST), V0)) is None
    assert step_iso_root(Context.of([TT]), Iso(CongArrow1(Sym(ID_PROD)), V0)) is None
    assert progress(g, Iso(COMM, V0)) == Done(progress(g, V0).kind)


def test_ill_formed_redex():
    with pytest.raises(IllFormedRedex):
        step_iso_root(EMPTY, Iso(COMM, STAR))


# progress

def test_progress_examples():
    assert progress(EMPTY, STAR) == Done(NF_STAR)
    first = progress(EMPTY, OMEGA)
    assert (first.kind, first.rule, first.path) == (StepKind.ISO, "abs-i", (Pos.APP_LEFT, Pos.LAM_BODY, Pos.APP_LEFT))
    r = progress(EMPTY, Lam(TOP, App(I, V0)))
    assert (r.kind, r.rule, r.path, r.result) == (StepKind.BETA, "β-λ", (Pos.LAM_BODY,), Lam(TOP, V0))
    assert progress(EMPTY, Pair(I, STAR)) == Done(NfPair(NF_LAM, NF_STAR))


def test_progress_goes_left_first():
    r = progress(EMPTY, Pair(App(I, STAR), App(I, STAR)))
    assert r.path == (Pos.PAIR_LEFT,)
    r = progress(EMPTY, App(App(Lam(TOP, I), STAR), App(I, STAR)))
    assert r.path == (Pos.APP_LEFT,)


def _at(t, path):
    for p in path:
        match p:
            case Pos.APP_LEFT:
                t = t.fun
            case Pos.APP_RIGHT:
                t = t.arg
            case Pos.PAIR_LEFT:
                t = t.left
            case Pos.PAIR_RIGHT:
                t = t.right
            case Pos.LAM_BODY:
                t = t.body
            case Pos.PROJ_BODY | Pos.ISO_BODY:
                t = t.subject
    return t


def _subterms(t):
    yield t
    match t:
        case Lam(_, b):
            yield from _subterms(b)
        case App(f, x) | Pair(f, x):
            yield from _subterms(f)
            yield from _subterms(x)
        case Proj(_, _, u) | Iso(_, u, _):
            yield from _subterms(u)


@settings(max_examples=100)
@given(typed_terms(fuel=5, iso_rate=0.5))
def test_steps_preserve_types_and_eliminate_witnesses(sample):
    g, t, a = sample
    for _ in range(400):
        r = progress(g, t)
        assert progress(g, t) == r
        if isinstance(r, Done):
            assert is_normal(t)
            break
        assert r.result != t
        assert infer(g, r.result) == a
        if r.kind is StepKind.ISO:
            before, after = _at(t, r.path), _at(r.result, r.path)
            assert isinstance(before, Iso)
            # the coercion node is gone; any Iso left there was already inside its subject
            assert not isinstance(after, Iso) or after in _subterms(before.subject)
        t = r.result
