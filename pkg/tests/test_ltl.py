import pytest
from hypothesis import given, strategies as st

from ltlfrag.ltl import (
    Alphabet, Always, And, Const, Eventually, Fragment, Letter, LtlError, Next, Not, Or,
    ParseError, Release, UPWord, UnknownLetterError, UnsupportedFragmentError, Until,
    eval_formula, is_nnf, normalize_operator_set, parse, subformulas, temporal_count, to_nnf,
    to_text,
)

from .oracles import naive_eval
from .strategies import formulas, up_words

AB = Alphabet("ab")


def w(text):
    return UPWord.parse(text)


@pytest.mark.parametrize("text, tree", [
    ("a R b", Release(Letter("a"), Letter("b"))),
    ("X b", Next(Letter("b"))),
    ("XFa", Next(Eventually(Letter("a")))),
    ("SF a", Next(Eventually(Letter("a")))),
    ("!a & b | a", Or(And(Not(Letter("a")), Letter("b")), Letter("a"))),
    ("a U b U a", Until(Letter("a"), Until(Letter("b"), Letter("a")))),
    ("G(a | X b)", Always(Or(Letter("a"), Next(Letter("b"))))),
    ("~true", Not(Const(True))),
])
def test_parse(text, tree):
    assert parse(text, AB) == tree


@pytest.mark.parametrize("text, error", [
    ("a &", ParseError),
    ("(a", ParseError),
    ("", ParseError),
    ("a b", ParseError),
    ("c", UnknownLetterError),
    ("a $ b", ParseError),
])
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse(text, AB)


def test_multichar_alphabet():
    al = Alphabet.parse("req, ack")
    assert parse("req U ack", al) == Until(Letter("req"), Letter("ack"))
    assert UPWord.parse("req ack(ack)", al) == UPWord(("req", "ack"), ("ack",))


@pytest.mark.parametrize("letters", [[], ["a", "a"], ["X"], ["1a"]])
def test_bad_alphabet(letters):
    with pytest.raises(LtlError):
        Alphabet(letters)


def test_subformulas_postorder():
    assert [to_text(f) for f in subformulas(parse("a R b", AB))] == ["a", "b", "(a R b)"]
    assert [to_text(f) for f in subformulas(parse("F a", AB))] == ["a", "F a"]


def test_nnf_of_negated_letter():
    assert to_nnf(parse("!a", AB), AB) == Letter("b")
    assert to_nnf(parse("!a", Alphabet("a")), Alphabet("a")) == Const(False)
    assert to_nnf(parse("!(a U b)", AB), AB) == Release(Letter("b"), Letter("a"))


@pytest.mark.parametrize("phi, word, value", [
    ("a R b", "(b)", True),
    ("a R b", "(ab)", False),
    ("X b", "ab(b)", True),
    ("X b", "aab(b)", False),
    ("F a", "(b)", False),
    ("G F a", "b(ab)", True),
    ("F G a", "a(ab)", False),
    ("a U b", "aaa(b)", True),
    ("a U b", "(a)", False),
])
def test_eval_examples(phi, word, value):
    assert eval_formula(parse(phi, AB), w(word), AB) is value


def test_eval_rejects_foreign_letter():
    with pytest.raises(UnknownLetterError):
        eval_formula(parse("a", AB), w("(c)"), AB)


def test_upword_basics():
    u = w("ab(ba)")
    assert str(u) == "ab(ba)^ω"
    assert u.prefix(6) == tuple("abbaba")
    assert u.canonical() == u
    assert w("aab(ab)").canonical() == w("a(ab)")
    assert w("(abab)").canonical() == w("(ab)")
    assert w("a(bb)^w").canonical() == w("a(b)")
    with pytest.raises(LtlError):
        UPWord(("a",), ())
    with pytest.raises(LtlError):
        UPWord.parse("ab")


@pytest.mark.parametrize("ops, frag", [
    ({"F"}, Fragment.F),
    ({"F", "SF"}, Fragment.SF),
    ({"SF"}, Fragment.SF),
    ({"X"}, Fragment.X),
    ({"X", "F", "SF"}, Fragment.XF),
    ({"Eventually", "Until"}, Fragment.U),
    ({"U"}, Fragment.U),
    ({"X", "U"}, Fragment.FULL),
    ({"X", "F", "U"}, Fragment.FULL),
    ("X,F", Fragment.XF),
    ("XF", Fragment.XF),
])
def test_normalize_operator_set(ops, frag):
    assert normalize_operator_set(ops) is frag


@pytest.mark.parametrize("ops", [{"SF", "U"}, {"F", "SF", "U"}])
def test_sf_with_until_unsupported(ops):
    with pytest.raises(UnsupportedFragmentError):
        normalize_operator_set(ops)


@pytest.mark.parametrize("ops", [set(), {"Y"}])
def test_bad_operator_set(ops):
    with pytest.raises(LtlError):
        normalize_operator_set(ops)


# -- properties ----------------------------------------------------------------

@given(formulas(max_temporal=3), up_words(max_x=5, max_y=5))
def test_eval_matches_naive(phi, word):
    assert eval_formula(phi, word) == naive_eval(phi, word)


@given(formulas(max_temporal=3), up_words(max_x=5, max_y=5))
def test_nnf_preserves_semantics(phi, word):
    nnf = to_nnf(phi, AB)
    assert is_nnf(nnf)
    assert eval_formula(nnf, word) == eval_formula(phi, word)


@given(formulas(max_temporal=3), up_words(max_x=4, max_y=4), st.integers(0, 3))
def test_eval_invariant_under_representation(phi, word, k):
    unrolled = UPWord(word.x + word.y * k, word.y * (k + 1))
    assert eval_formula(phi, unrolled) == eval_formula(phi, word) == eval_formula(phi, word.canonical())


@given(formulas(max_temporal=3))
def test_text_roundtrip(phi):
    assert parse(to_text(phi), AB) == phi


@given(formulas(max_temporal=2), formulas(max_temporal=1), up_words())
def test_dualities(f, g, word):
    def ev(x):
        return eval_formula(x, word)
    assert ev(Not(Eventually(f))) == ev(Always(Not(f)))
    assert ev(Not(Until(f, g))) == ev(Release(Not(f), Not(g)))


@given(st.integers(0, 3), st.data())
def test_next_only_depends_on_prefix(d, data):
    body = data.draw(formulas(max_temporal=0))
    phi = body
    for _ in range(d):
        phi = Next(phi)
    u, v = data.draw(up_words()), data.draw(up_words())
    if u.prefix(d + 1) == v.prefix(d + 1):
        assert eval_formula(phi, u) == eval_formula(phi, v)
    assert temporal_count(phi) == d
