import json

import pytest
from hypothesis import given, settings

from ltlfrag.gcma import (
    AnchorError, AutomatonError, Gcma, SizeGuardError, accepts, anchor, anchor_candidates,
    build_gcma, fig1_automaton, final_run_prefix, state_of_label, trim,
)
from ltlfrag.ltl import Alphabet, UPWord, eval_formula, parse, to_nnf
from ltlfrag.selftest import up_words as all_up_words

from .oracles import fig1_member, naive_accepts, naive_anchors, words
from .strategies import formulas, up_words

AB = Alphabet("ab")


def build(text, alphabet=AB):
    return trim(build_gcma(to_nnf(parse(text, alphabet), alphabet), alphabet))


def w(text):
    return UPWord.parse(text)


def test_release_fixture(backend):
    A = build("a R b")
    qa, qb, qr = (state_of_label(A, s) for s in (["a"], ["b"], ["b", "(a R b)"]))
    assert A.n_states == 3
    assert A.initial == {qr}
    assert A.final_sets == (frozenset({qa, qr}),)
    a, b = A.letter_ids("ab")
    assert [A.delta[a][q] for q in (qa, qb, qr)] == [qa, qa, qa]
    assert [A.delta[b][q] for q in (qa, qb, qr)] == [qb, qb, qr]


def test_eventually_fixture(backend):
    A = build("F a")
    e, f, af = (state_of_label(A, s) for s in ([], ["F a"], ["a", "F a"]))
    assert A.n_states == 3
    assert A.initial == {f, af}
    a, b = A.letter_ids("ab")
    assert all(A.delta[a][q] == af for q in A.states)
    assert (A.delta[b][e], A.delta[b][f], A.delta[b][af]) == (e, f, f)
    # one final set: states holding a or lacking F a
    assert A.final_sets == (frozenset({e, af}),)


def test_letter_has_no_final_sets(backend):
    raw = build_gcma(parse("a", AB), AB)
    assert raw.final_sets == ()
    assert all("a" in raw.labels[q] for q in raw.initial)


def test_contradiction_is_empty():
    A = build("a & b")
    assert A.is_empty_language()
    assert A.n_states > 0  # every word still has a final run


def test_size_guard():
    phi = to_nnf(parse("X X X X X X X X X a", AB), AB)
    with pytest.raises(SizeGuardError):
        build_gcma(phi, AB, max_sub=5)


def test_requires_nnf():
    with pytest.raises(AutomatonError):
        build_gcma(parse("!F a", AB), AB)


@pytest.mark.parametrize("word, label", [("b", ["b", "(a R b)"]), ("ab", ["a"]), ("a", ["a"])])
def test_release_anchors(word, label):
    A = build("a R b")
    assert anchor(A, tuple(word)) == state_of_label(A, label)


@pytest.mark.parametrize("word, state", [("b", 1), ("a", 2), ("ab", 2), ("ba", 3), ("bb", 1)])
def test_fig1_anchors(word, state):
    A = fig1_automaton()
    assert anchor(A, tuple(word)) == state
    assert naive_anchors(A, tuple(word)) == [state]


@pytest.mark.parametrize("word, value", [("ab(b)", True), ("(ab)", False), ("a(b)", True), ("(a)", False)])
def test_fig1_accepts(word, value):
    assert accepts(fig1_automaton(), w(word)) is value


def test_fig1_table():
    A = fig1_automaton()
    assert A.initial == {0, 1}
    assert A.final_sets == (frozenset({1, 2}),)
    assert A.delta == ((0, 0, 2, 2), (0, 1, 3, 3))


def test_release_accepts():
    A = build("a R b")
    assert accepts(A, w("(b)"))
    assert not accepts(A, w("(ab)"))


def test_final_run_prefix():
    A = build("a R b")
    qr = state_of_label(A, ["b", "(a R b)"])
    assert final_run_prefix(A, w("(b)"), 2) == [qr, qr, qr]
    F = fig1_automaton()
    assert final_run_prefix(F, w("a(b)"), 1)[0] == 0
    assert final_run_prefix(F, w("ab(b)"), 0) == [0]


def test_anchor_error_on_broken_automaton():
    # b is a loop at both 1 and 2
    A = Gcma.from_table("ab", {"a": [0, 0, 2, 2], "b": [0, 1, 2, 2]}, {0, 1}, [{1, 2}])
    with pytest.raises(AnchorError):
        anchor(A, ("b",))
    assert anchor_candidates(A, ("b",)) == [1, 2]


def test_serialization_roundtrip():
    A = build("a U X b")
    B = Gcma.from_dict(json.loads(A.to_json()))
    assert B.delta == A.delta and B.initial == A.initial and B.final_sets == A.final_sets
    dot = build("a R b").to_dot()
    assert dot.startswith("digraph")
    # edge p -> q labelled a means p = a . q
    for edge in ('0 -> 1 [label="a"]', '1 -> 0 [label="b"]', '0 -> 2 [label="a"]',
                 '2 -> 2 [label="b"]'):
        assert edge in dot


def test_fig1_exhaustive():
    A = fig1_automaton()
    for word in all_up_words("ab", 4, 3):
        assert accepts(A, word) == fig1_member(word)


# -- properties ----------------------------------------------------------------

@settings(max_examples=40)
@given(formulas(max_temporal=3))
def test_accepts_matches_semantics(phi):
    A = trim(build_gcma(to_nnf(phi, AB), AB))
    for word in all_up_words(AB, 2, 2):
        assert accepts(A, word) == eval_formula(phi, word) == naive_accepts(A, word)


@settings(max_examples=40)
@given(formulas(max_temporal=3))
def test_unique_anchor(phi):
    A = trim(build_gcma(to_nnf(phi, AB), AB))
    for u in words(AB, 1, 6):
        assert len(naive_anchors(A, u)) == 1


@settings(max_examples=30)
@given(formulas(max_temporal=3))
def test_trim_idempotent_and_language_preserving(phi):
    raw = build_gcma(to_nnf(phi, AB), AB)
    A = trim(raw)
    B = trim(A)
    assert B.delta == A.delta and B.initial == A.initial and B.final_sets == A.final_sets
    for word in all_up_words(AB, 2, 2):
        assert accepts(A, word) == eval_formula(phi, word)


@settings(max_examples=30)
@given(formulas(max_temporal=3), up_words(max_x=4, max_y=3))
def test_final_run_is_valid(phi, word):
    A = trim(build_gcma(to_nnf(phi, AB), AB))
    word = word.canonical()
    n = len(word.x) + 2 * len(word.y)
    run = final_run_prefix(A, word, n)
    for i in range(n):
        assert run[i] == A.apply(word.letter(i), run[i + 1])
    period = run[len(word.x):len(word.x) + len(word.y)]
    assert all(any(q in F for q in period) for F in A.final_sets)


@settings(max_examples=20)
@given(formulas(max_temporal=2))
def test_backends_build_the_same_tableau(phi):
    from ltlfrag import _kernels
    nnf = to_nnf(phi, AB)
    tables = {name: None for name in _kernels.backends()}
    for name, impl in _kernels.backends().items():
        original = _kernels.tableau_delta
        _kernels.tableau_delta = impl.tableau_delta
        try:
            tables[name] = build_gcma(nnf, AB).delta
        finally:
            _kernels.tableau_delta = original
    assert len(set(tables.values())) == 1
