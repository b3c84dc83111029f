import json

import pytest
from hypothesis import given, settings

from ltlfrag.decider import LATTICE, ROWS, InconsistencyError, analyze, decide, decide_all
from ltlfrag.efgame import certify_indistinguishable
from ltlfrag.ltl import (
    Alphabet, And, Fragment, LtlError, Not, UPWord, UnsupportedFragmentError, eval_formula,
    parse,
)
from ltlfrag.patterns import GAME_FOR_PATTERN, stutter_equivalent

from .strategies import formulas

AB = Alphabet("ab")
ABC = Alphabet("abc")

X, SF, F, XF, U = Fragment.X, Fragment.SF, Fragment.F, Fragment.XF, Fragment.U

# fragment -> operators allowed by its syntax
SYNTAX = {
    X: ("X",),
    F: ("F", "G"),
    SF: ("SF", "SG", "F", "G"),
    XF: ("X", "F", "G"),
    U: ("U", "R", "F", "G"),
}

TABLE = [
    ("a R b", AB, {X: False, SF: True, F: True, XF: True, U: True}),
    ("X b", AB, {X: True, SF: False, F: False, XF: True, U: False}),
    ("F a", AB, {X: False, SF: True, F: True, XF: True, U: True}),
    ("a", AB, {X: True, SF: True, F: True, XF: True, U: True}),
    ("a U b", ABC, {X: False, SF: False, F: False, XF: False, U: True}),
    ("G(a | X b)", ABC, {X: False, SF: True, F: False, XF: True, U: False}),
    # over two letters this is a^omega + a* b^omega
    ("G(a | X b)", AB, {X: False, SF: True, F: True, XF: True, U: True}),
    ("G F (a & X b)", ABC, {X: False, SF: False, F: False, XF: True, U: True}),
    ("X F a", AB, {X: False, SF: True, F: False, XF: True, U: False}),
    ("G F a", AB, {X: False, SF: True, F: True, XF: True, U: True}),
]


def check_witness(phi, alphabet, verdict, depth=6):
    """Witness obligations for a negative verdict."""
    pair = verdict.witness
    if pair is None:
        for r in verdict.reasons:
            if r["detail"].get("witness"):
                d = r["detail"]["witness"]
                pair = type("Pair", (), {"w1": UPWord.parse(d["w1"], alphabet),
                                         "w2": UPWord.parse(d["w2"], alphabet),
                                         "relation": d["relation"], "pump": d["pump"]})
                break
    if pair is None:
        return False
    assert eval_formula(phi, pair.w1, alphabet) != eval_formula(phi, pair.w2, alphabet)
    if pair.relation == "prefix-k-equal":
        assert pair.w1.prefix(pair.pump) == pair.w2.prefix(pair.pump)
    elif pair.relation == "stutter-equivalent":
        assert stutter_equivalent(pair.w1, pair.w2)
    elif pair.relation == "occ-equal-pumped":
        assert certify_indistinguishable(pair, "SF", depth)
    elif pair.relation == "xf-pumped":
        assert certify_indistinguishable(pair, "XF", depth)
    return True


@pytest.mark.parametrize("text, alphabet, expected", TABLE, ids=[f"{t[0]}/{len(t[1])}" for t in TABLE])
def test_verdict_table(backend, text, alphabet, expected):
    verdicts = decide_all(text, alphabet)
    assert {f: v.expressible for f, v in verdicts.items()} == expected
    phi = parse(text, alphabet)
    for v in verdicts.values():
        if not v.expressible:
            assert v.reasons
            assert check_witness(phi, alphabet, v)


def test_release_reasons():
    v = decide("a R b", "X", AB)
    assert v.reasons[0]["detail"]["pattern"] == "T1"
    assert v.reasons[0]["detail"]["words"]["x"] == "b"
    assert v.witness.relation == "prefix-k-equal"


def test_next_under_until_reports_t3():
    v = decide("X b", "U", AB)
    assert v.reasons[0]["detail"]["pattern"] == "T3"
    assert stutter_equivalent(v.witness.w1, v.witness.w2)


def test_loop_language_reason():
    # no T2 or T3, but the loops acb and cab agree on letters and not on
    # membership
    v = decide("G F (a & X b)", "F", ABC)
    assert [r["kind"] for r in v.reasons] == ["loop-language"]
    detail = v.reasons[0]["detail"]
    assert detail["property"] == "swap-closed"
    assert set(detail["counterexample"]["w1"]) == set(detail["counterexample"]["w2"])
    assert v.witness is None
    assert check_witness(parse("G F (a & X b)", ABC), ABC, v)


def test_all_reasons():
    v = decide("X b", "F", AB, all_reasons=True)
    kinds = [r["detail"].get("pattern") for r in v.reasons if r["kind"] == "pattern"]
    assert kinds == ["T2", "T3"]


def test_full_and_unsupported():
    assert decide("a U b", "X,U", AB).expressible
    assert decide("a U b", {"X", "F", "U"}, AB).fragment is Fragment.FULL
    with pytest.raises(UnsupportedFragmentError):
        decide("a", {"SF", "U"}, AB)
    with pytest.raises(LtlError):
        decide("a", "F")


def test_empty_language_note():
    v = decide("a & b", "X", AB)
    assert v.expressible and "empty language" in v.notes


def test_json_is_deterministic():
    one = decide_all("G(a | X b)", AB)
    two = decide_all("G(a | X b)", AB)
    for f in ROWS:
        assert one[f].to_json(sort_keys=True) == two[f].to_json(sort_keys=True)
        data = json.loads(one[f].to_json())
        assert set(data) == {"formula", "alphabet", "fragment", "expressible", "reasons",
                             "witness", "notes", "stats"}
    assert "timings_ms" in one[F].to_dict(timings=True)["stats"]


def test_shared_analysis():
    an = analyze("a R b", AB)
    assert an.stats["trim_states"] == 3 and an.stats["classes"] == 2
    assert decide(None, "F", analysis=an).expressible


def test_lattice_violation_is_reported(monkeypatch):
    from ltlfrag import decider
    real = decider.decide

    def fake(phi, fragment, alphabet=None, **kw):
        v = real(phi, fragment, alphabet, **kw)
        if v.fragment is Fragment.U:
            v.expressible = False
        return v

    monkeypatch.setattr(decider, "decide", fake)
    with pytest.raises(InconsistencyError):
        decider.decide_all("a", AB)


# -- properties ----------------------------------------------------------------

def _syntax_test(fragment):
    @settings(max_examples=30)
    @given(formulas(max_temporal=3, ops=SYNTAX[fragment]))
    def check(phi):
        assert decide(phi, fragment, AB).expressible
    return check


test_syntax_x = _syntax_test(X)
test_syntax_f = _syntax_test(F)
test_syntax_sf = _syntax_test(SF)
test_syntax_xf = _syntax_test(XF)
test_syntax_u = _syntax_test(U)


@settings(max_examples=40)
@given(formulas(max_temporal=3))
def test_lattice_and_witnesses(phi):
    verdicts = decide_all(phi, AB)  # raises on a lattice violation
    for small, big in LATTICE:
        assert not verdicts[small].expressible or verdicts[big].expressible
    for v in verdicts.values():
        if not v.expressible and v.witness is not None:
            check_witness(phi, AB, v, depth=4)


@settings(max_examples=30)
@given(formulas(max_temporal=2))
def test_verdicts_depend_on_the_language_only(phi):
    first = {f: v.expressible for f, v in decide_all(phi, AB).items()}
    for variant in (Not(Not(phi)), And(phi, phi)):
        assert {f: v.expressible for f, v in decide_all(variant, AB).items()} == first


def test_game_for_pattern_names():
    assert GAME_FOR_PATTERN == {"T1": "X", "T2": "SF", "T3": "F", "T4": "XF"}
