import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from markedgroups import grigorchuk as gr
from markedgroups import words
from markedgroups.grigorchuk import OracleSeq

grig_words = st.text(alphabet="abcdABCD", max_size=40)
ZERO = OracleSeq.parse("0(0)*")


KLEIN = {"b": (1, 0), "c": (0, 1), "d": (1, 1)}
NAMES = {v: k for k, v in KLEIN.items()}


def oracle_normal_form(w):
    """Normal form in Z2 * (Z2 x Z2): alternate a with nonzero Klein-group vectors."""
    out = []
    for x in w.lower():
        if x == "a":
            if out and out[-1] == "a":
                out.pop()
            else:
                out.append("a")
        elif out and out[-1] != "a":
            v = tuple((p + q) % 2 for p, q in zip(KLEIN[out.pop()], KLEIN[x]))
            if v != (0, 0):
                out.append(NAMES[v])
        else:
            out.append(x)
    return "".join(out)


@pytest.mark.parametrize("w,r", [("bc", "d"), ("aa", ""), ("cdb", ""), ("bcd", ""), ("AbA", "aba"), ("abba", "")])
def test_gamma_reduce_examples(w, r):
    for strategy in ("stack", "leftmost", "rightmost"):
        assert gr.gamma_reduce(w, strategy) == r


@given(grig_words)
def test_gamma_reduce_confluent_and_shaped(w):
    r = gr.gamma_reduce(w)
    assert gr.gamma_reduce(w, "leftmost") == r == gr.gamma_reduce(w, "rightmost")
    assert r == oracle_normal_form(w)
    assert r == r.lower()
    for x, y in zip(r, r[1:]):
        assert x != y
        assert x == "a" or y == "a"


def test_gamma_reduce_errors():
    with pytest.raises(ValueError):
        gr.gamma_reduce("abe")
    with pytest.raises(ValueError):
        gr.gamma_reduce("ab", "middle")


@pytest.mark.parametrize("w,i,expected", [("adad", 0, "d"), ("adad", 1, "d"), ("abab", 0, "ba")])
def test_phi_examples(w, i, expected):
    assert gr.phi(w, i, gr.TRIPLES["0"]) == expected


def test_phi_errors():
    with pytest.raises(ValueError):
        gr.phi("ab", 0, gr.TRIPLES["0"])
    with pytest.raises(ValueError):
        gr.phi("aBa", 0, gr.TRIPLES["0"])


@given(grig_words, st.sampled_from("012"), st.sampled_from([0, 1]))
def test_phi_length_bound(w, sym, i):
    r = gr.gamma_reduce(w)
    if r.count("a") % 2 == 0:
        assert len(gr.phi(r, i, gr.TRIPLES[sym])) <= (len(w) + 1) / 2


def test_oracle_parsing():
    o = OracleSeq.parse("012(0)*")
    assert [o.symbol(i) for i in range(6)] == list("012000")
    assert o.triple(1) == ("a", "", "a")
    assert str(OracleSeq.parse("12")) == "12(2)*"
    for bad in ("", "013", "(0)*", "01(3)*", "0(01)*"):
        with pytest.raises(ValueError):
            OracleSeq.parse(bad)


def test_member_examples():
    assert not gr.member("a", ZERO).accepted
    v = gr.member("bb", ZERO)
    assert v.accepted and v.tree.rule == "trivial"
    v = gr.member("adad", ZERO)
    assert not v.accepted
    assert [c.word for c in v.tree.children] == ["d", "d"]
    assert all(c.rule == "length-1" for c in v.tree.children)


def test_member_tree_shape():
    v = gr.member("abacabacabac", OracleSeq.parse("012"))
    for node in v.tree.walk():
        assert len(node.children) in (0, 2)
        if node.children:
            assert node.accepted == all(c.accepted for c in node.children)
    assert v.depth <= math.ceil(math.log2(12)) + 1


@pytest.mark.parametrize("omega", ["0", "1", "2", "012", "21(0)*", "1102(2)*"])
def test_gamma_relators_accepted(omega):
    o = OracleSeq.parse(omega)
    for r in ("aa", "bb", "cc", "dd", "bcd", "AA", "DCB", ""):
        assert gr.member(r, o).accepted


@pytest.mark.parametrize("omega", ["0", "012", "2(1)*"])
def test_subgroup_properties(omega):
    o = OracleSeq.parse(omega)
    pred = gr.GrigMembership(o)
    ball = list(words.iter_ball(4, 4))
    members = [w for w in ball if pred(w)]
    for w in ball:
        assert pred(w) == pred(words.inverse(w)) == gr.member(w, o).accepted
    for u, v in itertools.product(members, repeat=2):
        assert pred(words.reduce(u + v))


def test_fingerprint_length_two():
    fp = gr.fingerprint_S(ZERO, 2)
    ball = words.enumerate_ball(4, 2).words
    got = {ball[i] for i in fp.members()}
    assert got == {"", "aa", "AA", "bb", "BB", "cc", "CC", "dd", "DD"}


def test_fingerprint_threads():
    o = OracleSeq.parse("21(0)*")
    assert gr.fingerprint_S(o, 4, threads=2) == gr.fingerprint_S(o, 4)


def test_prop62_first_part():
    rep = gr.verify_prop62(OracleSeq.parse("010"), OracleSeq.parse("012"), 2)
    assert rep["check"] == "i" and rep["holds"] and rep["length"] == 4
    assert gr.verify_prop62(ZERO, ZERO, 2)["holds"]


def test_separating_word_for_constant_oracles():
    w = gr.separating_word(ZERO, OracleSeq.parse("1"), 8)
    assert w == "acacacac"
    assert gr.member(w, OracleSeq.parse("1")).accepted != gr.member(w, ZERO).accepted
    assert gr.separating_word(ZERO, OracleSeq.parse("1"), 7) is None


def test_covering_estimate():
    assert gr.covering_estimate_B(0)["bound"] == 1
    rep = gr.covering_estimate_B(2)
    assert rep["bound"] == 9 and rep["observed"] <= 9 and rep["covered"]
    assert len(gr.center_sequences(2)) == 9
    big = gr.covering_estimate_B(3, budget=10**6)
    assert big["bound"] == 27 and big["observed"] is None
