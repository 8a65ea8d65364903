import pytest
from hypothesis import given, strategies as st

from twintree import GRIGORCHUK, TWIN, NotContracting, ResourceCapExceeded, SelfSimilarGroup, comm, conj, inverse, reduce
from twintree.tree_core import (
    GRIGORCHUK_SPEC,
    INACTIVE_SPEC,
    TRIVIAL_SPEC,
    AutomatonSpec,
    get_group,
    left_normed_comm,
    power,
)

words = st.text(alphabet="abcd", max_size=14)


def brute_order(g, w, cap=10):
    p = w
    for k in range(cap + 1):
        if g.is_trivial(p):
            return 1 << k
        p = reduce(p + p)
    return None


def test_reduce_cancels_pairs():
    assert reduce("abba") == ""
    assert reduce("aab1cd") == "bcd"
    assert reduce("") == ""


def test_word_helpers():
    assert inverse("abc") == "cba"
    assert power("ad", 2) == "adad"
    assert power("ab", -1) == "ba"
    assert conj("b", "a") == "aba"
    assert comm("b", "d") == "bdbd"
    assert left_normed_comm("a", "b", "c") == reduce(comm(comm("a", "b"), "c"))


@given(words)
def test_reduce_idempotent_and_free_of_squares(w):
    r = reduce(w)
    assert reduce(r) == r
    assert all(r[i] != r[i + 1] for i in range(len(r) - 1))


@given(words)
def test_word_times_inverse_trivial(w):
    assert TWIN.is_trivial(w + inverse(w))


def test_spec_examples_is_trivial():
    assert TWIN.is_trivial("")
    assert TWIN.is_trivial("ad" * 4)
    assert not TWIN.is_trivial("ad" * 2)


def test_spec_examples_equals():
    assert TWIN.equals("b", "b")
    assert TWIN.equals(TWIN.state("bdbd", "1"), "abab")
    assert not TWIN.equals("a", "d")


def test_decompose_recursion():
    assert TWIN.decompose("a") == ("", "", 1)
    assert TWIN.decompose("b") == ("c", "a", 0)
    assert TWIN.decompose("c") == ("a", "d", 0)
    assert TWIN.decompose("d") == ("", "b", 0)
    assert GRIGORCHUK.decompose("b") == ("a", "c", 0)


@given(words, words)
def test_decompose_is_multiplicative(u, v):
    # (uv)|x = u|x . v|(x^u)
    lu, ru, su = TWIN.decompose(u)
    lv, rv, sv = TWIN.decompose(v)
    l, r, s = TWIN.decompose(u + v)
    assert s == su ^ sv
    sect_v = (rv, lv) if su else (lv, rv)
    assert TWIN.equals(l, lu + sect_v[0]) and TWIN.equals(r, ru + sect_v[1])


def test_states_and_action():
    assert TWIN.state("b", "00") == "a"
    assert TWIN.act_on_vertex("a", "01") == "11"
    assert TWIN.state("d", "") == "d"


def test_element_order_examples():
    assert TWIN.element_order("a") == 2
    assert TWIN.element_order("ad") == 4
    assert TWIN.element_order("") == 1
    assert TWIN.element_order("bcd") == 64


@given(st.text(alphabet="abcd", min_size=1, max_size=9))
def test_element_order_matches_repeated_squaring(w):
    assert TWIN.element_order(w, cap=10) == brute_order(TWIN, reduce(w))


@given(st.text(alphabet="abcd", min_size=1, max_size=9))
def test_grigorchuk_orders_match_squaring(w):
    assert GRIGORCHUK.element_order(w, cap=10) == brute_order(GRIGORCHUK, reduce(w))


def test_portrait_examples():
    p = TWIN.portrait("a", 1)
    assert p.active == 1 and all(c.active == 0 and c.label == "" for c in p.children)
    p = TWIN.portrait("d", 1)
    assert p.active == 0 and [c.label for c in p.children] == ["", "b"]
    p = TWIN.portrait("", 3)
    assert p.depth() == 3
    assert p.to_dict()["active"] == 0


def test_level_permutation_examples():
    assert TWIN.level_permutation("a", 1) == (1, 0)
    assert TWIN.level_permutation("a", 2) == (2, 3, 0, 1)
    assert TWIN.level_permutation("", 4) == tuple(range(16))


@given(words, words, st.integers(min_value=1, max_value=5))
def test_level_permutation_homomorphism(u, v, n):
    p, q = TWIN.level_permutation(u, n), TWIN.level_permutation(v, n)
    assert TWIN.level_permutation(u + v, n) == tuple(q[i] for i in p)


def test_level_permutation_matches_vertex_action():
    w = "abcadb"
    perm = TWIN.level_permutation(w, 4)
    for leaf in range(16):
        bits = format(leaf, "04b")
        assert int(TWIN.act_on_vertex(w, bits), 2) == perm[leaf]


def test_nucleus_examples():
    for g in (TWIN, GRIGORCHUK):
        nuc = g.nucleus()
        assert len(nuc) == 5
        for s in ("", "a", "b", "c", "d"):
            assert any(g.equals(s, x) for x in nuc)
    assert SelfSimilarGroup(TRIVIAL_SPEC).nucleus() == [""]


def test_level_transitivity():
    assert TWIN.is_level_transitive(1)
    assert TWIN.is_level_transitive(6)
    assert not SelfSimilarGroup(INACTIVE_SPEC).is_level_transitive(1)


def test_spec_validation():
    with pytest.raises(ValueError):
        AutomatonSpec("bad", (("a", ("", "z")),), frozenset("a"))
    with pytest.raises(ValueError):
        TWIN.check_word("xyz")
    with pytest.raises(ValueError):
        get_group("nope")
    assert get_group("grigorchuk").spec == GRIGORCHUK_SPEC


def test_closure_cap_is_a_resource_error():
    g = SelfSimilarGroup(TWIN.spec, max_closure=3)
    with pytest.raises(ResourceCapExceeded):
        g.is_trivial("bcdcdbdbcdcdbcbdbd")


def test_noncontracting_spec_is_reported():
    # (bc)^k fixes 11 with section (bc)^k for every k, so no finite nucleus
    spec = AutomatonSpec("grow", (("a", ("", "")), ("b", ("b", "c")), ("c", ("a", "b"))), frozenset("a"))
    g = SelfSimilarGroup(spec, max_closure=500)
    w = "bc" * 5
    assert g.act_on_vertex(w, "11") == "11" and g.equals(g.state(w, "11"), w)
    with pytest.raises(NotContracting):
        g.nucleus()


def test_generators_must_be_involutions():
    with pytest.raises(ValueError):
        AutomatonSpec("x", (("a", ("a", "")),), frozenset("a"))
    with pytest.raises(ValueError):
        AutomatonSpec("x", (("a", ("", "")), ("b", ("ab", ""))), frozenset("a"))
