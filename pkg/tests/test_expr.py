import pytest
from hypothesis import given, strategies as st

from twintree import ParseError, parse
from twintree.tree_core import comm, conj, inverse, power, reduce


def test_letters_and_identity():
    assert parse("abcd") == "abcd"
    assert parse("1") == ""
    assert parse("a a") == ""


def test_commutators_and_conjugates():
    assert parse("[b,d]") == "bdbd"
    assert parse("d^a") == "ada"
    assert parse("[d^a,d]") == reduce(comm("ada", "d"))
    assert parse("(c^a b)^c") == reduce(conj(conj("c", "a") + "b", "c"))


def test_powers_and_inverse():
    assert parse("a^2") == ""
    assert parse("(ad)^4") == power("ad", 4)
    assert parse("(ab)^-1") == "ba"
    assert parse("(abc)~") == "cba"
    assert parse("(ab)^0") == ""


def test_parse_error_column():
    with pytest.raises(ParseError) as exc:
        parse("x")
    assert exc.value.column == 1
    with pytest.raises(ParseError) as exc:
        parse("[a,b")
    assert exc.value.column == 5
    with pytest.raises(ParseError):
        parse("a^")
    with pytest.raises(ParseError):
        parse("a)")


@given(st.text(alphabet="abcd", max_size=10), st.text(alphabet="abcd", max_size=10))
def test_bracket_notation_agrees_with_helpers(u, v):
    assert parse(f"[({u or 1}),({v or 1})]") == reduce(comm(u, v))
    assert parse(f"({u or 1})^({v or 1})") == reduce(conj(u, v))


@given(st.text(alphabet="abcd", max_size=8), st.integers(min_value=-4, max_value=6))
def test_power_agrees_with_repetition(u, k):
    base = u if k >= 0 else inverse(u)
    assert parse(f"({u or 1})^{k}") == reduce(base * abs(k))
