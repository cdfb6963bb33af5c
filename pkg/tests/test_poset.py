from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stratsimp.errors import ParseError
from stratsimp.poset import (
    Poset,
    all_posets_up_to,
    cone_poset,
    nerve_simplices,
    nondegenerate_chains,
    parse_poset,
    rp_category,
)

from oracles import nondecreasing_chains


def test_nerve_low_dimensions(P2):
    assert set(nerve_simplices(P2, 0)) == {("p0",), ("p1",)}
    assert set(nerve_simplices(P2, 1)) == {("p0", "p0"), ("p0", "p1"), ("p1", "p1")}
    assert nondegenerate_chains(P2) == [("p0",), ("p1",), ("p0", "p1")]


@pytest.mark.parametrize("P", list(all_posets_up_to(3)), ids=lambda P: P.to_text().replace("\n", ";"))
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_nerve_matches_brute_force(P, n):
    assert set(nerve_simplices(P, n)) == nondecreasing_chains(P, n)
    assert len(nerve_simplices(P, n)) == len(set(nerve_simplices(P, n)))


def test_rp_category_examples(P2, P3):
    R = rp_category(P2)
    assert len(R.objects) == 3
    assert sorted(R.non_identity()) == [(("p0",), ("p0", "p1")), (("p1",), ("p0", "p1"))]
    star = rp_category(Poset.chain("*"))
    assert len(star.objects) == 1 and star.non_identity() == []
    assert len(rp_category(P3).objects) == 7


@pytest.mark.parametrize("P", list(all_posets_up_to(3)), ids=lambda P: P.to_text().replace("\n", ";"))
def test_rp_objects_closed_under_subchains(P):
    objs = set(rp_category(P).objects)
    for o in objs:
        for r in range(1, len(o)):
            for sub in itertools.combinations(o, r):
                assert sub in objs


def test_cone_poset():
    c = cone_poset(Poset.chain("*"))
    assert c.is_chain(c.linear_extension()) and len(c.elements) == 2
    assert len(cone_poset(Poset((), frozenset())).elements) == 1
    c3 = cone_poset(Poset.chain("p0", "p1"))
    assert c3.lt("-inf", "p0") and c3.lt("-inf", "p1") and c3.lt("p0", "p1")
    with pytest.raises(ValueError):
        cone_poset(c3)


@pytest.mark.parametrize("P", list(all_posets_up_to(3)), ids=lambda P: P.to_text().replace("\n", ";"))
def test_cone_has_unique_minimum(P):
    c = cone_poset(P)
    minimal = [a for a in c.elements if not any(c.lt(b, a) for b in c.elements)]
    assert minimal == ["-inf"]
    for a, b in itertools.product(P.elements, repeat=2):
        assert c.leq(a, b) == P.leq(a, b)


def test_text_format_round_trip():
    P = parse_poset("a < b\nb < c\n# comment\nd\n")
    assert P.lt("a", "c") and not P.leq("d", "a")
    assert parse_poset(P.to_text()) == P
    assert Poset.from_json(P.to_json()) == P


@pytest.mark.parametrize("text", ["a < ", "a b < c", "a < b\nb < a"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_poset(text)


@settings(max_examples=60, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=8))
def test_closure_is_a_partial_order(pairs):
    covers = [(f"x{a}", f"x{b}") for a, b in pairs if a < b]
    P = Poset.from_covers([f"x{i}" for i in range(5)], covers)
    E = P.elements
    for a in E:
        assert P.leq(a, a)
        for b in E:
            if P.leq(a, b) and P.leq(b, a):
                assert a == b
            for c in E:
                if P.leq(a, b) and P.leq(b, c):
                    assert P.leq(a, c)
