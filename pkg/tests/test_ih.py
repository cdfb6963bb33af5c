from __future__ import annotations

import json
import warnings

import pytest

from stratsimp.errors import ParseError
from stratsimp.ih import (
    FilteredComplex,
    Perversity,
    PerversityWarning,
    closed_star,
    delete_vertex,
    intersection_chain_complex,
    intersection_homology,
    link,
    loads,
    make_cone,
    mayer_vietoris,
    simplicial_homology,
    subdivide,
    trivially_filtered,
)
from stratsimp.models import IH_BUILTINS, ih_builtin

from oracles import homology_oracle, ih_betti_oracle

MANIFOLDS = ["circle", "two_circles", "sphere", "torus", "projective_plane"]


@pytest.mark.parametrize("name", MANIFOLDS)
def test_trivial_filtration_gives_ordinary_homology(name):
    X = ih_builtin(name)
    H = intersection_homology(X, 0)
    oracle = homology_oracle(list(X.all_simplices()), X.formal_dim)
    assert [(g.rank, list(g.torsion)) for g in H.groups] == oracle


def test_known_groups():
    assert str(intersection_homology(ih_builtin("projective_plane"))[1]) == "Z/2"
    assert intersection_homology(ih_builtin("torus")).ranks() == (1, 2, 1)
    assert simplicial_homology(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")]).ranks() == (1, 1)


def cone_expectation(L_groups, d: int, p: int):
    """Cone formula for a link of dimension d − 1 whose apex has perversity p."""
    out = []
    for i in range(d + 1):
        if i < d - 1 - p:
            g = L_groups[i] if i < len(L_groups) else (0, [])
        elif i == 0:
            g = (1, [])
        else:
            g = (0, [])
        out.append(g)
    return out


@pytest.mark.parametrize("name", ["circle", "two_circles", "sphere"])
def test_cone_formula(name):
    L = ih_builtin(name)
    C = make_cone(L)
    d = C.formal_dim
    L_groups = homology_oracle(list(L.all_simplices()), L.formal_dim)
    for p in range(-1, d):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PerversityWarning)
            H = intersection_homology(C, Perversity.by_level(C, {0: p}))
        assert [(g.rank, list(g.torsion)) for g in H.groups] == cone_expectation(L_groups, d, p), p


@pytest.mark.parametrize("name", ["circle", "two_circles", "sphere"])
@pytest.mark.parametrize("p", [-1, 0, 1])
def test_cone_ranks_match_definition_oracle(name, p):
    C = make_cone(ih_builtin(name))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PerversityWarning)
        pbar = Perversity.by_level(C, {0: p})
    assert list(intersection_homology(C, pbar).ranks()) == ih_betti_oracle(C, dict(pbar.values))


@pytest.mark.parametrize("p", [-1, 0])
def test_pinched_torus_matches_definition_oracle(p):
    X = ih_builtin("pinched_torus")
    pbar = Perversity.by_level(X, {0: p})
    H = intersection_homology(X, pbar)
    assert list(H.ranks()) == ih_betti_oracle(X, dict(pbar.values))


def test_pinched_torus_groups_and_subdivision_invariance():
    X = ih_builtin("pinched_torus")
    H = intersection_homology(X, 0)
    assert H.ranks() == (1, 0, 1)
    assert subdivide(X).simplices and intersection_homology(subdivide(X), 0).ranks() == H.ranks()


def test_chain_complex_is_closed():
    for name in ("pinched_torus",):
        X = ih_builtin(name)
        for p in (-1, 0):
            assert intersection_chain_complex(X, Perversity.by_level(X, {0: p})).check_closed()


@pytest.mark.parametrize("p", [-1, 0])
def test_mayer_vietoris_on_pinched_torus(p):
    X = ih_builtin("pinched_torus")
    U, V, W = closed_star(X, 0), delete_vertex(X, 0), link(X, 0)
    mv = mayer_vietoris(X, U, V, W, {0: p})
    assert mv.ok, mv.ranks


def test_perversity_rules():
    C = make_cone(ih_builtin("circle"))
    with pytest.warns(PerversityWarning):
        Perversity.by_level(C, {0: 1})
    regular = [S.id for S in C.strata() if S.level == C.formal_dim][0]
    with pytest.raises(ValueError):
        Perversity.of(C, {regular: 1})
    with pytest.raises(ValueError):
        Perversity.of(C, {"S9.9": 0})


def test_filtration_must_meet_levels_in_initial_faces():
    with pytest.raises(ParseError):
        FilteredComplex.build(["a", "b", "c"], [("a", "b", "c")], 2, {"b": 0})
    with pytest.raises(ParseError):
        FilteredComplex.build(["a", "b"], [("a", "z")], 1)


@pytest.mark.parametrize("name", sorted(IH_BUILTINS))
def test_json_round_trip(name):
    X = ih_builtin(name)
    text = X.dumps()
    Y = loads(text)
    assert Y.dumps() == text and Y.level == X.level
    json.loads(text)


def test_cone_levels():
    C = make_cone(trivially_filtered(["a", "b"], [("a", "b")]))
    assert C.level[("v",)] == 0 and C.formal_dim == 2
    assert C.level[("v", "a")] == 2 and C.level[("a", "b")] == 2
