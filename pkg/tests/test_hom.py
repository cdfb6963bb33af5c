from __future__ import annotations

import itertools
from math import comb

import pytest

from stratsimp.constructions import boundary, horn, standard_simplex, standard_sset
from stratsimp.errors import BudgetExceeded
from stratsimp.fsset import validate_map
from stratsimp.hom import count_fmaps, enum_fmaps, extends, surjections
from stratsimp.poset import Poset, nerve_simplices

P3 = Poset.chain("p0", "p1", "p2")


@pytest.mark.parametrize("n,m", [(0, 0), (2, 1), (3, 1), (4, 2), (3, 3)])
def test_surjection_count(n, m):
    s = list(surjections(n, m))
    assert len(s) == comb(n, m) and len(set(s)) == len(s)
    assert all(sorted(set(t)) == list(range(m + 1)) and list(t) == sorted(t) for t in s)


@pytest.mark.parametrize("n,m", [(0, 2), (1, 1), (2, 2), (2, 3)])
def test_maps_between_simplices(n, m):
    assert count_fmaps(standard_sset(n), standard_sset(m)) == comb(n + m + 1, n + 1)


def _filtered_oracle(phi, psi):
    m = len(psi) - 1
    return sum(
        1
        for t in itertools.product(range(m + 1), repeat=len(phi))
        if list(t) == sorted(t) and all(psi[t[i]] == phi[i] for i in range(len(phi)))
    )


CHAINS = [c for n in range(3) for c in nerve_simplices(P3, n)]


@pytest.mark.parametrize("psi", [c for c in CHAINS if len(c) == 3], ids="-".join)
def test_filtered_maps_between_simplices(psi):
    for phi in CHAINS:
        maps = enum_fmaps(standard_simplex(phi, P3), standard_simplex(psi, P3))
        assert len(maps) == _filtered_oracle(phi, psi)
        assert all(validate_map(f).ok for f in maps)


def test_extension_problem():
    phi = ("p0", "p0", "p1")
    L, D = horn(phi, 1), standard_simplex(phi)
    partial = {k: D.nd_simplex(k) for k in L.keys()}
    f = extends(D, D, partial)
    assert f is not None and validate_map(f).ok
    B = boundary(("p", "p", "p"))
    assert extends(standard_simplex(("p", "p", "p")), B, {k: B.nd_simplex(k) for k in B.keys()}) is None


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        count_fmaps(standard_sset(2), standard_sset(4), budget=3)
