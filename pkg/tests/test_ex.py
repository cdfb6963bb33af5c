from __future__ import annotations

import pytest

from stratsimp.constructions import horn, standard_simplex
from stratsimp.errors import BudgetExceeded
from stratsimp.ex import (
    beta,
    cell_degen,
    cell_face,
    check_fill,
    count_fillable_horns,
    ex,
    ex3_horn_fill,
    ex_iter,
    horn_adjoint,
)
from stratsimp.fsset import compose, inclusion, is_subobject, validate
from stratsimp.poset import Poset

from checks import adjunction_pairs, check_adjunction, check_beta_natural
from oracles import classical_ex_interval

P2 = Poset.chain("p0", "p1")
ONE = Poset.chain("p")


def test_unfiltered_interval_matches_classical_ex():
    E = ex(standard_simplex(("p", "p"), ONE), dim_cap=2)
    for n in range(3):
        assert E.total_cells[("p",) * (n + 1)] == classical_ex_interval(n)
    assert validate(E.fsset).ok


def test_ex_is_valid_and_cells_satisfy_identities():
    E = ex(standard_simplex(("p0", "p0", "p1"), P2), dim_cap=2)
    assert validate(E.fsset).ok
    for key, cell in E.cells.items():
        n = len(cell.shape) - 1
        for i in range(n):
            if cell.shape[i] == cell.shape[i + 1]:
                assert cell_face(cell_degen(cell, i, P2), i, P2) == cell


@pytest.mark.parametrize("name,A,X", adjunction_pairs(), ids=[p[0] for p in adjunction_pairs()])
def test_adjunction(name, A, X):
    assert check_adjunction(A, X) == []


SUBOBJECT_PAIRS = [p for p in adjunction_pairs() if is_subobject(p[1], p[2])]


@pytest.mark.parametrize("name,A,X", SUBOBJECT_PAIRS, ids=[p[0] for p in SUBOBJECT_PAIRS])
def test_beta_is_natural(name, A, X):
    assert check_beta_natural(A, X) == []


def test_ex_iteration():
    T = ex_iter(standard_simplex(("p0", "p1"), P2), 2, dim_cap=1)
    assert len(T.stages) == 3 and len(T.units) == 2
    assert all(u.is_injective() for u in T.units)


def test_ex_budget():
    with pytest.raises(BudgetExceeded):
        ex(standard_simplex(("p0", "p0", "p1"), P2), dim_cap=2, budget=10)


@pytest.mark.parametrize("phi,k", [(("p0", "p0", "p1"), 1), (("p0", "p0", "p1"), 0), (("p0", "p1", "p1"), 1), (("p", "p"), 0)])
def test_admissible_horn_fill_through_ex_cubed(phi, k):
    P = P2 if "p" not in phi else ONE
    X = standard_simplex(phi, P)
    E = ex(X, len(phi) - 1)
    L = horn(phi, k, P)
    lam = compose(beta(X, E), inclusion(L, X))
    fill = ex3_horn_fill(X, lam, phi, k, E)
    res = check_fill(fill, X, horn_adjoint(lam, E, phi))
    assert res.ok, res.problems


def test_fill_rejects_non_admissible():
    X = standard_simplex(("p0", "p1"), P2)
    E = ex(X, 1)
    L = horn(("p0", "p1"), 0, P2)
    with pytest.raises(ValueError):
        ex3_horn_fill(X, compose(beta(X, E), inclusion(L, X)), ("p0", "p1"), 0, E)


def test_fillable_horn_count_in_a_simplex():
    total, fill = count_fillable_horns(standard_simplex(("p0", "p0", "p1"), P2), ("p0", "p0", "p1"), 1)
    assert total >= 1 and fill == total
