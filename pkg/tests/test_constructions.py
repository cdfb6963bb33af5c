from __future__ import annotations

import pytest

from stratsimp.constructions import (
    free,
    horn,
    horn_retraction,
    is_admissible,
    is_admissible_via_degeneracy,
    fibered_product,
    nerve_fsset,
    outer_skeleton,
    standard_simplex,
    standard_sset,
    stratum,
)
from stratsimp.fsset import compose, inclusion, validate, validate_map
from stratsimp.poset import Poset, all_posets_up_to, nerve_simplices

from checks import check_horn_witness


def test_admissibility_examples():
    assert is_admissible(("p0", "p0", "p1"), 0)
    assert is_admissible(("p0", "p0", "p1"), 1)
    assert not is_admissible(("p0", "p0", "p1"), 2)
    assert not is_admissible(("p0", "p1"), 0)
    with pytest.raises(ValueError):
        is_admissible(("p0",), 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_admissibility_definitions_agree(P3, n):
    for phi in nerve_simplices(P3, n - 1):
        for k in range(len(phi)):
            if len(phi) > 1:
                assert is_admissible(phi, k) == is_admissible_via_degeneracy(phi, k)


WITNESS_CASES = [(("p0", "p0", "p1"), 1), (("p0", "p0", "p1"), 0), (("p0", "p1", "p1"), 2), (("p", "p"), 0), (("p", "p"), 1)]


@pytest.mark.parametrize("phi,k", WITNESS_CASES)
def test_horn_retraction_witness(phi, k):
    assert check_horn_witness(phi, k) == []
    r, _ = horn_retraction(phi, k)
    if len(phi) == 2:
        # in dimension one r is a strict retraction
        assert all(r.images[key] == r.cod.nd_simplex(key) for key in r.cod.keys())


def test_no_strict_retraction_in_dimension_two():
    # every vertex lies in the horn, so a vertex-identity retraction would need the top simplex
    phi = ("p0", "p0", "p1")
    from stratsimp.hom import enum_fmaps
    L, D = horn(phi, 1), standard_simplex(phi)
    for r in enum_fmaps(D, L):
        assert any(r.images[key] != L.nd_simplex(key) for key in L.keys())


def test_horn_retraction_rejects_non_admissible():
    with pytest.raises(ValueError):
        horn_retraction(("p0", "p1"), 0)


def test_outer_skeleton():
    S = outer_skeleton(("p0", "p1", "p2"))
    assert S.counts() == (3, 2)
    with pytest.raises(ValueError):
        outer_skeleton(("p0", "p0"))


@pytest.mark.parametrize("P", list(all_posets_up_to(3)), ids=lambda P: P.to_text().replace("\n", ";"))
def test_nerve_fsset_counts(P):
    N = nerve_fsset(P, 3)
    assert validate(N).ok
    for n in range(4):
        expected = len(nerve_simplices(P, n, nondegenerate=True))
        assert (N.counts()[n] if n < len(N.counts()) else 0) == expected


def test_free_and_stratum(P2):
    F = free(standard_sset(1), P2)
    assert validate(F).ok
    S = stratum(standard_simplex(("p0", "p0", "p1"), P2), "p0")
    assert S.counts() == (2, 1)
    with pytest.raises(ValueError):
        stratum(S, "zz")


def test_fibered_product_over_nerve(P2):
    X = standard_simplex(("p0", "p1"), P2)
    Y = fibered_product(X, X)
    assert validate(Y).ok
    # Δ^φ ×_N(P) Δ^φ ≅ Δ^φ for strictly increasing φ
    assert Y.counts() == X.counts()
