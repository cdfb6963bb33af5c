from __future__ import annotations

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors

from stratsimp.intlinalg import AbelianGroup, cokernel, column_echelon, matmul, rank, smith_invariants, transpose

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_smith_invariants_match_sympy(m):
    ours = smith_invariants(m)
    theirs = sorted(abs(int(x)) for x in invariant_factors(sympy.Matrix(m), domain=sympy.ZZ) if x != 0)
    assert sorted(ours) == theirs
    assert all(b % a == 0 for a, b in zip(ours, ours[1:]))
    assert rank(m) == sympy.Matrix(m).rank()


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_column_echelon_is_unimodular_and_exact(m):
    n = len(m[0])
    E = column_echelon(m, n)
    assert matmul(m, E.T) == E.E
    assert matmul(E.T, E.Tinv) == [[int(i == j) for j in range(n)] for i in range(n)]
    assert E.rank == sympy.Matrix(m).rank()
    for v in E.kernel_basis():
        assert all(sum(r[j] * v[j] for j in range(n)) == 0 for r in m)
        coords = E.kernel_coords(v)
        assert sum(abs(c) for c in coords) == 1


def test_cokernel_examples():
    assert cokernel([[2]], 1) == AbelianGroup(0, (2,))
    assert cokernel([], 2) == AbelianGroup(2, ())
    assert cokernel([[2, 0], [0, 3]], 2).order == 6
    assert str(cokernel([[0, 2]], 2)) == "Z + Z/2"
    assert str(AbelianGroup(0, ())) == "0"
    assert transpose([[1, 2]]) == [[1], [2]]
