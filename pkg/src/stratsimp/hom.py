"""Enumeration of filtered simplicial maps between finite filtered simplicial sets."""

from __future__ import annotations

import itertools
import os
from typing import Iterator

from .errors import BudgetExceeded
from .fsset import FMap, FSSet, Key, Simplex, SSet

BUDGET_ENV = "STRATSIMP_BUDGET"
DEFAULT_BUDGET = 200_000


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


def surjections(n: int, m: int) -> Iterator[tuple[int, ...]]:
    """Order-preserving surjections [n] -> [m]."""
    for cuts in itertools.combinations(range(1, n + 1), m):
        eta, level = [], 0
        cut = set(cuts)
        for i in range(n + 1):
            if i in cut:
                level += 1
            eta.append(level)
        yield tuple(eta)


class SimplexIndex:
    """All simplices of X up to a dimension, looked up by their tuple of faces."""

    def __init__(self, X: SSet, max_dim: int) -> None:
        self.X = X
        self.max_dim = max_dim
        self.vertices_by_color: dict[object, list[Simplex]] = {}
        for v in X.nd[0] if X.nd else ():
            color = X.filt[v][0] if isinstance(X, FSSet) else None
            self.vertices_by_color.setdefault(color, []).append(X.nd_simplex(v))
        self.by_faces: list[dict[tuple[Simplex, ...], list[Simplex]]] = [dict() for _ in range(max_dim + 1)]
        for n in range(1, max_dim + 1):
            table = self.by_faces[n]
            for m in range(min(n, X.dim) + 1):
                for b in X.nd[m]:
                    for eta in surjections(n, m):
                        y = Simplex(b, eta)
                        fs = tuple(X.d(y, i) for i in range(n + 1))
                        table.setdefault(fs, []).append(y)

    def candidates(self, faces: tuple[Simplex, ...]) -> list[Simplex]:
        return self.by_faces[len(faces) - 1].get(faces, [])


def iter_fmaps(A: SSet, X: SSet, index: SimplexIndex | None = None, budget: int | None = None) -> Iterator[FMap]:
    """Backtracking over A's NDKeys (increasing dimension, canonical order)."""
    if A.dim > X.dim + 0 and not A.dims:
        return
    index = index if index is not None and index.max_dim >= A.dim else SimplexIndex(X, max(A.dim, 0))
    budget = default_budget() if budget is None else budget
    order = [k for k in A.keys()]
    images: dict[Key, Simplex] = {}
    count = 0
    filtered = isinstance(A, FSSet) and isinstance(X, FSSet)

    def options(a: Key) -> list[Simplex]:
        n = A.dims[a]
        if n == 0:
            color = A.filt[a][0] if filtered else None
            return index.vertices_by_color.get(color, [])
        fs = []
        for f in A.faces[a]:
            y = images[f.base]
            fs.append(Simplex(y.base, tuple(y.eta[e] for e in f.eta)))
        return index.candidates(tuple(fs))

    def go(pos: int) -> Iterator[FMap]:
        nonlocal count
        if pos == len(order):
            count += 1
            if count > budget:
                raise BudgetExceeded(f"more than {budget} maps enumerated")
            yield FMap(A, X, dict(images))
            return
        a = order[pos]
        for y in options(a):
            images[a] = y
            yield from go(pos + 1)
        images.pop(a, None)

    yield from go(0)


def enum_fmaps(A: SSet, X: SSet, index: SimplexIndex | None = None, budget: int | None = None) -> list[FMap]:
    return list(iter_fmaps(A, X, index, budget))


def count_fmaps(A: SSet, X: SSet, index: SimplexIndex | None = None, budget: int | None = None) -> int:
    return sum(1 for _ in iter_fmaps(A, X, index, budget))


def extends(A: SSet, X: SSet, partial: dict[Key, Simplex], index: SimplexIndex | None = None) -> FMap | None:
    """Some map A -> X agreeing with ``partial`` (keys of a sub-object), or None."""
    index = index if index is not None and index.max_dim >= A.dim else SimplexIndex(X, max(A.dim, 0))
    order = [k for k in A.keys() if k not in partial]
    images = dict(partial)
    filtered = isinstance(A, FSSet) and isinstance(X, FSSet)

    def go(pos: int) -> bool:
        if pos == len(order):
            return True
        a = order[pos]
        n = A.dims[a]
        if n == 0:
            opts = index.vertices_by_color.get(A.filt[a][0] if filtered else None, [])
        else:
            fs = []
            for f in A.faces[a]:
                y = images[f.base]
                fs.append(Simplex(y.base, tuple(y.eta[e] for e in f.eta)))
            opts = index.candidates(tuple(fs))
        for y in opts:
            images[a] = y
            if go(pos + 1):
                return True
        images.pop(a, None)
        return False

    return FMap(A, X, images) if go(0) else None
