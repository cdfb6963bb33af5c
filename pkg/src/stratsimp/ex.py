"""The right adjoint Ex of filtered subdivision, its unit, iterates and explicit horn fillers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, NamedTuple, Sequence

from .constructions import horn, is_admissible, standard_simplex
from .errors import BudgetExceeded
from .fsset import (
    FMap,
    FSSet,
    Key,
    Simplex,
    codegeneracy,
    coface,
    dedupe,
    identity,
    key_to_json,
)
from .hom import SimplexIndex, default_budget, iter_fmaps
from .poset import PChain, Poset, nerve_simplices
from .subdivision import (
    _push_chain,
    last_vertex_color,
    sd,
    sd_normalize,
    sd_simplex,
)


class ExCell(NamedTuple):
    """A map sd(Δ^shape) -> X, listed on the NDKeys of sd(Δ^shape) in canonical order."""

    shape: PChain
    images: tuple[Simplex, ...]

    def to_json(self) -> dict[str, Any]:
        return {
            "shape": list(self.shape),
            "images": [[key_to_json(y.base), list(y.word)] for y in self.images],
        }


@lru_cache(maxsize=None)
def _sd_layout(shape: PChain, P: Poset) -> tuple[tuple, dict]:
    S = sd_simplex(shape, P)
    keys = tuple(S.keys())
    return keys, {k: i for i, k in enumerate(keys)}


@lru_cache(maxsize=None)
def _pullback_table(shape: PChain, theta: tuple[int, ...], P: Poset) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """For sd(θ): sd(Δ^{shape∘θ}) -> sd(Δ^shape): index of the target key and degeneracy per source key."""
    src = tuple(shape[t] for t in theta)
    skeys, _ = _sd_layout(src, P)
    _, tpos = _sd_layout(shape, P)
    out = []
    for c in skeys:
        pushed, eps = dedupe(_push_chain(c, identity(len(theta) - 1), theta))
        out.append((tpos[pushed], eps))
    return tuple(out)


def cell_pullback(cell: ExCell, theta: Sequence[int], P: Poset) -> ExCell:
    """cell ∘ sd(θ) for a monotone θ into the cell's shape."""
    theta = tuple(theta)
    table = _pullback_table(cell.shape, theta, P)
    imgs = []
    for idx, eps in table:
        y = cell.images[idx]
        imgs.append(Simplex(y.base, tuple(y.eta[e] for e in eps)))
    return ExCell(tuple(cell.shape[t] for t in theta), tuple(imgs))


def cell_face(cell: ExCell, i: int, P: Poset) -> ExCell:
    return cell_pullback(cell, coface(len(cell.shape) - 1, i), P)


def cell_degen(cell: ExCell, i: int, P: Poset) -> ExCell:
    return cell_pullback(cell, codegeneracy(len(cell.shape) - 1, i), P)


def cell_from_map(f: FMap, shape: PChain, P: Poset) -> ExCell:
    keys, _ = _sd_layout(tuple(shape), P)
    return ExCell(tuple(shape), tuple(f.images[k] for k in keys))


def cell_to_map(cell: ExCell, X: FSSet) -> FMap:
    S = sd_simplex(cell.shape, X.poset)
    keys, _ = _sd_layout(cell.shape, X.poset)
    return FMap(S, X, dict(zip(keys, cell.images)))


@dataclass
class ExResult:
    """Truncated Ex(X): the filtered simplicial set of non-degenerate cells plus the cell data."""

    X: FSSet
    dim_cap: int
    fsset: FSSet
    cells: dict[Key, ExCell]
    index: dict[ExCell, Key]
    total_cells: dict[PChain, int] = field(default_factory=dict)

    @property
    def P(self) -> Poset:
        return self.X.poset

    def normal_form(self, cell: ExCell) -> Simplex:
        key = self.index.get(cell)
        if key is not None:
            return Simplex(key, identity(len(cell.shape) - 1))
        shape = cell.shape
        for i in range(len(shape) - 1):
            if shape[i] == shape[i + 1]:
                d = cell_face(cell, i, self.P)
                if cell_degen(d, i, self.P) == cell:
                    y = self.normal_form(d)
                    return Simplex(y.base, tuple(y.eta[j] for j in codegeneracy(len(shape) - 2, i)))
        raise KeyError("cell is not in the truncated Ex")

    def cell_of(self, y: Simplex) -> ExCell:
        """The (possibly degenerate) cell denoted by a simplex of the Ex object."""
        base = self.cells[y.base]
        if y.eta == identity(len(base.shape) - 1):
            return base
        return cell_pullback(base, y.eta, self.P)

    def to_json(self) -> dict[str, Any]:
        return {
            "dim_cap": self.dim_cap,
            "cells": [[key_to_json(k), self.cells[k].to_json()] for k in self.fsset.keys()],
        }


def _is_degenerate(cell: ExCell, P: Poset) -> bool:
    shape = cell.shape
    for i in range(len(shape) - 1):
        if shape[i] == shape[i + 1] and cell_degen(cell_face(cell, i, P), i, P) == cell:
            return True
    return False


def ex(X: FSSet, dim_cap: int | None = None, budget: int | None = None) -> ExResult:
    P = X.poset
    cap = X.dim + 1 if dim_cap is None else dim_cap
    budget = default_budget() if budget is None else budget
    index = SimplexIndex(X, cap)
    cells: dict[Key, ExCell] = {}
    where: dict[ExCell, Key] = {}
    dims: dict[Key, int] = {}
    faces: dict[Key, tuple[Simplex, ...]] = {}
    filt: dict[Key, PChain] = {}
    totals: dict[PChain, int] = {}
    spent = 0
    res = ExResult(X, cap, FSSet(P, {}, {}, {}), cells, where, totals)
    for n in range(cap + 1):
        for shape in nerve_simplices(P, n):
            S = sd_simplex(shape, P)
            found = []
            for f in iter_fmaps(S, X, index, budget - spent):
                found.append(cell_from_map(f, shape, P))
            spent += len(found)
            if spent > budget:
                raise BudgetExceeded(f"Ex enumeration exceeded budget {budget} at shape {list(shape)}")
            totals[shape] = len(found)
            nd = [c for c in found if not _is_degenerate(c, P)]
            nd.sort(key=lambda c: json.dumps(c.to_json()["images"]))
            for idx, c in enumerate(nd):
                key = (shape, idx)
                cells[key] = c
                where[c] = key
                dims[key] = n
                filt[key] = shape
            for idx, c in enumerate(nd):
                if n > 0:
                    faces[(shape, idx)] = tuple(res.normal_form(cell_face(c, i, P)) for i in range(n + 1))
    res.fsset = FSSet(P, dims, faces, filt, {"object": "ex", "dim_cap": cap, "truncated_at": cap})
    return res


def lv_cell(X: FSSet, x: Simplex) -> ExCell:
    """x ∘ l.v as a cell of shape filt(x)."""
    shape = X.filtration(x)
    keys, _ = _sd_layout(shape, X.poset)
    imgs = tuple(X.apply(x, [last_vertex_color(v, v[1], shape) for v in c]) for c in keys)
    return ExCell(shape, imgs)


def beta(X: FSSet, E: ExResult) -> FMap:
    """The unit X -> Ex(X)."""
    return FMap(X, E.fsset, {k: E.normal_form(lv_cell(X, X.nd_simplex(k))) for k in X.keys()}, "beta")


def transpose(f: FMap, E: ExResult) -> FMap:
    """sd(A) -> X  ⟼  A -> Ex(X)."""
    A = getattr(f.dom, "sd_base", None)
    if A is None:
        raise ValueError("transpose needs a map out of an object built by sd()")
    if A.dim > E.dim_cap:
        raise ValueError(f"Ex truncated at {E.dim_cap} but A has dimension {A.dim}")
    P = A.poset
    images = {}
    for a in A.keys():
        shape = A.filt[a]
        keys, _ = _sd_layout(shape, P)
        cell = ExCell(shape, tuple(f(sd_normalize(A, a, c)) for c in keys))
        images[a] = E.normal_form(cell)
    return FMap(A, E.fsset, images, "transpose")


def transpose_back(g: FMap, E: ExResult, sdA: FSSet | None = None) -> FMap:
    """A -> Ex(X)  ⟼  sd(A) -> X."""
    A = g.dom
    assert isinstance(A, FSSet)
    sdA = sdA if sdA is not None else sd(A)
    P = A.poset
    images = {}
    for key in sdA.keys():
        a, c = key
        y = g.images[a]
        base = E.cells[y.base]
        pushed, eps = dedupe(_push_chain(c, identity(A.dims[a]), y.eta))
        _, pos = _sd_layout(base.shape, P)
        z = base.images[pos[pushed]]
        images[key] = Simplex(z.base, tuple(z.eta[e] for e in eps))
    return FMap(sdA, E.X, images, "transpose_back")


@dataclass
class ExTower:
    stages: list[FSSet]
    results: list[ExResult]
    units: list[FMap]


def ex_iter(X: FSSet, k: int, dim_cap: int | None = None, budget: int | None = None) -> ExTower:
    cap = X.dim + 1 if dim_cap is None else dim_cap
    stages, results, units = [X], [], []
    cur = X
    for i in range(k):
        try:
            E = ex(cur, cap, budget)
        except BudgetExceeded as exc:
            raise BudgetExceeded(f"{exc} (completed {i} of {k} stages)") from exc
        units.append(beta(cur, E))
        results.append(E)
        stages.append(E.fsset)
        cur = E.fsset
    return ExTower(stages, results, units)


def count_fillable_horns(Y: FSSet, phi: Sequence[str], k: int) -> tuple[int, int]:
    """(number of horn maps Λ_k^φ -> Y, number of them that extend to Δ^φ)."""
    from .hom import extends

    P = Y.poset
    L = horn(phi, k, P)
    D = standard_simplex(phi, P)
    index = SimplexIndex(Y, max(D.dim, 1))
    total = fill = 0
    for lam in iter_fmaps(L, Y, index):
        total += 1
        if extends(D, Y, dict(lam.images), index) is not None:
            fill += 1
    return total, fill


# ---------------------------------------------------------------------------
# explicit fillers for admissible horns, via sd²(Δ^φ) -> Ex(X)


def _sd2_vertex_faces(key: Key) -> list[tuple[tuple, str]]:
    """For a key (x, c) of sd(sd(Δ^φ)), the list of (σ_l as an sd(Δ^φ)-chain, q_l)."""
    x, c = key
    return [(tuple(x[i] for i in s), q) for s, q in c]


def f_sigma(key: Key, phi: PChain, k: int, P: Poset) -> tuple[int, ...]:
    """Vertex map Δ^ψ -> Δ^φ attached to a simplex of sd²(Δ^φ) by the three-case rule."""
    p = phi[k]
    n = len(phi) - 1
    near = set(range(n + 1)) - {k}
    out = []
    for sigma, q in _sd2_vertex_faces(key):
        top = set(sigma[-1][0])
        has_p = any(r == p for _, r in sigma)
        top_ok = near <= top
        if p == q and top_ok:
            out.append(k)
            continue
        if P.lt(p, q) and has_p and top_ok:
            via = p
        else:
            via = q
        face = [s for s, r in sigma if r == via][-1]
        out.append(last_vertex_color((face, via), q, phi))
    return tuple(out)


@dataclass
class HornFill:
    """A filler of an admissible horn in Ex³(X), stored through its adjoint sd²(Δ^φ) -> Ex(X)."""

    phi: PChain
    k: int
    sd2: FSSet
    h: dict[Key, ExCell]  # sd²(Δ^φ) key -> cell sd(Δ^ψ) -> sd(Δ^φ), expected inside sd(Λ)
    cells: dict[Key, ExCell]  # sd²(Δ^φ) key -> cell of Ex(X)
    fvert: dict[Key, tuple[int, ...]]


def _span_cell(fs: Sequence[int], psi: PChain, P: Poset) -> ExCell:
    """The cell sd(Δ^ψ) -> sd(Δ^φ) with (μ, s) ↦ (span f(μ), s)."""
    keys, _ = _sd_layout(psi, P)
    imgs = []
    for c in keys:
        pushed, eps = dedupe([(tuple(sorted({fs[e] for e in s})), q) for s, q in c])
        imgs.append(Simplex(pushed, eps))
    return ExCell(psi, tuple(imgs))


def _compose_cell(lam_sd: FMap, cell: ExCell) -> ExCell:
    return ExCell(cell.shape, tuple(lam_sd(y) for y in cell.images))


def horn_adjoint(lam: FMap, E: ExResult, phi: Sequence[str]) -> FMap:
    """Transpose λ: Λ -> Ex(X) to sd(Λ) -> X, with sd(Λ) realised inside sd(Δ^φ)."""
    from .subdivision import flatten_key, sd_sub

    back = transpose_back(lam, E)
    target = sd_sub(lam.dom, phi)  # type: ignore[arg-type]
    return FMap(target, E.X, {flatten_key(kk): v for kk, v in back.images.items()}, "lambda'")


def ex3_horn_fill(X: FSSet, lam: FMap, phi: Sequence[str], k: int, E: ExResult | None = None) -> HornFill:
    """Fill an admissible horn λ: Λ_k^φ -> Ex(X) after two more applications of Ex.

    The fill Δ^φ -> Ex³(X) is returned through its adjoint sd²(Δ^φ) -> Ex(X),
    one cell of Ex(X) per non-degenerate simplex of sd²(Δ^φ).  With ``E`` the
    map ``lam`` is Λ -> E; without it ``lam`` is already the adjoint
    sd(Λ) -> X on chains of sd(Δ^φ).
    """
    phi = tuple(phi)
    P = X.poset
    if not is_admissible(phi, k):
        raise ValueError(f"horn ({list(phi)}, {k}) is not admissible")
    lam_sd = horn_adjoint(lam, E, phi) if E is not None else lam
    S2 = sd(sd_simplex(phi, P))
    h: dict[Key, ExCell] = {}
    cells: dict[Key, ExCell] = {}
    fv: dict[Key, tuple[int, ...]] = {}
    for key in S2.keys():
        fs = f_sigma(key, phi, k, P)
        fv[key] = fs
        hc = _span_cell(fs, S2.filt[key], P)
        h[key] = hc
        if all(y.base in lam_sd.images for y in hc.images):
            cells[key] = _compose_cell(lam_sd, hc)
    return HornFill(phi, k, S2, h, cells, fv)


@dataclass
class FillCheck:
    lands_in_horn: bool
    simplicial: bool
    restriction: bool
    vertex_formula: bool
    problems: list[str]

    @property
    def ok(self) -> bool:
        return self.lands_in_horn and self.simplicial and self.restriction and self.vertex_formula


def _colors(x: tuple) -> tuple[str, ...]:
    return tuple(q for _, q in x)


def check_fill(fill: HornFill, X: FSSet, lam_sd: FMap) -> FillCheck:
    """h lands in sd(Λ); σ ↦ g(σ) commutes with faces; on sd²(Λ), g = λ∘l.v² and f_σ = l.v²."""
    P = X.poset
    phi, k = fill.phi, fill.k
    L = horn(phi, k, P)
    S2 = fill.sd2
    problems: list[str] = []
    lands = len(fill.cells) == len(S2) and all(
        y.base[-1][0] in L.dims for hc in fill.h.values() for y in hc.images
    )
    if not lands:
        problems.append("some h(σ) leaves sd(Λ)")
        return FillCheck(False, False, False, False, problems)
    simplicial = True
    for key in S2.keys():
        for i, f in enumerate(S2.faces.get(key, ())):
            lhs = cell_face(fill.cells[key], i, P)
            base = fill.cells[f.base]
            rhs = base if f.eta == identity(len(base.shape) - 1) else cell_pullback(base, f.eta, P)
            if lhs != rhs:
                simplicial = False
                problems.append(f"face {i} of {key!r} incompatible")
    restriction = vertex = True
    for key in S2.keys():
        x, c = key
        if x[-1][0] not in L.dims:
            continue
        cols = _colors(x)
        lv2 = tuple(last_vertex_color(x[last_vertex_color(v, v[1], cols)], v[1], phi) for v in c)
        if lv2 != fill.fvert[key]:
            vertex = False
            problems.append(f"f_σ differs from l.v² at {key!r}")
        expected = _compose_cell(lam_sd, _span_cell(lv2, S2.filt[key], P))
        if expected != fill.cells[key]:
            restriction = False
            problems.append(f"restriction differs at {key!r}")
    return FillCheck(lands, simplicial, restriction, vertex, problems)
