"""Intersection homology of filtered ordered simplicial complexes.

A simplex σ is filtered by the least k with σ ∈ X^k. Every simplex must meet
each X^k in an initial face. Chains are integral; homology is reported as
rank plus torsion coefficients.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .errors import ParseError
from .intlinalg import AbelianGroup, ColumnEchelon, column_echelon, matmul, smith_invariants

Vertex = Any
Simp = tuple


class PerversityWarning(UserWarning):
    pass


@dataclass
class Stratum:
    id: str
    level: int  # formal dimension
    codim: int
    simplices: tuple[Simp, ...]  # open simplices of exactly this level

    def to_json(self) -> dict[str, Any]:
        return {"id": self.id, "dim": self.level, "codim": self.codim, "size": len(self.simplices)}


@dataclass
class FilteredComplex:
    vertices: tuple[Vertex, ...]
    simplices: tuple[tuple[Simp, ...], ...]  # by dimension, canonical order
    level: dict[Simp, int]
    formal_dim: int
    _pos: dict[Vertex, int] = field(default_factory=dict, repr=False)
    _strata: list[Stratum] | None = field(default=None, repr=False)
    _stratum_of: dict[Simp, str] = field(default_factory=dict, repr=False)
    _by_id: dict[str, Stratum] = field(default_factory=dict, repr=False)

    # construction -----------------------------------------------------------------

    @classmethod
    def build(
        cls,
        vertices: Sequence[Vertex],
        maximal: Iterable[Sequence[Vertex]],
        formal_dim: int,
        vertex_levels: Mapping[Vertex, int] | None = None,
        simplex_levels: Mapping[Simp, int] | None = None,
    ) -> FilteredComplex:
        """Close ``maximal`` under faces; simplex level = max(own override, facet levels)."""
        verts = tuple(vertices)
        pos = {v: i for i, v in enumerate(verts)}
        if len(pos) != len(verts):
            raise ParseError("duplicate vertex id")
        found: set[Simp] = {(v,) for v in verts}
        for m in maximal:
            try:
                m = tuple(sorted(m, key=lambda v: pos[v]))
            except KeyError as exc:
                raise ParseError(f"unknown vertex {exc.args[0]!r}") from None
            if len(set(m)) != len(m):
                raise ParseError(f"repeated vertex in {list(m)}")
            for r in range(1, len(m) + 1):
                found.update(itertools.combinations(m, r))
        vl = {} if vertex_levels is None else dict(vertex_levels)
        sl = {} if simplex_levels is None else {tuple(sorted(s, key=lambda v: pos[v])): k for s, k in simplex_levels.items()}
        for s in sl:
            if s not in found:
                raise ParseError(f"level given for a simplex not in the complex: {list(s)}")
        top = max((len(s) for s in found), default=1) - 1
        by_dim = tuple(
            tuple(sorted((s for s in found if len(s) == n + 1), key=lambda s: tuple(pos[v] for v in s)))
            for n in range(top + 1)
        )
        level: dict[Simp, int] = {}
        for layer in by_dim:
            for s in layer:
                if len(s) == 1:
                    k = sl.get(s, vl.get(s[0], formal_dim))
                else:
                    k = max([sl.get(s, -1)] + [level[s[:i] + s[i + 1 :]] for i in range(len(s))])
                level[s] = k
        out = cls(verts, by_dim, level, formal_dim, pos)
        out.check()
        return out

    # basic queries ------------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def all_simplices(self) -> Iterable[Simp]:
        for layer in self.simplices:
            yield from layer

    def check(self) -> None:
        """Levels form a filtration by subcomplexes and every simplex meets X^k in an initial face."""
        d = self.formal_dim
        for s, k in self.level.items():
            if not 0 <= k <= d:
                raise ParseError(f"level {k} of {list(s)} outside 0..{d}")
        if self.dim > d:
            raise ParseError(f"complex of dimension {self.dim} exceeds formal dimension {d}")
        for s in self.all_simplices():
            for k in range(d + 1):
                low = [i for i, v in enumerate(s) if self.level[(v,)] <= k]
                if low != list(range(len(low))):
                    raise ParseError(f"simplex {list(s)} meets level {k} outside an initial face")
                if low and self.level[s[: len(low)]] > k:
                    raise ParseError(f"simplex {list(s)}: initial face {list(s[:len(low)])} not in level {k}")

    def n_k(self, s: Simp, k: int) -> int:
        """dim of σ ∩ X^k (−1 when empty)."""
        return sum(1 for v in s if self.level[(v,)] <= k) - 1

    # strata -------------------------------------------------------------------------

    def strata(self) -> list[Stratum]:
        if self._strata is not None:
            return self._strata
        parent: dict[Simp, Simp] = {}

        def find(a: Simp) -> Simp:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for s in self.all_simplices():
            parent[s] = s
        for s in self.all_simplices():
            if len(s) > 1:
                for i in range(len(s)):
                    f = s[:i] + s[i + 1 :]
                    if self.level[f] == self.level[s]:
                        ra, rb = find(f), find(s)
                        if ra != rb:
                            parent[rb] = ra
        groups: dict[tuple[int, Simp], list[Simp]] = {}
        for s in self.all_simplices():
            groups.setdefault((self.level[s], find(s)), []).append(s)
        order = sorted(groups, key=lambda g: (g[0], self._sort(min(groups[g], key=self._sort))))
        out: list[Stratum] = []
        counter: dict[int, int] = {}
        for lev, root in order:
            i = counter.get(lev, 0)
            counter[lev] = i + 1
            sid = f"S{lev}.{i}"
            members = tuple(sorted(groups[(lev, root)], key=self._sort))
            out.append(Stratum(sid, lev, self.formal_dim - lev, members))
            self._by_id[sid] = out[-1]
            for s in members:
                self._stratum_of[s] = sid
        self._strata = out
        return out

    def _sort(self, s: Simp) -> tuple:
        return (len(s), tuple(self._pos[v] for v in s))

    def stratum_of(self, s: Simp) -> Stratum:
        self.strata()
        return self._by_id[self._stratum_of[s]]

    def singular_strata(self) -> list[Stratum]:
        return [S for S in self.strata() if S.level < self.formal_dim]

    # serialization ------------------------------------------------------------------

    def to_json(self) -> dict[str, Any]:
        maximal = []
        all_s = set(self.all_simplices())
        for s in self.all_simplices():
            if not any(set(s) < set(t) for t in all_s if len(t) == len(s) + 1):
                maximal.append(list(s))
        implied = self._implied_levels()
        overrides = [[list(s), k] for s, k in ((s, self.level[s]) for s in self.all_simplices()) if len(s) > 1 and k != implied[s]]
        return {
            "vertices": list(self.vertices),
            "maximal": maximal,
            "formal_dim": self.formal_dim,
            "vertex_levels": {str(v): self.level[(v,)] for v in self.vertices} if all(isinstance(v, str) for v in self.vertices) else [[v, self.level[(v,)]] for v in self.vertices],
            "simplex_levels": overrides,
        }

    def _implied_levels(self) -> dict[Simp, int]:
        out: dict[Simp, int] = {}
        for layer in self.simplices:
            for s in layer:
                out[s] = self.level[s] if len(s) == 1 else max(out[s[:i] + s[i + 1 :]] for i in range(len(s)))
        return out

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> FilteredComplex:
        try:
            verts = [_hashable(v) for v in data["vertices"]]
            vl_raw = data.get("vertex_levels", {})
            if isinstance(vl_raw, dict):
                lookup = {str(v): v for v in verts}
                vl = {lookup[k]: int(x) for k, x in vl_raw.items()}
            else:
                vl = {_hashable(v): int(x) for v, x in vl_raw}
            sl = {tuple(_hashable(v) for v in s): int(k) for s, k in data.get("simplex_levels", [])}
            return cls.build(
                verts, [[_hashable(v) for v in m] for m in data["maximal"]], int(data["formal_dim"]), vl, sl
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad filtered complex: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def _hashable(v: Any) -> Any:
    return tuple(v) if isinstance(v, list) else v


def loads(text: str) -> FilteredComplex:
    try:
        return FilteredComplex.from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# constructions


def trivially_filtered(vertices: Sequence[Vertex], maximal: Iterable[Sequence[Vertex]], formal_dim: int | None = None) -> FilteredComplex:
    maximal = [tuple(m) for m in maximal]
    d = max(len(m) for m in maximal) - 1 if formal_dim is None else formal_dim
    return FilteredComplex.build(vertices, maximal, d)


def make_cone(X: FilteredComplex, apex: Vertex = "v") -> FilteredComplex:
    """Cone with the apex ordered first: c(X)^0 = apex, c(X)^{k+1} = c(X^k)."""
    if apex in X._pos:
        raise ValueError(f"apex id {apex!r} already used")
    levels = {(apex,): 0}
    maximal = [(apex,)]
    for s in X.all_simplices():
        levels[s] = X.level[s] + 1
        levels[(apex, *s)] = X.level[s] + 1
        maximal.append((apex, *s))
    vl = {apex: 0} | {v: X.level[(v,)] + 1 for v in X.vertices}
    return FilteredComplex.build((apex, *X.vertices), maximal, X.formal_dim + 1, vl, levels)


def subdivide(X: FilteredComplex) -> FilteredComplex:
    """Barycentric subdivision; the barycentre of σ inherits σ's level.

    Barycentres are ordered by dimension, which keeps the initial-face
    discipline since faces never have larger level than their cofaces.
    """
    order = sorted(X.all_simplices(), key=X._sort)
    maximal = []
    facets = {t[:i] + t[i + 1 :] for t in order if len(t) > 1 for i in range(len(t))}
    tops = [s for s in order if s not in facets]
    for top in tops:
        for perm in itertools.permutations(top):
            chain = tuple(tuple(sorted(perm[: i + 1], key=lambda v: X._pos[v])) for i in range(len(perm)))
            maximal.append(chain)
    vl = {s: X.level[s] for s in order}
    return FilteredComplex.build(order, maximal, X.formal_dim, vl)


def subcomplex(X: FilteredComplex, keep: Iterable[Simp]) -> FilteredComplex:
    """Closed subcomplex generated by ``keep`` with the induced filtration."""
    gen = set(keep)
    closed: set[Simp] = set()
    for s in gen:
        for r in range(1, len(s) + 1):
            closed.update(itertools.combinations(s, r))
    verts = [v for v in X.vertices if (v,) in closed]
    levels = {s: X.level[s] for s in closed}
    return FilteredComplex.build(verts, sorted(closed, key=X._sort), X.formal_dim, None, levels)


def closed_star(X: FilteredComplex, v: Vertex) -> FilteredComplex:
    return subcomplex(X, [s for s in X.all_simplices() if v in s])


def link(X: FilteredComplex, v: Vertex) -> FilteredComplex:
    return subcomplex(X, [tuple(w for w in s if w != v) for s in X.all_simplices() if v in s and len(s) > 1])


def delete_vertex(X: FilteredComplex, v: Vertex) -> FilteredComplex:
    return subcomplex(X, [s for s in X.all_simplices() if v not in s])


# ---------------------------------------------------------------------------
# perversities and allowability

NEG_INF = float("-inf")


@dataclass(frozen=True)
class Perversity:
    values: tuple[tuple[str, int], ...]

    @classmethod
    def of(cls, X: FilteredComplex, values: Mapping[str, int] | int = 0) -> Perversity:
        """Values on singular strata (by stratum id or a constant); regular strata get 0."""
        out = {}
        sing = {S.id for S in X.singular_strata()}
        for S in X.strata():
            if S.id in sing:
                out[S.id] = values if isinstance(values, int) else int(values.get(S.id, 0))
            else:
                if not isinstance(values, int) and values.get(S.id, 0) != 0:
                    raise ValueError(f"perversity must vanish on the regular stratum {S.id}")
                out[S.id] = 0
        if not isinstance(values, int):
            unknown = set(values) - set(out)
            if unknown:
                raise ValueError(f"unknown strata {sorted(unknown)}")
        for S in X.singular_strata():
            if out[S.id] > S.codim - 2:
                warnings.warn(
                    f"perversity {out[S.id]} on {S.id} exceeds codim - 2 = {S.codim - 2}",
                    PerversityWarning,
                    stacklevel=2,
                )
        return cls(tuple(sorted(out.items())))

    @classmethod
    def by_level(cls, X: FilteredComplex, fn: Mapping[int, int]) -> Perversity:
        return cls.of(X, {S.id: fn.get(S.level, 0) for S in X.singular_strata()})

    def __getitem__(self, sid: str) -> int:
        return dict(self.values)[sid]


def perverse_degree(X: FilteredComplex, s: Simp, S: Stratum) -> float:
    """‖σ‖_S: n_k if σ meets the stratum S of level k, else −∞."""
    k = S.level
    nk = X.n_k(s, k)
    if nk < 0 or nk == X.n_k(s, k - 1):
        return NEG_INF
    face = s[: nk + 1]
    return nk if X.stratum_of(face).id == S.id else NEG_INF


def is_allowable(X: FilteredComplex, s: Simp, pbar: Perversity) -> bool:
    n = len(s) - 1
    pv = dict(pbar.values)
    for S in X.singular_strata():
        deg = perverse_degree(X, s, S)
        if deg > n - S.codim + pv[S.id]:
            return False
    return True


# ---------------------------------------------------------------------------
# chain complexes


def boundary_matrix(rows: Sequence[Simp], cols: Sequence[Simp], partial: bool = False) -> list[list[int]]:
    """Simplicial boundary; with ``partial`` faces outside ``rows`` are dropped."""
    where = {s: i for i, s in enumerate(rows)}
    m = [[0] * len(cols) for _ in rows]
    for j, s in enumerate(cols):
        if len(s) < 2:
            continue
        for i in range(len(s)):
            f = s[:i] + s[i + 1 :]
            if f in where:
                m[where[f]][j] += (-1) ** i
            elif not partial:
                raise KeyError(f)
    return m


@dataclass
class ChainComplex:
    """C_n as a sublattice of the simplicial chains.

    In degree n the chains live on the allowable simplices ``allowable[n]``;
    ``kernels[n]`` is the echelon form whose kernel basis spans C_n there
    (None means every allowable chain qualifies).
    """

    simplices: tuple[tuple[Simp, ...], ...]
    allowable: tuple[tuple[Simp, ...], ...]
    kernels: tuple[ColumnEchelon | None, ...]

    def basis(self, n: int) -> list[list[int]]:
        """Basis vectors in coordinates over ``allowable[n]``."""
        E = self.kernels[n]
        if E is None:
            k = len(self.allowable[n])
            return [[int(i == j) for j in range(k)] for i in range(k)]
        return E.kernel_basis()

    def rank(self, n: int) -> int:
        if not 0 <= n < len(self.kernels):
            return 0
        E = self.kernels[n]
        return len(self.allowable[n]) if E is None else len(E.T) - E.rank

    def coords(self, n: int, vec: Mapping[Simp, int]) -> list[int]:
        cols = self.allowable[n]
        if any(c and s not in set(cols) for s, c in vec.items()):
            raise AssertionError("chain is not allowable")
        x = [vec.get(s, 0) for s in cols]
        E = self.kernels[n]
        return x if E is None else E.kernel_coords(x)

    def boundary_in_basis(self, n: int) -> list[list[int]]:
        """Matrix of ∂: C_n -> C_{n-1} in the chosen bases (rows index C_{n-1})."""
        if n <= 0 or n >= len(self.kernels):
            return []
        cols = []
        for b in self.basis(n):
            img: dict[Simp, int] = {}
            for c, s in zip(b, self.allowable[n]):
                if c:
                    for i in range(len(s)):
                        f = s[:i] + s[i + 1 :]
                        img[f] = img.get(f, 0) + (-1) ** i * c
            cols.append(self.coords(n - 1, img))
        r = self.rank(n - 1)
        return [[col[i] for col in cols] for i in range(r)]

    def check_closed(self) -> bool:
        """∂ maps each C_n into C_{n-1} and ∂∂ = 0."""
        try:
            mats = [self.boundary_in_basis(n) for n in range(len(self.kernels))]
        except (AssertionError, ValueError):
            return False
        for n in range(2, len(mats)):
            a, b = mats[n - 1], mats[n]
            if a and b and any(any(v) for v in matmul(a, b)):
                return False
        return True


def intersection_chain_complex(X: FilteredComplex, pbar: Perversity) -> ChainComplex:
    """C_n = allowable chains whose boundary is allowable."""
    allow = tuple(tuple(s for s in layer if is_allowable(X, s, pbar)) for layer in X.simplices)
    kernels: list[ColumnEchelon | None] = []
    for n in range(len(X.simplices)):
        cols = allow[n]
        ok_rows = set(allow[n - 1]) if n else set()
        bad = [f for f in X.simplices[n - 1] if f not in ok_rows] if n else []
        if not bad or not cols:
            kernels.append(None)
            continue
        kernels.append(column_echelon(boundary_matrix(bad, cols, partial=True), len(cols)))
    return ChainComplex(X.simplices, allow, tuple(kernels))


@dataclass(frozen=True)
class HomologyResult:
    groups: tuple[AbelianGroup, ...]

    def __getitem__(self, k: int) -> AbelianGroup:
        return self.groups[k] if 0 <= k < len(self.groups) else AbelianGroup(0, ())

    def ranks(self) -> tuple[int, ...]:
        return tuple(g.rank for g in self.groups)

    def to_json(self) -> list[dict[str, Any]]:
        return [{"degree": k, "rank": g.rank, "torsion": list(g.torsion)} for k, g in enumerate(self.groups)]

    def table(self) -> str:
        return "\n".join(f"H{k}: {g}" for k, g in enumerate(self.groups))


def homology_of(C: ChainComplex, top: int) -> HomologyResult:
    """Homology in degrees 0..top."""
    mats = {n: C.boundary_in_basis(n) for n in range(1, len(C.kernels))}
    invs = {n: smith_invariants(m) for n, m in mats.items()}
    out = []
    for n in range(top + 1):
        rk_out = len(invs.get(n, []))
        inc = invs.get(n + 1, [])
        rank = C.rank(n) - rk_out - len(inc)
        out.append(AbelianGroup(rank, tuple(d for d in inc if d > 1)))
    return HomologyResult(tuple(out))


def intersection_homology(X: FilteredComplex, pbar: Perversity | Mapping[str, int] | int = 0) -> HomologyResult:
    if not isinstance(pbar, Perversity):
        pbar = Perversity.of(X, pbar)
    return homology_of(intersection_chain_complex(X, pbar), X.formal_dim)


def simplicial_homology(vertices: Sequence[Vertex], maximal: Iterable[Sequence[Vertex]]) -> HomologyResult:
    X = trivially_filtered(vertices, maximal)
    return intersection_homology(X, 0)


# ---------------------------------------------------------------------------
# Mayer–Vietoris


@dataclass
class MayerVietoris:
    ranks: dict[str, tuple[int, ...]]
    alternating_sum: int

    @property
    def ok(self) -> bool:
        return self.alternating_sum == 0


def mayer_vietoris(
    X: FilteredComplex, U: FilteredComplex, V: FilteredComplex, W: FilteredComplex, pbar_of: Mapping[int, int]
) -> MayerVietoris:
    """Alternating rank sum Σ(−1)^k (IH_k(W) − IH_k(U) − IH_k(V) + IH_k(X)).

    W stands for U ∩ V. Perversities are given per stratum level so that the
    pieces inherit them.
    """
    ranks = {}
    for name, Y in (("X", X), ("U", U), ("V", V), ("UV", W)):
        ranks[name] = intersection_homology(Y, Perversity.by_level(Y, pbar_of)).ranks()
    d = X.formal_dim
    total = 0
    for k in range(d + 1):
        r = {n: (v[k] if k < len(v) else 0) for n, v in ranks.items()}
        total += (-1) ** k * (r["UV"] - r["U"] - r["V"] + r["X"])
    return MayerVietoris(ranks, total)
