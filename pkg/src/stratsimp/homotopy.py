"""Stratified homotopy invariants computed from finite mapping spaces.

Map(A, X) has n-simplices the filtered maps Δ^n ⊗ A -> X. We enumerate the
levels n <= 2, which is what π0 and the edge-path π1 need. Results are
exact for the enumerated object; for non-fibrant X one passes to a stage of
the Ex tower first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .constructions import ordered_complex, product_map, standard_simplex, standard_sset, tensor, vertex_map
from .errors import InvariantBreach
from .ex import ex_iter
from .fsset import FMap, FSSet, Key, compose, identity_map
from .hom import SimplexIndex, default_budget, iter_fmaps
from .intlinalg import AbelianGroup, cokernel
from .poset import PChain, Poset, nondegenerate_chains

Word = tuple[tuple[int, int], ...]  # (generator, ±1)


def _fingerprint(f: FMap) -> tuple:
    return tuple(f.images[k] for k in f.dom.keys())


def simplex_map(n_from: int, n_to: int, theta: Sequence[int]) -> FMap:
    return vertex_map(standard_sset(n_from), standard_sset(n_to), lambda v: theta[v])


# ---------------------------------------------------------------------------
# mapping spaces


@dataclass
class MappingSpace:
    """Levels 0..n_cap of Map(A, X) with face and degeneracy tables."""

    A: FSSet
    X: FSSet
    n_cap: int
    doms: list[FSSet]
    points: list[list[FMap]]
    where: list[dict[tuple, int]]
    faces: list[list[tuple[int, ...]]]
    degen0: list[int] = field(default_factory=list)  # s_0 on level 0

    def counts(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.points)

    def locate(self, n: int, f: FMap) -> int:
        return self.where[n][_fingerprint(f)]

    def is_degenerate_edge(self, e: int) -> bool:
        return self.degen0[self.faces[1][e][1]] == e

    def components(self) -> list[int]:
        """Component label (smallest member) per vertex."""
        parent = list(range(len(self.points[0])))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for d0, d1 in self.faces[1] if self.n_cap >= 1 else ():
            ra, rb = find(d0), find(d1)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        return [find(i) for i in range(len(parent))]

    def precompose(self, g_levels: list[FMap], target: MappingSpace, n: int) -> list[int]:
        """Index map level n -> target level n for precomposition with g_levels[n]."""
        g = g_levels[n]
        return [target.locate(n, compose(f, g)) for f in self.points[n]]


def map_space(A: FSSet, X: FSSet, n_cap: int = 2, budget: int | None = None) -> MappingSpace:
    budget = default_budget() if budget is None else budget
    index = SimplexIndex(X, A.dim + n_cap)
    doms, points, where, faces = [], [], [], []
    spent = 0
    for n in range(n_cap + 1):
        D = tensor(standard_sset(n), A)
        pts = []
        for f in iter_fmaps(D, X, index, budget - spent):
            pts.append(f)
        spent += len(pts)
        doms.append(D)
        points.append(pts)
        where.append({_fingerprint(f): i for i, f in enumerate(pts)})
        if n == 0:
            faces.append([])
            continue
        idA = identity_map(A)
        cofaces = [
            product_map(simplex_map(n - 1, n, [v + (v >= i) for v in range(n)]), idA, doms[n - 1], D)
            for i in range(n + 1)
        ]
        faces.append([tuple(where[n - 1][_fingerprint(compose(f, c))] for c in cofaces) for f in pts])
    degen0: list[int] = []
    if n_cap >= 1:
        s0 = product_map(simplex_map(1, 0, [0, 0]), identity_map(A), doms[1], doms[0])
        degen0 = [where[1][_fingerprint(compose(f, s0))] for f in points[0]]
    return MappingSpace(A, X, n_cap, doms, points, where, faces, degen0)


def restriction(big: MappingSpace, small: MappingSpace, incl: FMap) -> list[list[int]]:
    """Level maps induced by a map incl: small.A -> big.A."""
    out = []
    for n in range(min(big.n_cap, small.n_cap) + 1):
        g = product_map(identity_map(standard_sset(n)), incl, small.doms[n], big.doms[n])
        out.append([small.locate(n, compose(f, g)) for f in big.points[n]])
    return out


def homotopy_classes(A: FSSet, X: FSSet, budget: int | None = None) -> list[list[FMap]]:
    """Hom(A, X) modulo the equivalence generated by elementary homotopies Δ¹ ⊗ A -> X."""
    budget = default_budget() if budget is None else budget
    homs = list(iter_fmaps(A, X, SimplexIndex(X, A.dim + 1), budget))
    where = {_fingerprint(f): i for i, f in enumerate(homs)}
    parent = list(range(len(homs)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    cyl = tensor(standard_sset(1), A)
    ends = [product_map(simplex_map(0, 1, [e]), identity_map(A), tensor(standard_sset(0), A), cyl) for e in (0, 1)]
    for H in iter_fmaps(cyl, X, SimplexIndex(X, A.dim + 1), budget):
        f0, f1 = (compose(H, e) for e in ends)
        a = find(where[tuple(f0.images[((0,), k, tuple((0, i) for i in range(A.dims[k] + 1)))] for k in A.keys())])
        b = find(where[tuple(f1.images[((0,), k, tuple((0, i) for i in range(A.dims[k] + 1)))] for k in A.keys())])
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[int, list[FMap]] = {}
    for i, f in enumerate(homs):
        groups.setdefault(find(i), []).append(f)
    return [groups[r] for r in sorted(groups)]


@dataclass
class Diagram:
    """Map(Δ^φ, X) for the objects φ of R(P), with restriction level maps."""

    P: Poset
    spaces: dict[PChain, MappingSpace]
    restrictions: dict[tuple[PChain, PChain], list[list[int]]]  # (ψ, φ): levels of φ -> ψ


def diagram_D(X: FSSet, n_cap: int = 1, budget: int | None = None) -> Diagram:
    P = X.poset
    objs = nondegenerate_chains(P)
    spaces = {o: map_space(chain_simplex(o, P), X, n_cap, budget) for o in objs}
    res = {}
    for phi in objs:
        for psi in objs:
            if psi != phi and set(psi) <= set(phi):
                res[(psi, phi)] = restriction(spaces[phi], spaces[psi], face_inclusion(psi, phi, P))
    return Diagram(P, spaces, res)


# ---------------------------------------------------------------------------
# filtered simplices inside N(P)


def nerve_complex(P: Poset, chains: Iterable[PChain]) -> FSSet:
    """Sub-object of N(P) spanned by strict chains (vertices are poset elements)."""
    return ordered_complex(P, [tuple(c) for c in chains], {p: p for p in P.elements}, {"object": "nerve_sub"})


def chain_simplex(phi: PChain, P: Poset) -> FSSet:
    return standard_simplex(phi, P)


def chain_to_nerve(phi: PChain, V: FSSet) -> FMap:
    """Δ^φ -> V, i ↦ φ_i."""
    return vertex_map(chain_simplex(phi, V.poset), V, lambda i: phi[i])


def face_inclusion(psi: PChain, phi: PChain, P: Poset) -> FMap:
    """Δ^ψ -> Δ^φ for ψ a sub-chain of a strict chain φ."""
    pos = [phi.index(p) for p in psi]
    return vertex_map(chain_simplex(psi, P), chain_simplex(phi, P), lambda i: pos[i])


# ---------------------------------------------------------------------------
# π0 diagram


@dataclass
class Spi0Diagram:
    P: Poset
    objects: tuple[PChain, ...]
    classes: dict[PChain, list[int]]  # vertex index -> class label, per object
    labels: dict[PChain, tuple[int, ...]]
    spaces: dict[PChain, MappingSpace]
    maps: dict[tuple[PChain, PChain], dict[int, int]]  # (ψ, φ) -> class map φ -> ψ

    def size(self, phi: PChain) -> int:
        return len(self.labels[phi])

    def is_terminal(self) -> bool:
        """True iff every object has exactly one class (so sπ0 matches N(P))."""
        return all(len(self.labels[o]) == 1 for o in self.objects)

    def to_json(self) -> dict[str, Any]:
        return {
            "objects": [list(o) for o in self.objects],
            "classes": {"|".join(o): len(self.labels[o]) for o in self.objects},
            "maps": [
                {"from": list(phi), "to": list(psi), "map": {str(k): v for k, v in m.items()}}
                for (psi, phi), m in sorted(self.maps.items())
            ],
        }


def spi0(X: FSSet, objects: Sequence[PChain] | None = None, budget: int | None = None) -> Spi0Diagram:
    P = X.poset
    objs = tuple(objects) if objects is not None else tuple(nondegenerate_chains(P))
    spaces = {o: map_space(chain_simplex(o, P), X, 1, budget) for o in objs}
    classes, labels = {}, {}
    for o, S in spaces.items():
        comp = S.components()
        labs = tuple(sorted(set(comp)))
        classes[o] = comp
        labels[o] = labs
    maps = {}
    for phi in objs:
        for psi in objs:
            if psi != phi and set(psi) <= set(phi):
                res = restriction(spaces[phi], spaces[psi], face_inclusion(psi, phi, P))[0]
                cm: dict[int, int] = {}
                for v, w in enumerate(res):
                    a, b = classes[phi][v], classes[psi][w]
                    if cm.setdefault(a, b) != b:
                        raise InvariantBreach("restriction does not respect path components")
                maps[(psi, phi)] = cm
    return Spi0Diagram(P, objs, classes, labels, spaces, maps)


# ---------------------------------------------------------------------------
# π1 via edge paths


@dataclass
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def abelianization(self) -> AbelianGroup:
        return cokernel([_abelian_row(r, len(self.generators)) for r in self.relators], len(self.generators))

    def to_json(self) -> dict[str, Any]:
        ab = self.abelianization()
        return {
            "generators": list(self.generators),
            "relators": [[[g, e] for g, e in r] for r in self.relators],
            "abelianization": {"rank": ab.rank, "torsion": list(ab.torsion)},
        }


def _abelian_row(w: Word, n: int) -> list[int]:
    row = [0] * n
    for g, e in w:
        row[g] += e
    return row


def _free_reduce(w: Iterable[tuple[int, int]]) -> Word:
    out: list[tuple[int, int]] = []
    for g, e in w:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


@dataclass
class EdgePathPi1:
    space: MappingSpace
    base: int
    tree_path: dict[int, Word]  # vertex -> word of edges (edge index, ±1) from base
    gen_of_edge: dict[int, int]
    presentation: GroupPresentation

    def edge_word(self, e: int) -> Word:
        g = self.gen_of_edge.get(e)
        return () if g is None else ((g, 1),)

    def path_word(self, edges: Word) -> Word:
        out: list[tuple[int, int]] = []
        for e, sign in edges:
            w = self.edge_word(e)
            out.extend(w if sign > 0 else [(g, -x) for g, x in reversed(w)])
        return _free_reduce(out)


def edge_path_pi1(S: MappingSpace, base: int, reverse: bool = False) -> EdgePathPi1:
    """π1(S, base) presented by a spanning tree of the base component.

    ``reverse`` builds the tree from edges in reverse order, which changes the
    presentation but not the group.
    """
    if S.n_cap < 2:
        raise ValueError("edge-path π1 needs levels up to 2")
    edges = [e for e in range(len(S.points[1])) if not S.is_degenerate_edge(e)]
    if reverse:
        edges.reverse()
    adj: dict[int, list[tuple[int, int, int]]] = {}
    for e in edges:
        d0, d1 = S.faces[1][e]
        adj.setdefault(d1, []).append((d0, e, 1))
        adj.setdefault(d0, []).append((d1, e, -1))
    tree_path: dict[int, Word] = {base: ()}
    tree: set[int] = set()
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for w, e, sign in adj.get(v, []):
            if w not in tree_path:
                tree_path[w] = tree_path[v] + ((e, sign),)
                tree.add(e)
                queue.append(w)
    comp = set(tree_path)
    gens = sorted(e for e in edges if e not in tree and S.faces[1][e][1] in comp)
    gen_of_edge = {e: i for i, e in enumerate(gens)}

    def w(e: int) -> Word:
        g = gen_of_edge.get(e)
        return () if g is None else ((g, 1),)

    rels = []
    for t, fs in enumerate(S.faces[2]):
        d0, d1, d2 = fs
        if S.faces[1][d1][1] not in comp:
            continue
        # d2 · d0 = d1
        r = _free_reduce(w(d2) + w(d0) + tuple((g, -x) for g, x in reversed(w(d1))))
        if r:
            rels.append(r)
    names = tuple(f"e{e}" for e in gens)
    pres = GroupPresentation(names, tuple(sorted(set(rels))))
    return EdgePathPi1(S, base, tree_path, gen_of_edge, pres)


@dataclass
class Homomorphism:
    source: EdgePathPi1
    target: EdgePathPi1
    images: tuple[Word, ...]

    def abelian_matrix(self) -> list[list[int]]:
        n = len(self.target.presentation.generators)
        return [_abelian_row(w, n) for w in self.images]

    def cokernel(self) -> AbelianGroup:
        T = self.target.presentation
        n = len(T.generators)
        rows = [_abelian_row(r, n) for r in T.relators] + self.abelian_matrix()
        return cokernel(rows, n)


def induced_homomorphism(src: EdgePathPi1, tgt: EdgePathPi1, level_maps: list[list[int]]) -> Homomorphism:
    """Homomorphism on π1 induced by a simplicial map given on levels 0 and 1."""
    v0, e1 = level_maps[0], level_maps[1]
    S = src.space
    if v0[src.base] != tgt.base:
        raise ValueError("base points do not correspond")

    def image_path(p: Word) -> Word:
        return tgt.path_word(tuple((e1[e], s) for e, s in p))

    images = []
    for e, _g in sorted(src.gen_of_edge.items(), key=lambda t: t[1]):
        d0, d1 = S.faces[1][e]
        loop = src.tree_path[d1] + ((e, 1),) + tuple((x, -s) for x, s in reversed(src.tree_path[d0]))
        images.append(image_path(loop))
    return Homomorphism(src, tgt, tuple(images))


# ---------------------------------------------------------------------------
# pointings and the stratified groups


@dataclass
class Pointing:
    """A map from a sub-object V of N(P) to X."""

    V: FSSet
    f: FMap

    def covers(self, phi: PChain) -> bool:
        return tuple(sorted(set(phi), key=self.V.poset.rank)) in self.V.dims

    def restrict(self, phi: PChain) -> FMap:
        return compose(self.f, chain_to_nerve(phi, self.V))

    def to_json(self) -> dict[str, Any]:
        return {
            "domain": [list(k) for k in self.V.keys()],
            "images": {"|".join(k): [list(self.f.images[k].base) if isinstance(self.f.images[k].base, tuple) else self.f.images[k].base, list(self.f.images[k].eta)] for k in self.V.keys()},
        }


def pointing_from_map(phi: PChain, g: FMap) -> Pointing:
    """Pointing with domain the face of N(P) spanned by a strict chain φ."""
    P = g.dom.poset
    V = nerve_complex(P, [phi])
    back = {k: g.images[tuple(phi.index(p) for p in k)] for k in V.keys()}
    return Pointing(V, FMap(V, g.cod, back))


def complete_pointings(X: FSSet, diagram: Spi0Diagram | None = None) -> list[Pointing]:
    """Pointings meeting every class of sπ0, largest objects first."""
    D = diagram or spi0(X)
    out: list[Pointing] = []
    for phi in sorted(D.objects, key=lambda o: (-len(o), o)):
        S = D.spaces[phi]
        reached = set()
        for pt in out:
            if pt.covers(phi):
                reached.add(D.classes[phi][S.locate(0, _retarget(pt.restrict(phi), S.doms[0]))])
        for lab in D.labels[phi]:
            if lab not in reached:
                rep = _retarget(S.points[0][lab], chain_simplex(phi, X.poset), from_tensor=True)
                out.append(pointing_from_map(phi, rep))
                reached.add(lab)
    return out


def _retarget(f: FMap, dom: FSSet, from_tensor: bool = False) -> FMap:
    """Move a map between Δ^φ and Δ^0 ⊗ Δ^φ (same underlying object)."""
    if from_tensor:
        return FMap(dom, f.cod, {k: f.images[((0,), k, tuple((0, i) for i in range(len(k))))] for k in dom.keys()})
    return FMap(dom, f.cod, {k: f.images[k[1]] for k in dom.keys()})


@dataclass
class StratifiedPi1:
    phi: PChain
    stage: int
    space: MappingSpace
    pi1: EdgePathPi1

    @property
    def group(self) -> AbelianGroup:
        return self.pi1.presentation.abelianization()


def _stage(X: FSSet, stage: int, budget: int | None, dim_cap: int | None = None) -> tuple[FSSet, FMap | None]:
    if stage == 0:
        return X, None
    T = ex_iter(X, stage, dim_cap=dim_cap, budget=budget)
    unit = T.units[0]
    for u in T.units[1:]:
        unit = compose(u, unit)
    return T.stages[-1], unit


def spi1(
    X: FSSet,
    phi: PChain,
    base: FMap | None = None,
    stage: int = 0,
    budget: int | None = None,
    dim_cap: int | None = None,
) -> StratifiedPi1:
    """π1 of Map(Δ^φ, Ex^stage X) at the image of ``base`` (default: first vertex).

    Ex stages are truncated at ``dim_cap`` (default dim Δ^φ + 2, enough for
    levels 0..2 of the mapping space).
    """
    P = X.poset
    cap = len(phi) + 1 if dim_cap is None else dim_cap
    Xk, unit = _stage(X, stage, budget, cap)
    S = map_space(chain_simplex(phi, P), Xk, 2, budget)
    if not S.points[0]:
        raise ValueError(f"no maps Δ^{list(phi)} -> X")
    if base is None:
        b = 0
    else:
        g = base if unit is None else compose(unit, base)
        b = S.locate(0, _retarget(g, S.doms[0]))
    return StratifiedPi1(tuple(phi), stage, S, edge_path_pi1(S, b))


@dataclass
class HolinkIndex:
    """The restriction Map(Δ^[p<q], X) -> Map(Δ^[p], X) on abelianized π1."""

    holink: StratifiedPi1
    stratum: StratifiedPi1
    hom: Homomorphism

    @property
    def cokernel(self) -> AbelianGroup:
        return self.hom.cokernel()


def holink(
    X: FSSet, p: str, q: str, stage: int = 0, budget: int | None = None, dim_cap: int | None = None
) -> MappingSpace:
    P = X.poset
    if not P.lt(p, q):
        raise ValueError(f"need {p} < {q}")
    Xk, _ = _stage(X, stage, budget, 3 if dim_cap is None else dim_cap)
    return map_space(chain_simplex((p, q), P), Xk, 2, budget)


def holink_index(
    X: FSSet,
    p: str,
    q: str,
    stage: int = 0,
    base: int = 0,
    budget: int | None = None,
    dim_cap: int | None = None,
) -> HolinkIndex:
    """Cokernel data of the restriction to the lower end; ``base`` indexes a holink vertex."""
    P = X.poset
    if not P.lt(p, q):
        raise ValueError(f"need {p} < {q}")
    Xk, _ = _stage(X, stage, budget, 3 if dim_cap is None else dim_cap)
    H = map_space(chain_simplex((p, q), P), Xk, 2, budget)
    L = map_space(chain_simplex((p,), P), Xk, 2, budget)
    levels = restriction(H, L, face_inclusion((p,), (p, q), P))
    hp = edge_path_pi1(H, base)
    lp = edge_path_pi1(L, levels[0][base])
    hom = induced_homomorphism(hp, lp, levels)
    return HolinkIndex(StratifiedPi1((p, q), stage, H, hp), StratifiedPi1((p,), stage, L, lp), hom)


# ---------------------------------------------------------------------------
# refinement


@dataclass
class Refinement:
    Q: Poset
    X: FSSet
    class_of_vertex: dict[Key, str]


def refine_stratification(X: FSSet, diagram: Spi0Diagram | None = None) -> Refinement:
    """Re-stratify X by the π0 classes of its strata, ordered through edges."""
    D = diagram or spi0(X)
    P = X.poset
    names: dict[tuple[str, int], str] = {}
    for p in P.elements:
        labs = D.labels.get((p,), ())
        for i, lab in enumerate(labs):
            names[(p, lab)] = f"{p}.{i}" if len(labs) > 1 else p
    rel: set[tuple[str, str]] = set()
    for a, b in [o for o in D.objects if len(o) == 2]:
        S = D.spaces[(a, b)]
        Sa, Sb = D.spaces[(a,)], D.spaces[(b,)]
        ra = restriction(S, Sa, face_inclusion((a,), (a, b), P))[0]
        rb = restriction(S, Sb, face_inclusion((b,), (a, b), P))[0]
        for v in range(len(S.points[0])):
            rel.add((names[(a, D.classes[(a,)][ra[v]])], names[(b, D.classes[(b,)][rb[v]])]))
    elems = sorted(set(names.values()), key=lambda s: (P.rank(s.split(".")[0]), s))
    # transitive closure, then antisymmetry check
    leq = {(e, e) for e in elems} | rel
    changed = True
    while changed:
        changed = False
        for a, b in list(leq):
            for c, d in list(leq):
                if b == c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True
    for a, b in leq:
        if a != b and (b, a) in leq:
            raise InvariantBreach(f"refinement order is not antisymmetric: {a} and {b}")
    covers = [(a, b) for a, b in leq if a != b and not any((a, c) in leq and (c, b) in leq for c in elems if c not in (a, b))]
    Q = Poset.from_covers(elems, covers)
    cls: dict[Key, str] = {}
    Sv = {p: D.spaces[(p,)] for p in P.elements if (p,) in D.spaces}
    for v in X.nd[0]:
        p = X.filt[v][0]
        S = Sv[p]
        idx = S.locate(0, FMap(S.doms[0], X, {S.doms[0].nd[0][0]: X.nd_simplex(v)}))
        cls[v] = names[(p, D.classes[(p,)][idx])]
    filt = {k: tuple(cls[w] for w in X.simplex_vertices(X.nd_simplex(k))) for k in X.keys()}
    for k, c in filt.items():
        Q.check_chain(c)
    Y = FSSet(Q, dict(X.dims), dict(X.faces), filt, {**X.meta, "refined": True})
    return Refinement(Q, Y, cls)
