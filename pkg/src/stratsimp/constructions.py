"""Standard filtered simplices and their sub-objects, products, strata, admissibility."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from .fsset import FMap, FSSet, Key, Simplex, SSet, dedupe, identity
from .poset import PChain, Poset

# ---------------------------------------------------------------------------
# ordered simplicial complexes: NDKeys are increasing tuples of vertex labels


def complex_faces(simplices: Iterable[tuple]) -> dict[tuple, tuple[Simplex, ...]]:
    faces = {}
    for s in simplices:
        if len(s) > 1:
            faces[s] = tuple(Simplex(s[:i] + s[i + 1 :], identity(len(s) - 2)) for i in range(len(s)))
    return faces


def closure(maximal: Iterable[Sequence]) -> set[tuple]:
    out: set[tuple] = set()
    for s in maximal:
        s = tuple(s)
        for r in range(1, len(s) + 1):
            out.update(itertools.combinations(s, r))
    return out


def ordered_complex(
    P: Poset, maximal: Iterable[Sequence], vertex_filt: dict, meta: dict | None = None
) -> FSSet:
    """Filtered ordered simplicial complex; each maximal simplex lists its vertices in order."""
    simplices = closure(maximal)
    dims = {s: len(s) - 1 for s in simplices}
    filt = {s: tuple(vertex_filt[v] for v in s) for s in simplices}
    return FSSet(P, dims, complex_faces(simplices), filt, meta)


def complex_simplex(seq: Sequence) -> Simplex:
    """Normal form of a (possibly repeating) nondecreasing vertex sequence in an ordered complex."""
    base, eta = dedupe(seq)
    return Simplex(base, eta)


def vertex_map(dom: SSet, cod: SSet, vmap: Callable[[Key], Key], name: str = "") -> FMap:
    """Map between ordered complexes induced by a monotone vertex map."""
    images = {}
    for k in dom.keys():
        images[k] = complex_simplex([vmap(v) for v in k])
    return FMap(dom, cod, images, name)


# ---------------------------------------------------------------------------
# standard objects


def _simplex_sub(phi: PChain, keep: Callable[[tuple[int, ...]], bool], P: Poset | None, meta: dict) -> FSSet:
    phi = tuple(phi)
    if not phi:
        raise ValueError("filtered simplex needs a nonempty chain")
    if P is None:
        P = Poset.from_covers(set(phi), [(a, b) for a, b in zip(phi, phi[1:]) if a != b])
    P.check_chain(phi)
    n = len(phi) - 1
    simplices = [
        s for r in range(1, n + 2) for s in itertools.combinations(range(n + 1), r) if keep(s)
    ]
    return ordered_complex(P, simplices, dict(enumerate(phi)), meta)


@lru_cache(maxsize=None)
def _simplex_caches(n: int) -> tuple[dict, dict]:
    return {}, {}


def standard_simplex(phi: Sequence[str], P: Poset | None = None) -> FSSet:
    X = _simplex_sub(tuple(phi), lambda s: True, P, {"object": "simplex", "phi": list(phi)})
    # face computations only see the vertex structure, which every Δ^φ of this length shares
    X._face_cache, X._d_cache = _simplex_caches(len(phi) - 1)
    return X


def boundary(phi: Sequence[str], P: Poset | None = None) -> FSSet:
    n = len(phi) - 1
    if n < 1:
        raise ValueError("boundary needs a chain of length at least 2")
    return _simplex_sub(tuple(phi), lambda s: len(s) <= n, P, {"object": "boundary", "phi": list(phi)})


def horn(phi: Sequence[str], k: int, P: Poset | None = None) -> FSSet:
    n = len(phi) - 1
    if n < 1:
        raise ValueError("horn needs a chain of length at least 2")
    if not 0 <= k <= n:
        raise ValueError(f"horn index {k} out of range 0..{n}")
    full = set(range(n + 1))

    def keep(s: tuple[int, ...]) -> bool:
        # s lies in some face d_i with i != k
        return len(s) <= n and bool(full - set(s) - {k})

    return _simplex_sub(tuple(phi), keep, P, {"object": "horn", "phi": list(phi), "k": k})


def outer_skeleton(phi: Sequence[str], P: Poset | None = None) -> FSSet:
    phi = tuple(phi)
    if any(a == b for a, b in zip(phi, phi[1:])):
        raise ValueError("outer skeleton needs a strictly increasing chain")
    return _simplex_sub(
        phi,
        lambda s: len(s) == 1 or (len(s) == 2 and s[1] == s[0] + 1),
        P,
        {"object": "outer_skeleton", "phi": list(phi)},
    )


def standard_sset(n: int) -> SSet:
    simplices = [s for r in range(1, n + 2) for s in itertools.combinations(range(n + 1), r)]
    return SSet({s: len(s) - 1 for s in simplices}, complex_faces(simplices), {"object": "simplex", "n": n})


def nerve_fsset(P: Poset, max_dim: int) -> FSSet:
    """N(P) as a filtered simplicial set over itself, truncated at ``max_dim``."""
    from .poset import nerve_simplices

    dims: dict[Key, int] = {}
    for n in range(max_dim + 1):
        for c in nerve_simplices(P, n, nondegenerate=True):
            dims[c] = n
    faces = complex_faces(dims)
    return FSSet(P, dims, faces, {c: c for c in dims}, {"object": "nerve", "truncated_at": max_dim})


# ---------------------------------------------------------------------------
# admissibility


def _check_k(phi: Sequence[str], k: int) -> int:
    n = len(phi) - 1
    if n < 1 or not 0 <= k <= n:
        raise ValueError(f"horn index {k} out of range for chain of length {len(phi)}")
    return n


def is_admissible(phi: Sequence[str], k: int) -> bool:
    n = _check_k(phi, k)
    return (k < n and phi[k] == phi[k + 1]) or (k > 0 and phi[k] == phi[k - 1])


def is_admissible_via_degeneracy(phi: Sequence[str], k: int) -> bool:
    n = _check_k(phi, k)
    for m in (k - 1, k):
        if not 0 <= m <= n - 1:
            continue
        s_m = [j if j <= m else j - 1 for j in range(n + 1)]  # [n] -> [n-1]
        d_k = [j if j < k else j + 1 for j in range(n)]  # [n-1] -> [n]
        if all(phi[d_k[s_m[i]]] == phi[i] for i in range(n + 1)):
            return True
    return False


def horn_retraction(phi: Sequence[str], k: int, P: Poset | None = None) -> tuple[FMap, FMap]:
    """Retraction r of Δ^φ onto an admissible horn and a filtered homotopy H.

    When φ(e_k) = φ(e_{k+1}) the homotopy runs from incl∘r (at 0) to id (at 1);
    otherwise φ(e_k) = φ(e_{k-1}) and it runs from id (at 0) to incl∘r (at 1).
    """
    phi = tuple(phi)
    n = len(phi) - 1
    if not is_admissible(phi, k):
        raise ValueError(f"horn ({list(phi)}, {k}) is not admissible")
    Delta = standard_simplex(phi, P)
    Lam = horn(phi, k, Delta.poset)
    if k < n and phi[k] == phi[k + 1]:
        moved, r_at = k + 1, 0
    else:
        moved, r_at = k - 1, 1

    def r(v: int) -> int:
        return k if v == moved else v

    rmap = vertex_map(Delta, Lam, r, "r")
    prism = _prism(n)
    cyl = FSSet(
        Delta.poset,
        prism.dims,
        prism.faces,
        {key: tuple(phi[key[1][b]] for _, b in key[2]) for key in prism.dims},
        {"object": "tensor"},
    )

    H = FMap(cyl, Delta, dict(_homotopy_images(n, k, moved, r_at)), "H")
    return rmap, H


@lru_cache(maxsize=None)
def _homotopy_images(n: int, k: int, moved: int, r_at: int) -> tuple[tuple[Key, Simplex], ...]:
    """H on Δ¹ × Δ^n: at the end ``r_at`` the vertex ``moved`` goes to ``k``."""

    def h_vertex(eps: int, v: int) -> int:
        return k if eps == r_at and v == moved else v

    out = []
    for key in _prism(n).keys():
        kx, ky, path = key
        out.append((key, complex_simplex([h_vertex(kx[a], ky[b]) for a, b in path])))
    return tuple(out)


@lru_cache(maxsize=None)
def _prism(n: int) -> SSet:
    """Δ¹ × Δ^n; its keys agree with those of Δ¹ ⊗ Δ^φ for any φ of length n + 1."""
    return product(standard_sset(1), standard_sset(n))


# ---------------------------------------------------------------------------
# products


def lattice_paths(p: int, q: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Strictly increasing paths (0,0) -> (p,q) with unit steps in each coordinate."""

    def go(a: int, b: int, acc: list[tuple[int, int]]) -> Iterator[tuple[tuple[int, int], ...]]:
        if (a, b) == (p, q):
            yield tuple(acc)
            return
        for da, db in ((1, 0), (0, 1), (1, 1)):
            na, nb = a + da, b + db
            if na <= p and nb <= q:
                acc.append((na, nb))
                yield from go(na, nb, acc)
                acc.pop()

    yield from go(0, 0, [(0, 0)])


def _product(
    K: SSet,
    L: SSet,
    accept: Callable[[Key, Key, tuple], bool],
    P: Poset | None,
    filt_of: Callable[[Key, Key, tuple], PChain] | None,
    meta: dict,
) -> SSet:
    dims: dict[Key, int] = {}
    for x in K.keys():
        for y in L.keys():
            for path in lattice_paths(K.dims[x], L.dims[y]):
                if accept(x, y, path):
                    dims[(x, y, path)] = len(path) - 1
    faces: dict[Key, tuple[Simplex, ...]] = {}
    for key, n in dims.items():
        if n == 0:
            continue
        x, y, path = key
        xs, ys = K.nd_simplex(x), L.nd_simplex(y)
        fs = []
        for i in range(n + 1):
            sub = path[:i] + path[i + 1 :]
            fx = K.apply(xs, [a for a, _ in sub])
            fy = L.apply(ys, [b for _, b in sub])
            joint, eps = dedupe(list(zip(fx.eta, fy.eta)))
            fs.append(Simplex((fx.base, fy.base, joint), eps))
        faces[key] = tuple(fs)
    if P is None:
        return SSet(dims, faces, meta)
    assert filt_of is not None
    return FSSet(P, dims, faces, {k: filt_of(*k) for k in dims}, meta)


def product(K: SSet, L: SSet) -> SSet:
    return _product(K, L, lambda *a: True, None, None, {"object": "product"})


def tensor(K: SSet, X: FSSet) -> FSSet:
    """K ⊗ X: the product with the filtration read off the X factor."""

    def filt_of(x: Key, y: Key, path: tuple) -> PChain:
        f = X.filt[y]
        return tuple(f[b] for _, b in path)

    return _product(K, X, lambda *a: True, X.poset, filt_of, {"object": "tensor"})  # type: ignore[return-value]


def fibered_product(X: FSSet, Y: FSSet) -> FSSet:
    if X.poset.leq_pairs != Y.poset.leq_pairs:
        raise ValueError("fibered product needs a common poset")

    def accept(x: Key, y: Key, path: tuple) -> bool:
        fx, fy = X.filt[x], Y.filt[y]
        return all(fx[a] == fy[b] for a, b in path)

    def filt_of(x: Key, y: Key, path: tuple) -> PChain:
        return tuple(X.filt[x][a] for a, _ in path)

    return _product(X, Y, accept, X.poset, filt_of, {"object": "fibered_product"})  # type: ignore[return-value]


def product_map(f: FMap, g: FMap, dom: SSet, cod: SSet) -> FMap:
    """f × g between product-shaped objects (tensor, product, fibered product)."""
    images = {}
    K, L = f.cod, g.cod
    for key in dom.keys():
        x, y, path = key
        fx = K.apply(f.images[x], [a for a, _ in path])
        gy = L.apply(g.images[y], [b for _, b in path])
        joint, eps = dedupe(list(zip(fx.eta, gy.eta)))
        images[key] = Simplex((fx.base, gy.base, joint), eps)
    return FMap(dom, cod, images)


def free(K: SSet, P: Poset, max_dim: int | None = None) -> FSSet:
    """F(K) = K ⊗ N(P) with the nerve truncated (default: enough for dim K plus chains of P)."""
    if max_dim is None:
        max_dim = max(K.dim, 0) + len(P) - 1
    out = tensor(K, nerve_fsset(P, max_dim))
    out.meta.update({"object": "free", "nerve_truncated_at": max_dim})
    return out


def stratum(X: FSSet, p: str) -> FSSet:
    if p not in X.poset:
        raise ValueError(f"unknown poset element {p!r}")
    keys = [k for k in X.keys() if all(q == p for q in X.filt[k])]
    out = X.restrict(keys)
    out.meta = {**X.meta, "stratum": p}
    return out
