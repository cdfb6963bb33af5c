"""Filtered subdivision of filtered simplices and of general filtered simplicial sets."""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .fsset import FMap, FSSet, Key, SSet, Simplex, dedupe, identity
from .constructions import complex_faces
from .poset import PChain, Poset

# A vertex of sd(Δ^φ) is (σ, q) with σ an increasing vertex tuple and q a color of σ.
SdVertex = tuple[tuple[int, ...], str]


class Undefined(ValueError):
    """Raised when a colored last vertex does not exist."""


def last_vertex_color(v: SdVertex, color: str, phi: Sequence[str]) -> int:
    sigma, _ = v
    hits = [e for e in sigma if phi[e] == color]
    if not hits:
        raise Undefined(f"face {sigma} has no vertex of color {color!r}")
    return hits[-1]


def sd_chains(phi: PChain, P: Poset) -> list[tuple[SdVertex, ...]]:
    """All non-degenerate chains of sd(Δ^φ), enumerated depth first."""
    return list(_sd_chains(tuple(phi), P))


@lru_cache(maxsize=None)
def _sd_chains(phi: PChain, P: Poset) -> tuple[tuple[SdVertex, ...], ...]:
    n = len(phi) - 1
    faces = [tuple(i for i in range(n + 1) if m >> i & 1) for m in range(1, 1 << (n + 1))]
    faces.sort(key=lambda s: (len(s), s))
    verts = [(s, q) for s in faces for q in sorted({phi[e] for e in s}, key=P.rank)]
    out: list[tuple[SdVertex, ...]] = []

    def grow(chain: list[SdVertex], allowed: set[str]) -> None:
        out.append(tuple(chain))
        s, q = chain[-1]
        for t, r in verts:
            if (t, r) != (s, q) and set(s) <= set(t) and P.leq(q, r) and r in allowed:
                chain.append((t, r))
                grow(chain, allowed)
                chain.pop()

    for v in verts:
        grow([v], {phi[e] for e in v[0]})
    return tuple(out)


def sd_simplex(phi: Sequence[str], P: Poset) -> FSSet:
    phi = P.check_chain(phi)
    chains = sd_chains(phi, P)
    dims = {c: len(c) - 1 for c in chains}
    return FSSet(
        P, dims, complex_faces(chains), {c: tuple(q for _, q in c) for c in chains}, {"object": "sd_simplex", "phi": list(phi)}
    )


def _push_chain(chain: Sequence[SdVertex], image: tuple[int, ...], eta: Sequence[int]) -> list[SdVertex]:
    """Transport pairs living over the face ``image`` of a simplex along the surjection ``eta``."""
    pos = {v: i for i, v in enumerate(image)}
    return [(tuple(sorted({eta[pos[e]] for e in s})), q) for s, q in chain]


def sd_normalize(X: SSet, x: Key, chain: Sequence[SdVertex]) -> Simplex:
    """Normal form in sd(X) of the image of ``chain`` under sd of the simplex ``x``."""
    top = chain[-1][0]
    y = X.face_along(x, top)
    pushed, eps = dedupe(_push_chain(chain, top, y.eta))
    return Simplex((y.base, pushed), eps)


def sd(X: FSSet) -> FSSet:
    """sd(X); NDKeys are (x, chain) with x non-degenerate and the chain's top face all of x."""
    P = X.poset
    dims: dict[Key, int] = {}
    for x in X.keys():
        n = X.dims[x]
        full = identity(n)
        for c in sd_chains(X.filt[x], P):
            if c[-1][0] == full:
                dims[(x, c)] = len(c) - 1
    faces = {}
    for key, m in dims.items():
        if m == 0:
            continue
        x, c = key
        faces[key] = tuple(sd_normalize(X, x, c[:i] + c[i + 1 :]) for i in range(m + 1))
    filt = {k: tuple(q for _, q in k[1]) for k in dims}
    out = FSSet(P, dims, faces, filt, {"object": "sd", "of": X.meta.get("object", "")})
    out.sd_base = X  # type: ignore[attr-defined]
    return out


def last_vertex_filtered(X: FSSet, sdX: FSSet | None = None) -> FMap:
    sdX = sdX if sdX is not None else sd(X)
    images = {}
    for key in sdX.keys():
        x, c = key
        phi = X.filt[x]
        theta = [last_vertex_color(v, v[1], phi) for v in c]
        images[key] = X.apply(X.nd_simplex(x), theta)
    return FMap(sdX, X, images, "lv")


def sd_on_map(f: FMap, sd_dom: FSSet | None = None, sd_cod: FSSet | None = None) -> FMap:
    A, B = f.dom, f.cod
    assert isinstance(A, FSSet) and isinstance(B, FSSet)
    sd_dom = sd_dom if sd_dom is not None else sd(A)
    sd_cod = sd_cod if sd_cod is not None else sd(B)
    images = {}
    for key in sd_dom.keys():
        a, c = key
        y = f.images[a]
        pushed, eps = dedupe(_push_chain(c, identity(A.dims[a]), y.eta))
        images[key] = Simplex((y.base, pushed), eps)
    return FMap(sd_dom, sd_cod, images, "sd")


# ---------------------------------------------------------------------------
# sub-objects of a filtered simplex


def flatten_key(key: tuple[tuple[int, ...], tuple[SdVertex, ...]]) -> tuple[SdVertex, ...]:
    """Rewrite an sd(A) key, A a sub-object of Δ^φ, as a chain of sd(Δ^φ)."""
    x, c = key
    return tuple((tuple(x[i] for i in s), q) for s, q in c)


def sd_sub(A: FSSet, phi: Sequence[str]) -> FSSet:
    """sd(A) realised inside sd(Δ^φ) for an ordered-complex sub-object A of Δ^φ."""
    full = sd_simplex(phi, A.poset)
    keys = [c for c in full.keys() if c[-1][0] in A.dims]
    out = full.restrict(keys)
    out.meta = {"object": "sd_sub", "phi": list(phi), "of": A.meta.get("object", "")}
    return out


def flatten_map(sdA: FSSet, target: FSSet) -> FMap:
    """The canonical isomorphism sd(A) -> sd_sub(A, φ)."""
    return FMap(sdA, target, {k: target.nd_simplex(flatten_key(k)) for k in sdA.keys()}, "flatten")


def top_section(psi: Sequence[str], P: Poset) -> FMap:
    """Δ^ψ -> sd(Δ^ψ), [q_0..q_n] ↦ [(Δ^ψ,q_0),...,(Δ^ψ,q_n)], ψ strictly increasing."""
    from .constructions import standard_simplex

    psi = tuple(psi)
    if len(set(psi)) != len(psi):
        raise ValueError("section needs a strictly increasing chain")
    D = standard_simplex(psi, P)
    S = sd_simplex(psi, P)
    full = identity(len(psi) - 1)
    images = {k: S.nd_simplex(tuple((full, psi[v]) for v in k)) for k in D.keys()}
    return FMap(D, S, images, "section")
