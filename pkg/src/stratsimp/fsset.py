"""Finite (filtered) simplicial sets stored by non-degenerate simplices.

Every simplex is kept in Eilenberg-Zilber normal form: a non-degenerate base
together with an order-preserving surjection ``eta`` from the simplex's
vertices onto the base's vertices.  All simplicial operators reduce to
composing monotone maps with ``eta`` and taking iterated faces of the base.
"""

from __future__ import annotations

import json
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .poset import PChain, Poset

Key = Hashable


class Simplex(NamedTuple):
    base: Key
    eta: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.eta) - 1

    @property
    def word(self) -> tuple[int, ...]:
        return eta_to_word(self.eta)

    def is_nondegenerate(self) -> bool:
        return len(set(self.eta)) == len(self.eta)


def identity(n: int) -> tuple[int, ...]:
    return tuple(range(n + 1))


@lru_cache(maxsize=None)
def coface(n: int, i: int) -> tuple[int, ...]:
    """delta^i : [n-1] -> [n] as a tuple of images."""
    return tuple(j if j < i else j + 1 for j in range(n))


@lru_cache(maxsize=None)
def codegeneracy(n: int, i: int) -> tuple[int, ...]:
    """sigma^i : [n+1] -> [n]."""
    return tuple(j if j <= i else j - 1 for j in range(n + 2))


def eta_to_word(eta: Sequence[int]) -> tuple[int, ...]:
    """Strictly decreasing degeneracy indices with eta^* = s_{i1} s_{i2} ..."""
    return tuple(i for i in range(len(eta) - 2, -1, -1) if eta[i] == eta[i + 1])


def word_to_eta(word: Sequence[int], base_dim: int) -> tuple[int, ...]:
    if any(a <= b for a, b in zip(word, word[1:])):
        raise ValueError(f"degeneracy word must be strictly decreasing: {list(word)}")
    eta = identity(base_dim)
    for i in reversed(word):
        if i > len(eta) - 1:
            raise ValueError(f"degeneracy index {i} out of range")
        eta = tuple(eta[j] for j in codegeneracy(len(eta) - 1, i))
    return eta


def factor(c: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split a monotone map into (image injection, surjection onto it)."""
    image = tuple(sorted(set(c)))
    pos = {v: k for k, v in enumerate(image)}
    return image, tuple(pos[v] for v in c)


def dedupe(seq: Sequence[Any]) -> tuple[tuple[Any, ...], tuple[int, ...]]:
    """Remove consecutive repeats, returning the reduced sequence and the surjection."""
    out: list[Any] = []
    eta: list[int] = []
    for item in seq:
        if not out or out[-1] != item:
            out.append(item)
        eta.append(len(out) - 1)
    return tuple(out), tuple(eta)


@lru_cache(maxsize=1 << 18)
def _sortkey(k: Any) -> tuple:
    if isinstance(k, bool):
        return (0, int(k), "")
    if isinstance(k, int):
        return (0, k, "")
    if isinstance(k, str):
        return (1, 0, k)
    return (2, len(k), tuple(_sortkey(x) for x in k))


def key_order(k: Key) -> tuple:
    return _sortkey(k)


def key_to_json(k: Key) -> Any:
    if isinstance(k, tuple):
        return [key_to_json(x) for x in k]
    return k


def key_from_json(v: Any) -> Key:
    if isinstance(v, list):
        return tuple(key_from_json(x) for x in v)
    return v


class SSet:
    """A finite simplicial set (non-degenerate simplices plus normal-form faces)."""

    def __init__(
        self,
        dims: Mapping[Key, int],
        faces: Mapping[Key, Sequence[Simplex]],
        meta: Mapping[str, Any] | None = None,
    ) -> None:
        self.dims: dict[Key, int] = dict(dims)
        self.faces: dict[Key, tuple[Simplex, ...]] = {k: tuple(v) for k, v in faces.items()}
        self.meta: dict[str, Any] = dict(meta or {})
        top = max(self.dims.values(), default=-1)
        layers: list[list[Key]] = [[] for _ in range(top + 1)]
        for k, d in self.dims.items():
            layers[d].append(k)
        self.nd: tuple[tuple[Key, ...], ...] = tuple(
            tuple(sorted(layer, key=_sortkey)) for layer in layers
        )
        self._face_cache: dict[tuple[Key, tuple[int, ...]], Simplex] = {}
        self._vert_cache: dict[Key, tuple[Key, ...]] = {}
        self._d_cache: dict[tuple[Simplex, int], Simplex] = {}

    # -- basic queries -------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.nd) - 1

    def keys(self) -> Iterator[Key]:
        for layer in self.nd:
            yield from layer

    def __contains__(self, k: object) -> bool:
        return k in self.dims

    def __len__(self) -> int:
        return len(self.dims)

    def counts(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.nd)

    def nd_simplex(self, k: Key) -> Simplex:
        return Simplex(k, identity(self.dims[k]))

    # -- simplicial operators ----------------------------------------------
    def face_along(self, base: Key, image: tuple[int, ...]) -> Simplex:
        """The face of the non-degenerate ``base`` spanned by the vertex positions ``image``."""
        n = self.dims[base]
        if len(image) == n + 1:
            return Simplex(base, image)  # image is the identity here
        ck = (base, image)
        hit = self._face_cache.get(ck)
        if hit is not None:
            return hit
        present = set(image)
        j = max(i for i in range(n + 1) if i not in present)
        y = self.faces[base][j]
        res = self.apply(y, tuple(v if v < j else v - 1 for v in image))
        self._face_cache[ck] = res
        return res

    def apply(self, x: Simplex, theta: Sequence[int]) -> Simplex:
        """theta^* x for a monotone theta: [m] -> [dim x]."""
        c = [x.eta[t] for t in theta]
        image, eps = factor(c)
        y = self.face_along(x.base, image)
        return Simplex(y.base, tuple(y.eta[e] for e in eps))

    def d(self, x: Simplex, i: int) -> Simplex:
        ck = (x, i)
        hit = self._d_cache.get(ck)
        if hit is None:
            hit = self._d_cache[ck] = self.apply(x, coface(x.dim, i))
        return hit

    def s(self, x: Simplex, i: int) -> Simplex:
        return Simplex(x.base, tuple(x.eta[j] for j in codegeneracy(x.dim, i)))

    def vertices(self, base: Key) -> tuple[Key, ...]:
        hit = self._vert_cache.get(base)
        if hit is None:
            x = self.nd_simplex(base)
            hit = tuple(self.apply(x, (j,)).base for j in range(self.dims[base] + 1))
            self._vert_cache[base] = hit
        return hit

    def simplex_vertices(self, x: Simplex) -> tuple[Key, ...]:
        vs = self.vertices(x.base)
        return tuple(vs[e] for e in x.eta)

    # -- derived structure ---------------------------------------------
    def components(self) -> list[list[Key]]:
        parent: dict[Key, Key] = {v: v for v in (self.nd[0] if self.nd else ())}

        def find(v: Key) -> Key:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for layer in self.nd[1:2]:
            for e in layer:
                a, b = find(self.vertices(e)[0]), find(self.vertices(e)[-1])
                if a != b:
                    parent[max(a, b, key=_sortkey)] = min(a, b, key=_sortkey)
        groups: dict[Key, list[Key]] = {}
        for v in parent:
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values(), key=lambda g: _sortkey(g[0]))

    def subobject_keys_closed(self, keys: Iterable[Key]) -> bool:
        ks = set(keys)
        return all(f.base in ks for k in ks for f in self.faces.get(k, ()))

    def restrict(self, keys: Iterable[Key]) -> SSet:
        ks = set(keys)
        return SSet({k: self.dims[k] for k in ks}, {k: self.faces[k] for k in ks if k in self.faces}, self.meta)

    def structure_equal(self, other: SSet) -> bool:
        return self.dims == other.dims and self.faces == other.faces

    def __repr__(self) -> str:
        return f"{type(self).__name__}(counts={self.counts()})"


class FSSet(SSet):
    """A finite simplicial set with a filtration over the poset ``P``."""

    def __init__(
        self,
        poset: Poset,
        dims: Mapping[Key, int],
        faces: Mapping[Key, Sequence[Simplex]],
        filt: Mapping[Key, PChain],
        meta: Mapping[str, Any] | None = None,
    ) -> None:
        super().__init__(dims, faces, meta)
        self.poset = poset
        self.filt: dict[Key, PChain] = {k: tuple(v) for k, v in filt.items()}

    def filtration(self, x: Simplex) -> PChain:
        f = self.filt[x.base]
        return tuple(f[e] for e in x.eta)

    def restrict(self, keys: Iterable[Key]) -> FSSet:
        ks = set(keys)
        return FSSet(
            self.poset,
            {k: self.dims[k] for k in ks},
            {k: self.faces[k] for k in ks if k in self.faces},
            {k: self.filt[k] for k in ks},
            self.meta,
        )

    def forget(self) -> SSet:
        return SSet(self.dims, self.faces, self.meta)

    def structure_equal(self, other: SSet) -> bool:
        return (
            isinstance(other, FSSet)
            and super().structure_equal(other)
            and self.filt == other.filt
            and self.poset.leq_pairs == other.poset.leq_pairs
        )


def forget(X: FSSet) -> SSet:
    return X.forget()


# ---------------------------------------------------------------------------
# maps


@dataclass
class FMap:
    """A simplicial map determined by the images of non-degenerate simplices."""

    dom: SSet
    cod: SSet
    images: dict[Key, Simplex]
    name: str = ""

    def __call__(self, x: Simplex) -> Simplex:
        y = self.images[x.base]
        return Simplex(y.base, tuple(y.eta[e] for e in x.eta))

    def on_key(self, k: Key) -> Simplex:
        return self.images[k]

    def is_injective(self) -> bool:
        """Monomorphism test: images are non-degenerate and pairwise distinct."""
        seen: set[Key] = set()
        for y in self.images.values():
            if not y.is_nondegenerate() or y.base in seen:
                return False
            seen.add(y.base)
        return True

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FMap) and self.images == other.images


def identity_map(X: SSet) -> FMap:
    return FMap(X, X, {k: X.nd_simplex(k) for k in X.keys()}, "id")


def compose(g: FMap, f: FMap) -> FMap:
    """g after f."""
    return FMap(f.dom, g.cod, {k: g(y) for k, y in f.images.items()})


def inclusion(A: SSet, X: SSet) -> FMap:
    """Inclusion of a sub-object sharing NDKeys with ``X``."""
    return FMap(A, X, {k: X.nd_simplex(k) for k in A.keys()}, "incl")


# ---------------------------------------------------------------------------
# validation


@dataclass
class Violation:
    identity: str
    witness: dict[str, Any]

    def __str__(self) -> str:
        w = ", ".join(f"{k}={v!r}" for k, v in self.witness.items())
        return f"{self.identity}: {w}"


@dataclass
class Report:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, identity: str, **witness: Any) -> None:
        self.violations.append(Violation(identity, witness))

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return "clean"
        return "\n".join(str(v) for v in self.violations)


def validate(X: SSet, degeneracy_depth: int = 1) -> Report:
    """Check face references, simplicial identities and filtration compatibility."""
    rep = Report()
    for k, n in X.dims.items():
        fs = X.faces.get(k, ())
        if n == 0:
            if fs:
                rep.add("vertex has faces", key=k)
            continue
        if len(fs) != n + 1:
            rep.add("face count", key=k, expected=n + 1, got=len(fs))
            continue
        for i, f in enumerate(fs):
            if f.base not in X.dims:
                rep.add("face references unknown simplex", key=k, index=i, base=f.base)
            elif f.dim != n - 1 or max(f.eta, default=-1) != X.dims[f.base] or sorted(set(f.eta)) != list(
                range(X.dims[f.base] + 1)
            ) or list(f.eta) != sorted(f.eta):
                rep.add("face normal form", key=k, index=i, face=f)
    if not rep.ok:
        return rep
    for k, n in X.dims.items():
        if n < 2:
            continue
        x = X.nd_simplex(k)
        fs = X.faces[k]
        for j in range(n + 1):
            for i in range(j):
                a = X.d(fs[j], i)
                b = X.d(fs[i], j - 1)
                if a != b:
                    rep.add("d_i d_j = d_{j-1} d_i", key=k, i=i, j=j, lhs=a, rhs=b)
        # degeneracy interchange on s_j x for the first few levels
        for depth in range(1, degeneracy_depth + 1):
            for j in range(n + 1):
                y = X.s(x, j)
                for i in range(n + 2):
                    lhs = X.d(y, i)
                    if i < j:
                        rhs = X.s(X.d(x, i), j - 1)
                    elif i in (j, j + 1):
                        rhs = x
                    else:
                        rhs = X.s(X.d(x, i - 1), j)
                    if lhs != rhs:
                        rep.add("d_i s_j interchange", key=k, i=i, j=j)
    if isinstance(X, FSSet):
        P = X.poset
        for k, n in X.dims.items():
            f = X.filt.get(k)
            if f is None or len(f) != n + 1 or not P.is_chain(f):
                rep.add("filtration is a chain of matching length", key=k, filt=f)
                continue
            for i, y in enumerate(X.faces.get(k, ())):
                exp = f[:i] + f[i + 1 :]
                if X.filtration(y) != exp:
                    rep.add("filt(d_i x) = d_i filt(x)", key=k, index=i, got=X.filtration(y), expected=exp)
    return rep


def validate_map(f: FMap) -> Report:
    rep = Report()
    X, Y = f.dom, f.cod
    for k, n in X.dims.items():
        y = f.images.get(k)
        if y is None:
            rep.add("missing image", key=k)
            continue
        if y.base not in Y.dims or y.dim != n:
            rep.add("image dimension", key=k, image=y)
            continue
        if isinstance(X, FSSet) and isinstance(Y, FSSet):
            if Y.filtration(y) != X.filt[k]:
                rep.add("filtration preserved", key=k, dom=X.filt[k], cod=Y.filtration(y))
    if not rep.ok:
        return rep
    images, Yd = f.images, Y.d
    for k, fs in X.faces.items():
        y = images[k]
        for i, fx in enumerate(fs):
            img = images[fx.base]
            eta = img.eta
            rhs = Simplex(img.base, tuple([eta[e] for e in fx.eta]))
            lhs = Yd(y, i)
            if lhs != rhs:
                rep.add("d_i f(x) = f(d_i x)", key=k, index=i, lhs=lhs, rhs=rhs)
    return rep


def is_subobject(A: SSet, X: SSet) -> bool:
    if not all(k in X.dims and X.dims[k] == d for k, d in A.dims.items()):
        return False
    if not all(A.faces.get(k, ()) == X.faces.get(k, ()) for k in A.dims):
        return False
    if isinstance(A, FSSet) and isinstance(X, FSSet):
        return all(A.filt[k] == X.filt[k] for k in A.dims)
    return True


# ---------------------------------------------------------------------------
# serialization


def sset_to_json(X: SSet) -> dict[str, Any]:
    data: dict[str, Any] = {}
    if isinstance(X, FSSet):
        data["poset"] = X.poset.to_json()
    data["nd"] = [[key_to_json(k) for k in layer] for layer in X.nd]
    data["faces"] = [
        [key_to_json(k), i, key_to_json(f.base), list(f.word)]
        for layer in X.nd
        for k in layer
        for i, f in enumerate(X.faces.get(k, ()))
    ]
    if isinstance(X, FSSet):
        data["filt"] = [[key_to_json(k), list(X.filt[k])] for layer in X.nd for k in layer]
    if X.meta:
        data["meta"] = X.meta
    return data


def sset_from_json(data: Mapping[str, Any]) -> SSet:
    dims: dict[Key, int] = {}
    for n, layer in enumerate(data["nd"]):
        for k in layer:
            dims[key_from_json(k)] = n
    faces: dict[Key, list[Simplex | None]] = {k: [None] * (d + 1) for k, d in dims.items() if d > 0}
    for k, i, base, word in data["faces"]:
        k, base = key_from_json(k), key_from_json(base)
        faces[k][i] = Simplex(base, word_to_eta(word, dims[base]))
    for k, fs in faces.items():
        if any(f is None for f in fs):
            raise ValueError(f"incomplete face table for {k!r}")
    meta = data.get("meta")
    if "poset" in data:
        P = Poset.from_json(data["poset"])
        filt = {key_from_json(k): tuple(c) for k, c in data["filt"]}
        return FSSet(P, dims, faces, filt, meta)  # type: ignore[arg-type]
    return SSet(dims, faces, meta)  # type: ignore[arg-type]


def dumps(X: SSet) -> str:
    return json.dumps(sset_to_json(X), sort_keys=True, separators=(",", ":"))


def loads(text: str) -> SSet:
    return sset_from_json(json.loads(text))


def relabel(X: SSet, rename: Callable[[Key], Key]) -> SSet:
    """Copy of X with every NDKey renamed (rename must be injective)."""
    dims = {rename(k): d for k, d in X.dims.items()}
    if len(dims) != len(X.dims):
        raise ValueError("relabelling is not injective")
    faces = {rename(k): [Simplex(rename(f.base), f.eta) for f in fs] for k, fs in X.faces.items()}
    if isinstance(X, FSSet):
        return FSSet(X.poset, dims, faces, {rename(k): v for k, v in X.filt.items()}, X.meta)
    return SSet(dims, faces, X.meta)
