"""Finite posets, chains, nerves and the category of non-degenerate chains."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import ParseError

PChain = tuple[str, ...]

NEG_INF = "-inf"


@dataclass(frozen=True)
class Poset:
    """A finite poset given by element ids and the (reflexive) order relation."""

    elements: tuple[str, ...]
    leq_pairs: frozenset[tuple[str, str]]
    _rank: dict[str, int] = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def from_covers(cls, elements: Iterable[str], covers: Iterable[tuple[str, str]]) -> Poset:
        covers = [tuple(c) for c in covers]
        elems = sorted(set(elements) | {x for c in covers for x in c})
        up: dict[str, set[str]] = {e: {e} for e in elems}
        for a, b in covers:
            up[a].add(b)
        # transitive closure; posets are tiny so a fixpoint loop is fine
        changed = True
        while changed:
            changed = False
            for a in elems:
                new = set().union(*(up[b] for b in up[a]))
                if new != up[a]:
                    up[a] = new
                    changed = True
        for a in elems:
            for b in up[a]:
                if a != b and a in up[b]:
                    raise ValueError(f"cycle in order relation between {a!r} and {b!r}")
        pairs = frozenset((a, b) for a in elems for b in up[a])
        return cls(tuple(elems), pairs)

    @classmethod
    def chain(cls, *names: str) -> Poset:
        return cls.from_covers(names, zip(names, names[1:]))

    def __post_init__(self) -> None:
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate element ids")
        order = self.linear_extension_uncached()
        self._rank.update({e: i for i, e in enumerate(order)})

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.leq_pairs

    def lt(self, a: str, b: str) -> bool:
        return a != b and (a, b) in self.leq_pairs

    def __contains__(self, e: object) -> bool:
        return e in self._rank

    def __len__(self) -> int:
        return len(self.elements)

    def covers(self) -> list[tuple[str, str]]:
        out = []
        for a, b in sorted(self.leq_pairs):
            if a == b:
                continue
            if not any(self.lt(a, c) and self.lt(c, b) for c in self.elements):
                out.append((a, b))
        return out

    def linear_extension_uncached(self) -> list[str]:
        remaining = set(self.elements)
        out: list[str] = []
        while remaining:
            ready = sorted(e for e in remaining if not any(self.lt(o, e) for o in remaining))
            out.append(ready[0])
            remaining.remove(ready[0])
        return out

    def rank(self, e: str) -> int:
        """Position of ``e`` in the canonical linear extension (lexicographic tie-breaking)."""
        return self._rank[e]

    def linear_extension(self) -> list[str]:
        return sorted(self.elements, key=self.rank)

    def is_chain(self, phi: Sequence[str]) -> bool:
        return len(phi) > 0 and all(e in self for e in phi) and all(
            self.leq(a, b) for a, b in zip(phi, phi[1:])
        )

    def check_chain(self, phi: Sequence[str]) -> PChain:
        phi = tuple(phi)
        if not self.is_chain(phi):
            raise ValueError(f"not a nondecreasing chain of the poset: {list(phi)}")
        return phi

    def to_text(self) -> str:
        lines = [f"{a} < {b}" for a, b in self.covers()]
        touched = {x for c in self.covers() for x in c}
        lines += [e for e in self.elements if e not in touched]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "covers": [list(c) for c in self.covers()]}

    @classmethod
    def from_json(cls, data: dict) -> Poset:
        return cls.from_covers(data["elements"], [tuple(c) for c in data["covers"]])


def parse_poset(text: str) -> Poset:
    """Parse lines of the form ``a < b`` (isolated elements alone on a line; ``#`` comments)."""
    elems: list[str] = []
    covers: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split("<")]
        if any(not p or len(p.split()) != 1 for p in parts):
            raise ParseError(f"line {lineno}: cannot parse {raw!r}")
        elems.extend(parts)
        covers.extend(zip(parts, parts[1:]))
    try:
        return Poset.from_covers(elems, covers)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def nerve_simplices(P: Poset, n: int, nondegenerate: bool = False) -> list[PChain]:
    """Nondecreasing (n+1)-chains of P in canonical order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    order = P.linear_extension()
    out: list[PChain] = []

    def grow(prefix: list[str]) -> None:
        if len(prefix) == n + 1:
            out.append(tuple(prefix))
            return
        for e in order:
            if not prefix or (P.lt(prefix[-1], e) if nondegenerate else P.leq(prefix[-1], e)):
                prefix.append(e)
                grow(prefix)
                prefix.pop()

    grow([])
    return out


def nondegenerate_chains(P: Poset) -> list[PChain]:
    out: list[PChain] = []
    n = 0
    while True:
        layer = nerve_simplices(P, n, nondegenerate=True)
        if not layer:
            return out
        out.extend(layer)
        n += 1


@dataclass(frozen=True)
class RPCategory:
    objects: tuple[PChain, ...]
    morphisms: tuple[tuple[PChain, PChain], ...]  # includes identities

    def non_identity(self) -> list[tuple[PChain, PChain]]:
        return [(a, b) for a, b in self.morphisms if a != b]


def rp_category(P: Poset) -> RPCategory:
    objs = nondegenerate_chains(P)
    mors = [(a, b) for a in objs for b in objs if set(a) <= set(b)]
    return RPCategory(tuple(objs), tuple(mors))


def cone_poset(P: Poset, minimum: str = NEG_INF) -> Poset:
    if minimum in P:
        raise ValueError(f"element id {minimum!r} already used")
    covers = [(minimum, e) for e in P.elements] + list(P.covers())
    return Poset.from_covers([minimum, *P.elements], covers)


def chains_of_length(P: Poset, max_len: int) -> Iterator[PChain]:
    for n in range(max_len):
        yield from nerve_simplices(P, n)


def all_posets_up_to(size: int) -> Iterator[Poset]:
    """Every labelled poset on elements p0..p{m-1}, m <= size (for exhaustive sweeps)."""
    for m in range(1, size + 1):
        names = [f"p{i}" for i in range(m)]
        pairs = list(itertools.combinations(names, 2))
        seen: set[frozenset] = set()
        for mask in range(1 << len(pairs)):
            covers = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            P = Poset.from_covers(names, covers)
            if P.leq_pairs not in seen:
                seen.add(P.leq_pairs)
                yield P
