"""Built-in example objects over the two-element chain p0 < p1."""

from __future__ import annotations

from typing import Callable

from .constructions import ordered_complex
from .fsset import FSSet
from .poset import Poset

TWO = Poset.chain("p0", "p1")


def mapping_cylinder(m: int = 3, M: int | None = None) -> FSSet:
    """Mapping cylinder of the M/m-fold covering of an m-gon by an M-gon.

    Core vertices 0..m-1 sit at p0, rim vertices m..m+M-1 at p1. With M = m
    this is an annulus; with M = 2m it is a Möbius band whose core circle is
    the lower stratum.
    """
    M = m if M is None else M
    if m < 3 or M % m:
        raise ValueError("need m >= 3 and m | M")
    a = list(range(m))
    b = [m + j for j in range(M)]
    tris = []
    for j in range(M):
        tris.append(sorted((a[j % m], b[j], b[(j + 1) % M])))
        tris.append(sorted((a[j % m], a[(j + 1) % m], b[(j + 1) % M])))
    filt = {v: "p0" for v in a} | {v: "p1" for v in b}
    name = "cylinder" if M == m else "mobius" if M == 2 * m else f"cylinder_{m}_{M}"
    return ordered_complex(TWO, tris, filt, {"object": name, "m": m, "M": M})


def cylinder(m: int = 3) -> FSSet:
    return mapping_cylinder(m, m)


def mobius(m: int = 3) -> FSSet:
    return mapping_cylinder(m, 2 * m)


def pinched_torus(m: int = 3) -> FSSet:
    """A sphere with two points identified; the singular point 0 is at p0.

    The vertex 0 is coned onto two m-gons, which are joined by an annulus.
    """
    if m < 3:
        raise ValueError("need m >= 3")
    a = [1 + i for i in range(m)]
    b = [1 + m + i for i in range(m)]
    tris = []
    for ring in (a, b):
        tris += [sorted((0, ring[i], ring[(i + 1) % m])) for i in range(m)]
    for j in range(m):
        tris.append(sorted((a[j], b[j], b[(j + 1) % m])))
        tris.append(sorted((a[j], a[(j + 1) % m], b[(j + 1) % m])))
    filt = {0: "p0"} | {v: "p1" for v in a + b}
    return ordered_complex(TWO, tris, filt, {"object": "pinched_torus", "m": m})


BUILTINS: dict[str, Callable[[], FSSet]] = {
    "cylinder": cylinder,
    "mobius": mobius,
    "pinched_torus": pinched_torus,
}


def builtin(name: str) -> FSSet:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown built-in model {name!r}; have {sorted(BUILTINS)}") from None


# ---------------------------------------------------------------------------
# filtered complexes for intersection homology


def _ih():
    from . import ih

    return ih


def polygon(labels: list) -> list[tuple]:
    return [(labels[i], labels[(i + 1) % len(labels)]) for i in range(len(labels))]


def ih_circle():
    return _ih().trivially_filtered(["a", "b", "c"], polygon(["a", "b", "c"]))


def ih_two_circles():
    return _ih().trivially_filtered(
        ["a0", "a1", "a2", "b0", "b1", "b2"], polygon(["a0", "a1", "a2"]) + polygon(["b0", "b1", "b2"])
    )


def ih_sphere():
    verts = ["a", "b", "c", "d"]
    return _ih().trivially_filtered(verts, [t for t in __import__("itertools").combinations(verts, 3)])


def ih_torus():
    """The 7-vertex torus."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return _ih().trivially_filtered(list(range(7)), tris)


def ih_projective_plane():
    """The 6-vertex projective plane."""
    tris = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1), (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]
    return _ih().trivially_filtered(list(range(6)), tris)


def ih_pinched_torus(m: int = 3):
    """Same triangulation as ``pinched_torus``; vertex 0 is the singular point (level 0)."""
    X = pinched_torus(m)
    verts = list(range(2 * m + 1))
    return _ih().FilteredComplex.build(verts, X.nd[2], 2, {0: 0})


IH_BUILTINS: dict[str, Callable] = {
    "circle": ih_circle,
    "two_circles": ih_two_circles,
    "sphere": ih_sphere,
    "torus": ih_torus,
    "projective_plane": ih_projective_plane,
    "pinched_torus": ih_pinched_torus,
}


def ih_builtin(name: str):
    try:
        return IH_BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown built-in complex {name!r}; have {sorted(IH_BUILTINS)}") from None
