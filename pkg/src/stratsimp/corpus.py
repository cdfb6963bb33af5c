"""The serialized example corpus: every shipped format, each with a loader."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import fsset, ih
from .anodyne import build_presentation, presentation_from_json
from .constructions import boundary, horn, outer_skeleton, standard_simplex
from .ex import ex
from .models import BUILTINS, IH_BUILTINS, builtin, ih_builtin, mapping_cylinder
from .poset import Poset, all_posets_up_to, parse_poset
from .subdivision import sd, sd_simplex


@dataclass
class Entry:
    name: str
    kind: str  # fsset | presentation | complex | poset-text | poset-json
    text: str
    reload: Callable[[str], str]  # parse then serialize again


def _fs(X: fsset.SSet) -> str:
    return fsset.dumps(X)


def corpus() -> list[Entry]:
    P2 = Poset.chain("p0", "p1")
    out: list[Entry] = []

    def add_fs(name: str, X: fsset.SSet) -> None:
        out.append(Entry(name, "fsset", _fs(X), lambda t: fsset.dumps(fsset.loads(t))))

    for name in sorted(BUILTINS):
        add_fs(f"builtin_{name}", builtin(name))
    add_fs("cylinder_4", mapping_cylinder(4, 4))
    for phi in (("p0",), ("p0", "p1"), ("p0", "p0", "p1"), ("p0", "p1", "p1"), ("p0", "p0", "p1", "p1")):
        tag = "_".join(phi)
        add_fs(f"simplex_{tag}", standard_simplex(phi, P2))
        add_fs(f"sd_simplex_{tag}", sd_simplex(phi, P2))
        if len(phi) > 1:
            add_fs(f"boundary_{tag}", boundary(phi, P2))
    add_fs("outer_skeleton_p0_p1", outer_skeleton(("p0", "p1"), P2))
    for phi, k in ((("p0", "p0", "p1"), 0), (("p0", "p0", "p1"), 1), (("p0", "p1", "p1"), 2), (("p0", "p0", "p1", "p1"), 1)):
        tag = "_".join(phi) + f"_k{k}"
        H = horn(phi, k, P2)
        add_fs(f"horn_{tag}", H)
        add_fs(f"sd_horn_{tag}", sd(H))
        pres = build_presentation(phi, k, None, P2)
        Y = sd_simplex(phi, P2)
        out.append(
            Entry(
                f"presentation_{tag}",
                "presentation",
                pres.dumps(),
                lambda t, Y=Y: presentation_from_json(json.loads(t), Y).dumps(),
            )
        )
    add_fs("ex_simplex_p0_p1", ex(standard_simplex(("p0", "p1"), P2)).fsset)
    add_fs("ex_horn_p0_p0_p1_k1", ex(horn(("p0", "p0", "p1"), 1, P2), 2).fsset)
    for name in sorted(IH_BUILTINS):
        out.append(Entry(f"complex_{name}", "complex", ih_builtin(name).dumps(), lambda t: ih.loads(t).dumps()))
    out.append(Entry("complex_cone_circle", "complex", ih.make_cone(ih_builtin("circle")).dumps(), lambda t: ih.loads(t).dumps()))
    out.append(Entry("complex_sd_pinched_torus", "complex", ih.subdivide(ih_builtin("pinched_torus")).dumps(), lambda t: ih.loads(t).dumps()))
    for i, P in enumerate(all_posets_up_to(3)):
        out.append(Entry(f"poset_{i:02d}", "poset-text", P.to_text(), lambda t: parse_poset(t).to_text()))
        out.append(
            Entry(f"poset_{i:02d}_json", "poset-json", json.dumps(P.to_json(), sort_keys=True), lambda t: json.dumps(Poset.from_json(json.loads(t)).to_json(), sort_keys=True))
        )
    return out


SUFFIX = {"fsset": ".fsset.json", "presentation": ".cert.json", "complex": ".complex.json", "poset-text": ".poset", "poset-json": ".poset.json"}


def write_corpus(directory: Path) -> list[str]:
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for e in corpus():
        path = directory / f"{e.name}{SUFFIX[e.kind]}"
        path.write_text(e.text if e.text.endswith("\n") else e.text + "\n")
        written.append(str(path))
    return written
