"""Property checks shared by the unit tests and the acceptance run."""

from __future__ import annotations

import copy
from collections import Counter
from graphlib import CycleError, TopologicalSorter
from typing import Iterator

from stratsimp.anodyne import (
    PARTNER,
    TYPE_I,
    TYPE_II,
    ancestral_order,
    build_presentation,
    classify_sd_horn,
    ranks,
    rho,
    rho_face_index,
    verify_presentation,
)
from stratsimp.constructions import horn, is_admissible
from stratsimp.fsset import inclusion
from stratsimp.poset import Poset, nerve_simplices
from stratsimp.subdivision import sd_simplex, sd_sub


def admissible_cases(P: Poset, max_len: int) -> Iterator[tuple[tuple[str, ...], int, int]]:
    """Every (φ, k, k') with 2 ≤ len φ ≤ max_len and k' a same-coloured neighbour of k."""
    for n in range(1, max_len):
        for phi in nerve_simplices(P, n):
            for k in range(n + 1):
                if not is_admissible(phi, k):
                    continue
                for kp in (k - 1, k + 1):
                    if 0 <= kp <= n and phi[kp] == phi[k]:
                        yield phi, k, kp


def check_classification(phi, k, kp, P) -> list[str]:
    """Return a list of failures (empty when all properties hold)."""
    bad: list[str] = []
    labels = classify_sd_horn(phi, k, kp, P)
    Y = sd_simplex(phi, P)
    if set(labels) != set(Y.dims):
        bad.append("labels are not total")
    lam = set(sd_sub(horn(phi, k, P), phi).dims)
    if {c for c, lab in labels.items() if lab == "Lambda"} != lam:
        bad.append("Lambda differs from sd of the horn")
    counts = Counter(labels.values())
    for two, one in PARTNER.items():
        if counts[two] != counts[one]:
            bad.append(f"|{two}| != |{one}|")
    type_one = {c for c, lab in labels.items() if lab in TYPE_I}
    images = {}
    for sigma, lab in labels.items():
        if lab not in TYPE_II:
            continue
        tau = rho(phi, k, kp, sigma)
        if labels.get(tau) != PARTNER[lab]:
            bad.append(f"rho sends {lab} to {labels.get(tau)}")
        if tau in images:
            bad.append("rho is not injective")
        images[tau] = sigma
        hits = [l for l in range(len(tau)) if tau[:l] + tau[l + 1 :] == sigma]
        if len(hits) != 1 or hits[0] != rho_face_index(phi, k, kp, sigma):
            bad.append("face index not unique")
        elif not is_admissible(tuple(q for _, q in tau), hits[0]):
            bad.append("recovered horn is not admissible")
    if set(images) != type_one:
        bad.append("rho is not onto the type I simplices")
    graph: dict = {c: set() for c in labels}
    for e in ancestral_order(phi, k, kp, P):
        graph[e.greater].add(e.lesser)
        if labels[e.lesser] == "Lambda" and labels[e.greater] == "Lambda":
            bad.append("edge between horn simplices")
    try:
        tuple(TopologicalSorter(graph).static_order())
    except CycleError:
        bad.append("ancestral order has a cycle")
    return bad


def check_presentation(phi, k, kp, P) -> list[str]:
    bad: list[str] = []
    pres = build_presentation(phi, k, kp, P)
    Y = sd_simplex(phi, P)
    X = sd_sub(horn(phi, k, P), phi)
    result = verify_presentation(X, Y, inclusion(X, Y), pres)
    if not result.ok:
        bad.append("; ".join(result.problems))
    F = ranks(phi, k, kp, P)
    labels = classify_sd_horn(phi, k, kp, P)
    top = max((F[c] for c, lab in labels.items() if lab in TYPE_II), default=0)
    if len(pres.stages) != top:
        bad.append("stage count differs from the top rank")
    if pres.fill_count != sum(1 for lab in labels.values() if lab in TYPE_II):
        bad.append("fill count differs from the number of type II simplices")
    return bad


# ---------------------------------------------------------------------------
# fault injection on presentation certificates


def _tamper_index(p):
    rec = p.stages[0][0]
    rec.horn_index = (rec.horn_index + 1) % len(rec.horn_chain)


def _drop_record(p):
    p.stages[-1].pop()


def _swap_stages(p):
    p.stages.reverse()


def _duplicate(p):
    p.stages[0].append(copy.deepcopy(p.stages[0][0]))


def _bad_attach(p):
    for rec in (r for st in p.stages for r in st):
        pairs = [(a, b) for a in rec.attach for b in rec.attach if a != b and len(a) == len(b)]
        if pairs:
            a, b = pairs[0]
            rec.attach[a] = rec.attach[b]
            return
    raise AssertionError("no record to corrupt")


TAMPERS = [_tamper_index, _drop_record, _duplicate, _bad_attach, _swap_stages]


def check_tampering(phi, k, kp, P) -> list[str]:
    """Every applicable corruption of the certificate must be rejected."""

    pres = build_presentation(phi, k, kp, P)
    Y = sd_simplex(phi, P)
    X = sd_sub(horn(phi, k, P), phi)
    incl = inclusion(X, Y)
    bad = []
    for tamper in TAMPERS:
        if tamper is _swap_stages and len(pres.stages) < 2:
            continue
        p = copy.deepcopy(pres)
        try:
            tamper(p)
        except AssertionError:
            continue  # nothing of that kind to corrupt
        if verify_presentation(X, Y, incl, p).ok:
            bad.append(f"{tamper.__name__} accepted")
    return bad


# ---------------------------------------------------------------------------
# adjunction sd ⊣ Ex


def adjunction_pairs():
    """(name, A, X) pairs with dim A within the default Ex truncation of X."""
    from stratsimp.constructions import boundary, standard_simplex
    from stratsimp.models import cylinder

    P = Poset.chain("p0", "p1")
    D = standard_simplex(("p0", "p0", "p1"), P)
    return [
        ("horn1-in-simplex", horn(("p0", "p0", "p1"), 1, P), D),
        ("edge-in-simplex", standard_simplex(("p0", "p1"), P), D),
        ("simplex-in-simplex", D, D),
        ("boundary-in-simplex", boundary(("p0", "p1", "p1"), P), standard_simplex(("p0", "p1", "p1"), P)),
        ("vertex-in-cylinder", standard_simplex(("p0",), P), cylinder()),
        ("edge-in-cylinder", standard_simplex(("p0", "p1"), P), cylinder()),
        ("horn0-in-horn0", horn(("p0", "p0", "p1"), 0, P), horn(("p0", "p0", "p1"), 0, P)),
    ]


def check_adjunction(A, X) -> list[str]:
    from stratsimp.ex import beta, ex, transpose, transpose_back
    from stratsimp.fsset import validate_map
    from stratsimp.hom import enum_fmaps
    from stratsimp.subdivision import sd

    bad: list[str] = []
    E = ex(X, max(A.dim, X.dim))
    sdA = sd(A)
    left = enum_fmaps(sdA, X)
    right = enum_fmaps(A, E.fsset)
    if len(left) != len(right):
        bad.append(f"|Hom(sd A, X)| = {len(left)} but |Hom(A, Ex X)| = {len(right)}")
    seen = set()
    for f in left:
        g = transpose(f, E)
        if not validate_map(g).ok:
            bad.append("transpose is not a map")
        if transpose_back(g, E, sdA) != f:
            bad.append("transpose_back after transpose is not the identity")
        seen.add(tuple(sorted(g.images.items(), key=repr)))
    for g in right:
        f = transpose_back(g, E, sdA)
        if not validate_map(f).ok or transpose(f, E) != g:
            bad.append("transpose after transpose_back is not the identity")
    if len(seen) != len(left):
        bad.append("transpose is not injective")
    b = beta(X, E)
    if not (validate_map(b).ok and b.is_injective()):
        bad.append("beta is not a monomorphism")
    return bad


def check_beta_natural(A, X) -> list[str]:
    """For the inclusion i: A -> X, the cell of β_X(i(a)) is i composed with the cell of β_A(a)."""
    from stratsimp.ex import beta, ex
    from stratsimp.fsset import inclusion

    i = inclusion(A, X)
    EA, EX = ex(A, A.dim), ex(X, X.dim)
    bA, bX = beta(A, EA), beta(X, EX)
    bad = []
    for a in A.keys():
        lhs = EX.cell_of(bX(i(A.nd_simplex(a))))
        rhs = EA.cell_of(bA(A.nd_simplex(a)))
        if lhs.images != tuple(i(y) for y in rhs.images):
            bad.append(f"naturality fails at {a!r}")
    return bad


# ---------------------------------------------------------------------------
# command line


def cli_cases(workdir) -> list[list[str]]:
    """One invocation per verb (plus a few variants); files are written under ``workdir``."""
    from pathlib import Path

    from stratsimp.anodyne import build_presentation
    from stratsimp.ih import make_cone
    from stratsimp.models import ih_builtin

    workdir = Path(workdir)
    cert = workdir / "cert.json"
    cert.write_text(build_presentation(("p0", "p0", "p1"), 1).dumps())
    cone = workdir / "cone.complex.json"
    cone.write_text(make_cone(ih_builtin("sphere")).dumps())
    return [
        ["info", "builtin:mobius"],
        ["info", "sd:horn:p0,p0,p1:1"],
        ["validate", "builtin:cylinder"],
        ["subdivide", "simplex:p0,p1"],
        ["lastvertex", "simplex:p0,p0,p1"],
        ["classify-horn", "--chain", "p0,p0,p1", "--k", "1"],
        ["present-anodyne", "--chain", "p0,p0,p1", "--k", "0"],
        ["verify-presentation", "--chain", "p0,p0,p1", "--k", "1", str(cert)],
        ["ex", "simplex:p0,p1"],
        ["enum-maps", "simplex:p0,p1", "builtin:cylinder", "--list"],
        ["map-space", "simplex:p0", "builtin:mobius", "--levels", "2"],
        ["spi0", "builtin:pinched_torus"],
        ["spi1", "builtin:mobius", "--chain", "p0"],
        ["holink", "builtin:mobius", "--p", "p0", "--q", "p1"],
        ["refine", "builtin:pinched_torus"],
        ["ih", "builtin:pinched_torus", "--perversity", "0"],
        ["ih", str(cone), "--perversity", '{"S0.0": -1}'],
        ["examples"],
    ]


CLI_DRIVER = """
import io, json, sys
from stratsimp.cli import run
cases = json.loads(sys.argv[1])
for argv in cases:
    for extra in ([], ["--json"]):
        buf = io.StringIO()
        code = run(argv + extra, buf)
        sys.stdout.write(f"== {argv + extra} -> {code}\\n" + buf.getvalue())
"""


def cli_transcript(cases, hash_seed: str) -> str:
    """Run every case in a fresh interpreter with the given hash seed."""
    import json
    import os
    import subprocess
    import sys

    env = {**os.environ, "PYTHONHASHSEED": hash_seed}
    out = subprocess.run(
        [sys.executable, "-c", CLI_DRIVER, json.dumps(cases)], capture_output=True, text=True, env=env, check=True
    )
    return out.stdout


# ---------------------------------------------------------------------------
# admissible horn witnesses


def check_horn_witness(phi, k, P=None) -> list[str]:
    """r: Δ^φ -> Λ and H: Δ¹ ⊗ Δ^φ -> Δ^φ are filtered maps with the expected endpoints."""
    from stratsimp.constructions import horn_retraction
    from stratsimp.fsset import validate_map

    r, H = horn_retraction(phi, k, P)
    D, L = r.dom, r.cod
    bad = []
    if not (validate_map(r).ok and validate_map(H).ok):
        return ["witness maps are not filtered simplicial maps"]
    ends = [{y: H.images[(x, y, path)] for (x, y, path) in H.dom.keys() if x == (eps,)} for eps in (0, 1)]
    incl_r = {key: r.images[key] for key in D.keys()}
    ident = {key: D.nd_simplex(key) for key in D.keys()}
    if (ends[0], ends[1]) not in ((incl_r, ident), (ident, incl_r)):
        bad.append("homotopy endpoints are not incl∘r and id")
    if any(H.images[(x, y, path)].base not in L.dims for x, y, path in H.dom.keys() if y in L.dims):
        bad.append("homotopy does not restrict to the horn")
    moved = [v for v in range(len(phi)) if r.images[(v,)] != D.nd_simplex((v,))]
    if len(moved) != 1 or r.images[(moved[0],)].base != (k,) or phi[moved[0]] != phi[k]:
        bad.append("r does not collapse a same-coloured neighbour onto e_k")
    return bad


# ---------------------------------------------------------------------------
# acceptance log, printed by the terminal summary hook in conftest

ACCEPTANCE: dict[int, str] = {}
