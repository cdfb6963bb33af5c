"""Acceptance run: one pass/fail line per criterion, with its time bound.

Run with ``pytest tests/test_acceptance.py`` (the lines appear in the
terminal summary) or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import time
import warnings
from pathlib import Path

import pytest

from stratsimp.constructions import is_admissible, is_admissible_via_degeneracy
from stratsimp.corpus import SUFFIX, corpus, write_corpus
from stratsimp.hom import default_budget
from stratsimp.homotopy import holink_index, spi0, spi1
from stratsimp.ih import (
    Perversity,
    PerversityWarning,
    closed_star,
    delete_vertex,
    intersection_homology,
    link,
    make_cone,
    mayer_vietoris,
)
from stratsimp.models import builtin, ih_builtin
from stratsimp.poset import Poset, all_posets_up_to, nerve_simplices
from stratsimp.subdivision import sd_simplex

from checks import (
    ACCEPTANCE,
    adjunction_pairs,
    admissible_cases,
    check_adjunction,
    check_beta_natural,
    check_classification,
    check_horn_witness,
    check_presentation,
    check_tampering,
    cli_cases,
    cli_transcript,
)
from oracles import classical_sd_counts, homology_oracle, sd_pair_chains

P2 = Poset.chain("p0", "p1")
P3 = Poset.chain("p0", "p1", "p2")


def criterion(number: int, title: str, bound: float):
    """Time the check, enforce the bound and record a one-line verdict."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                took = time.perf_counter() - start
                ACCEPTANCE[number] = f"FAIL  {number:>2}. {title} ({took:.1f}s, bound {bound:g}s): {type(exc).__name__}: {exc}"
                raise
            took = time.perf_counter() - start
            ok = took < bound
            verdict = "PASS" if ok else "FAIL"
            ACCEPTANCE[number] = f"{verdict}  {number:>2}. {title} ({took:.1f}s, bound {bound:g}s): {detail}"
            assert ok, f"took {took:.1f}s, bound {bound}s"

        return run

    return wrap


@criterion(1, "admissibility equivalence and horn witnesses", 10)
def test_criterion_01_admissibility():
    total = admissible = 0
    for P in all_posets_up_to(3):
        for n in range(1, 6):
            for phi in nerve_simplices(P, n):
                for k in range(n + 1):
                    total += 1
                    a = is_admissible(phi, k)
                    assert a == is_admissible_via_degeneracy(phi, k), (phi, k)
                    if a:
                        admissible += 1
                        assert check_horn_witness(phi, k, P) == [], (phi, k)
    return f"{total} cases agree, {admissible} witnesses validate"


@criterion(2, "subdivision against pair-chain and barycentric oracles", 30)
def test_criterion_02_subdivision():
    count = 0
    for n in range(4):
        for phi in nerve_simplices(P3, n):
            S = sd_simplex(phi, P3)
            assert {d: set(layer) for d, layer in enumerate(S.nd)} == sd_pair_chains(phi, P3), phi
            count += 1
        assert list(sd_simplex(("p0",) * (n + 1), P3).counts()) == classical_sd_counts(n)
    return f"{count} chains of length <= 4 match; constant chains match barycentric counts"


@criterion(3, "classification, rho bijection, face recovery, acyclicity", 120)
def test_criterion_03_classification():
    cases = list(admissible_cases(P2, 4))
    for phi, k, kp in cases:
        assert check_classification(phi, k, kp, P2) == [], (phi, k, kp)
    return f"{len(cases)} (phi, k, k') cases"


@criterion(4, "presentation replay and fault injection", 120)
def test_criterion_04_presentations():
    cases = list(admissible_cases(P2, 4))
    for phi, k, kp in cases:
        assert check_presentation(phi, k, kp, P2) == [], (phi, k, kp)
        assert check_tampering(phi, k, kp, P2) == [], (phi, k, kp)
    return f"{len(cases)} certificates replay; every tampered certificate rejected"


@criterion(5, "sd / Ex adjunction and the unit", 60)
def test_criterion_05_adjunction():
    pairs = adjunction_pairs()
    names = [p[0] for p in pairs]
    assert "horn1-in-simplex" in names and len(pairs) >= 5
    for name, A, X in pairs:
        assert check_adjunction(A, X) == [], name
        if name in ("horn1-in-simplex", "simplex-in-simplex", "boundary-in-simplex", "horn0-in-horn0"):
            assert check_beta_natural(A, X) == [], name
    return f"{len(pairs)} pairs: bijection, mutual inverses, unit is a natural monomorphism"


@criterion(6, "s-pi-0 of the cylinder and Mobius models is terminal", 60)
def test_criterion_06_spi0():
    for name in ("cylinder", "mobius"):
        D = spi0(builtin(name))
        assert D.is_terminal(), name
    return "one class at [p0], [p1], [p0,p1] for both models"


@criterion(7, "stratum fundamental groups are Z", 60)
def test_criterion_07_strata_pi1():
    got = []
    for name in ("cylinder", "mobius"):
        for p in ("p0", "p1"):
            G = spi1(builtin(name), (p,)).group
            assert (G.rank, G.torsion) == (1, ()), (name, p, str(G))
            got.append(f"{name}/{p}={G}")
    return "stage 0: " + ", ".join(got)


@criterion(8, "holink restriction index", 1800)
def test_criterion_08_holink():
    out = []
    for name, order in (("mobius", 2), ("cylinder", 1)):
        res = holink_index(builtin(name), "p0", "p1", stage=0)
        assert res.cokernel.order == order, (name, str(res.cokernel))
        out.append(f"{name} coker={res.cokernel} (order {res.cokernel.order})")
    return f"Ex stage 0, mapping-space levels 0..2, budget {default_budget()}: " + "; ".join(out)


def _quiet(fn, *args):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PerversityWarning)
        return fn(*args)


def _cone_expectation(L_groups, d: int, p: int):
    out = []
    for i in range(d + 1):
        if i < d - 1 - p:
            out.append(L_groups[i] if i < len(L_groups) else (0, []))
        else:
            out.append((1, []) if i == 0 else (0, []))
    return out


@criterion(9, "intersection homology: trivial filtration, cone formula, Mayer-Vietoris", 120)
def test_criterion_09_intersection_homology():
    for name in ("circle", "two_circles", "sphere", "torus", "projective_plane"):
        X = ih_builtin(name)
        H = intersection_homology(X, 0)
        assert [(g.rank, list(g.torsion)) for g in H.groups] == homology_oracle(list(X.all_simplices()), X.formal_dim), name
    cones = 0
    for name in ("circle", "two_circles", "sphere"):
        L = ih_builtin(name)
        C = make_cone(L)
        d = C.formal_dim
        L_groups = homology_oracle(list(L.all_simplices()), L.formal_dim)
        for p in range(-1, d):
            H = intersection_homology(C, _quiet(Perversity.by_level, C, {0: p}))
            assert [(g.rank, list(g.torsion)) for g in H.groups] == _cone_expectation(L_groups, d, p), (name, p)
            cones += 1
    X = ih_builtin("pinched_torus")
    for p in (-1, 0, 1):
        mv = _quiet(mayer_vietoris, X, closed_star(X, 0), delete_vertex(X, 0), link(X, 0), {0: p})
        assert mv.ok, (p, mv.ranks)
    return f"5 complexes exact, {cones} cone cases, Mayer-Vietoris sum 0 for p in -1..1"


@criterion(10, "CLI byte stability and corpus round trip", 60)
def test_criterion_10_determinism(tmp_path):
    cases = cli_cases(tmp_path)
    first = cli_transcript(cases, "0")
    second = cli_transcript(cases, "31337")
    assert first == second
    assert all("-> 0\n" in line + "\n" for line in first.splitlines() if line.startswith("== "))
    entries = corpus()
    for e in entries:
        assert e.reload(e.text) == e.text, e.name
    write_corpus(tmp_path / "corpus")
    for e in entries:
        on_disk = (tmp_path / "corpus" / f"{e.name}{SUFFIX[e.kind]}").read_text()
        assert on_disk.endswith("\n") and e.reload(on_disk.rstrip("\n")) == e.text, e.name
    return f"{len(cases)} commands x 2 formats identical across hash seeds; {len(entries)} corpus files round-trip"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
