"""Command line front-end: ``stratsimp <verb> ...``.

Objects are read from JSON files written by this package, or named inline:

* ``builtin:<name>``: one of the shipped models (see ``stratsimp examples``),
* ``simplex:p0,p0,p1``, ``boundary:p0,p1``, ``horn:p0,p0,p1:1``: standard objects
  over the poset given by ``--poset`` (default: the chain through the listed elements),
* ``sd:<object>``: the filtered subdivision of another inline object.

Exit status: 0 success, 1 negative verdict, 2 bad input, 3 budget exceeded,
4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .anodyne import (
    TYPE_I,
    TYPE_II,
    build_presentation,
    classify_sd_horn,
    default_k_prime,
    presentation_from_json,
    verify_presentation,
)
from .constructions import boundary, horn, standard_simplex
from .errors import BudgetExceeded, InvariantBreach, ParseError
from .ex import ex
from .fsset import FSSet, inclusion, key_to_json, sset_from_json, sset_to_json, validate
from .hom import BUDGET_ENV, SimplexIndex, default_budget, iter_fmaps
from .homotopy import (
    edge_path_pi1,
    holink_index,
    map_space,
    refine_stratification,
    spi0,
    spi1,
)
from .ih import FilteredComplex, Perversity, PerversityWarning, intersection_homology
from .ih import loads as ih_loads
from .models import BUILTINS, IH_BUILTINS, builtin, ih_builtin
from .poset import Poset, parse_poset
from .subdivision import last_vertex_filtered, sd, sd_simplex, sd_sub


class Report:
    """Accumulates a text table and a JSON payload for one command."""

    def __init__(self, verb: str, params: dict[str, Any]) -> None:
        self.verb = verb
        self.params = params
        self.lines: list[str] = []
        self.data: dict[str, Any] = {}

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def render(self, as_json: bool) -> str:
        if as_json:
            payload = {"command": self.verb, "params": self.params, "result": self.data, "version": __version__}
            return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
        head = f"# stratsimp {self.verb} " + " ".join(f"{k}={_fmt(v)}" for k, v in sorted(self.params.items()))
        return "\n".join([head.rstrip(), *self.lines]) + "\n"


def _fmt(v: Any) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    return str(v)


# ---------------------------------------------------------------------------
# argument helpers


def _chain(text: str) -> tuple[str, ...]:
    parts = tuple(p.strip() for p in text.split(",") if p.strip())
    if not parts:
        raise ParseError(f"empty chain {text!r}")
    return parts


def _poset_for(args: argparse.Namespace, phi: Sequence[str] | None = None) -> Poset:
    if getattr(args, "poset", None):
        src = args.poset
        text = Path(src).read_text() if Path(src).exists() else src.replace(";", "\n")
        return parse_poset(text)
    if phi is None:
        raise ParseError("a poset is needed (--poset)")
    names = list(dict.fromkeys(phi))
    return Poset.from_covers(names, list(zip(names, names[1:])))


def load_object(spec: str, args: argparse.Namespace) -> FSSet:
    if spec.startswith("builtin:"):
        try:
            return builtin(spec.split(":", 1)[1])
        except KeyError as exc:
            raise ParseError(str(exc.args[0])) from None
    if spec.startswith("sd:"):
        return sd(load_object(spec[3:], args))
    for prefix, make in (("simplex:", standard_simplex), ("boundary:", boundary)):
        if spec.startswith(prefix):
            phi = _chain(spec[len(prefix) :])
            return make(phi, _poset_for(args, phi))
    if spec.startswith("horn:"):
        body = spec[5:]
        if ":" not in body:
            raise ParseError("horn needs the form horn:<chain>:<k>")
        c, k = body.rsplit(":", 1)
        phi = _chain(c)
        return horn(phi, _int(k), _poset_for(args, phi))
    path = Path(spec)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise ParseError(f"no such file: {spec}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{spec}: invalid JSON ({exc})") from None
    try:
        X = sset_from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{spec}: not a filtered simplicial set ({exc})") from None
    if not isinstance(X, FSSet):
        raise ParseError(f"{spec}: object carries no filtration")
    return X


def load_complex(spec: str) -> FilteredComplex:
    if spec.startswith("builtin:"):
        try:
            return ih_builtin(spec.split(":", 1)[1])
        except KeyError as exc:
            raise ParseError(str(exc.args[0])) from None
    try:
        return ih_loads(Path(spec).read_text())
    except FileNotFoundError:
        raise ParseError(f"no such file: {spec}") from None


def _int(s: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise ParseError(f"not an integer: {s!r}") from None


def _counts(X: FSSet) -> list[int]:
    return list(X.counts())


def _budget(args: argparse.Namespace) -> int:
    return args.budget if args.budget is not None else default_budget()


# ---------------------------------------------------------------------------
# verbs


def cmd_info(args: argparse.Namespace, rep: Report) -> int:
    X = load_object(args.object, args)
    ok = validate(X).ok
    rep.data = {
        "object": X.meta.get("object", "") if X.meta else "",
        "poset": X.poset.to_json(),
        "nd_counts": _counts(X),
        "dim": X.dim,
        "valid": ok,
    }
    rep.line(f"object: {rep.data['object']}")
    rep.line(f"poset: {'; '.join(X.poset.to_text().splitlines())}")
    rep.line(f"dim: {X.dim}")
    for n, c in enumerate(_counts(X)):
        rep.line(f"nd[{n}]: {c}")
    rep.line(f"valid: {'yes' if ok else 'no'}")
    return 0


def cmd_validate(args: argparse.Namespace, rep: Report) -> int:
    X = load_object(args.object, args)
    r = validate(X)
    rep.data = {"valid": r.ok, "violations": [str(v) for v in r.violations]}
    rep.line("valid" if r.ok else "invalid")
    for v in r.violations:
        rep.line(f"  {v}")
    return 0 if r.ok else 1


def cmd_subdivide(args: argparse.Namespace, rep: Report) -> int:
    X = load_object(args.object, args)
    Y = sd(X)
    rep.data = {"nd_counts": _counts(Y), "object": sset_to_json(Y)}
    for n, c in enumerate(_counts(Y)):
        rep.line(f"nd[{n}]: {c}")
    if args.output:
        Path(args.output).write_text(json.dumps(sset_to_json(Y), sort_keys=True, separators=(",", ":")) + "\n")
        rep.line(f"written: {args.output}")
    return 0


def cmd_lastvertex(args: argparse.Namespace, rep: Report) -> int:
    X = load_object(args.object, args)
    f = last_vertex_filtered(X)
    rows = []
    for k in f.dom.keys():
        y = f.images[k]
        rows.append([key_to_json(k), key_to_json(y.base), list(y.word)])
    rep.data = {"images": rows}
    for k, b, w in rows:
        rep.line(f"{json.dumps(k)} -> {json.dumps(b)}" + (f" s{w}" if w else ""))
    return 0


def _horn_args(args: argparse.Namespace) -> tuple[tuple[str, ...], int, int, Poset]:
    phi = _chain(args.chain)
    P = _poset_for(args, phi)
    kp = args.k_prime if args.k_prime is not None else default_k_prime(phi, args.k)
    return phi, args.k, kp, P


def cmd_classify(args: argparse.Namespace, rep: Report) -> int:
    phi, k, kp, P = _horn_args(args)
    labels = classify_sd_horn(phi, k, kp, P)
    counts = {lab: 0 for lab in ("Lambda", *TYPE_II, *TYPE_I)}
    for lab in labels.values():
        counts[lab] += 1
    rep.params["k_prime"] = kp
    rep.data = {
        "counts": counts,
        "type_II": sum(counts[c] for c in TYPE_II),
        "type_I": sum(counts[c] for c in TYPE_I),
        "labels": [[key_to_json(c), lab] for c, lab in sorted(labels.items(), key=lambda t: (len(t[0]), repr(t[0])))],
    }
    for lab, c in counts.items():
        rep.line(f"{lab:>6}: {c}")
    rep.line(f"type II: {rep.data['type_II']}  type I: {rep.data['type_I']}")
    return 0


def cmd_present(args: argparse.Namespace, rep: Report) -> int:
    phi, k, kp, P = _horn_args(args)
    pres = build_presentation(phi, k, kp, P)
    rep.params["k_prime"] = kp
    rep.data = {"presentation": pres.to_json(), "stage_sizes": [len(s) for s in pres.stages]}
    for i, st in enumerate(pres.stages):
        rep.line(f"stage {i}: {len(st)} horn fillings")
    rep.line(f"total: {pres.fill_count}")
    if args.output:
        Path(args.output).write_text(pres.dumps() + "\n")
        rep.line(f"written: {args.output}")
    return 0


def cmd_verify(args: argparse.Namespace, rep: Report) -> int:
    phi = _chain(args.chain)
    P = _poset_for(args, phi)
    Y = sd_simplex(phi, P)
    X = sd_sub(horn(phi, args.k, P), phi)
    try:
        data = json.loads(Path(args.certificate).read_text())
    except FileNotFoundError:
        raise ParseError(f"no such file: {args.certificate}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"certificate is not JSON ({exc})") from None
    if "presentation" in data and "stages" not in data:
        data = data["presentation"]
    try:
        pres = presentation_from_json(data, Y)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed certificate ({exc})") from None
    res = verify_presentation(X, Y, inclusion(X, Y), pres)
    rep.data = {"accepted": res.ok, "problems": res.problems}
    rep.line("accepted" if res.ok else "rejected")
    for p in res.problems:
        rep.line(f"  {p}")
    return 0 if res.ok else 1


def cmd_ex(args: argparse.Namespace, rep: Report) -> int:
    X = load_object(args.object, args)
    cap = args.dim_cap if args.dim_cap is not None else X.dim + 1
    rep.params["dim_cap"] = cap
    E = ex(X, cap, _budget(args))
    shapes = {"|".join(s): n for s, n in sorted(E.total_cells.items())}
    rep.data = {"nd_counts": _counts(E.fsset), "cells_by_shape": shapes}
    for n, c in enumerate(_counts(E.fsset)):
        rep.line(f"nd[{n}]: {c}")
    for s, n in shapes.items():
        rep.line(f"cells[{s}]: {n}")
    return 0


def cmd_enum_maps(args: argparse.Namespace, rep: Report) -> int:
    A = load_object(args.source, args)
    X = load_object(args.target, args)
    maps = []
    for f in iter_fmaps(A, X, SimplexIndex(X, max(A.dim, 0)), _budget(args)):
        maps.append([[key_to_json(k), key_to_json(f.images[k].base), list(f.images[k].word)] for k in A.keys()])
    rep.data = {"count": len(maps), "maps": maps if args.list else []}
    rep.line(f"maps: {len(maps)}")
    if args.list:
        for i, m in enumerate(maps):
            rep.line(f"[{i}] " + " ".join(f"{json.dumps(a)}->{json.dumps(b)}" + (f"s{w}" if w else "") for a, b, w in m))
    return 0


def cmd_map_space(args: argparse.Namespace, rep: Report) -> int:
    A = load_object(args.source, args)
    X = load_object(args.target, args)
    S = map_space(A, X, args.levels, _budget(args))
    comps = len(set(S.components())) if args.levels >= 1 else None
    rep.data = {"levels": list(S.counts()), "components": comps}
    for n, c in enumerate(S.counts()):
        rep.line(f"level[{n}]: {c}")
    if comps is not None:
        rep.line(f"components: {comps}")
    return 0


def _stage_note(k: int) -> str:
    return f"stage-{k} approximation (Ex^{k})"


def cmd_spi0(args: argparse.Namespace, rep: Report) -> int:
    X = load_object(args.object, args)
    D = spi0(X, budget=_budget(args))
    rep.data = D.to_json()
    rep.data["terminal"] = D.is_terminal()
    for o in D.objects:
        rep.line(f"[{','.join(o)}]: {D.size(o)} class(es)")
    for (psi, phi), m in sorted(D.maps.items()):
        pairs = " ".join(f"{a}->{b}" for a, b in sorted(m.items()))
        rep.line(f"[{','.join(phi)}] -> [{','.join(psi)}]: {pairs}")
    return 0


def cmd_spi1(args: argparse.Namespace, rep: Report) -> int:
    X = load_object(args.object, args)
    phi = _chain(args.chain)
    rep.params["dim_cap"] = args.dim_cap if args.dim_cap is not None else len(phi) + 1
    s = spi1(X, phi, stage=args.ex_stage, budget=_budget(args), dim_cap=args.dim_cap)
    if args.base:
        s = _rebase(s, args.base)
    pres = s.pi1.presentation
    ab = pres.abelianization()
    rep.data = {
        "stage": s.stage,
        "note": _stage_note(s.stage),
        "levels": list(s.space.counts()),
        "base": s.pi1.base,
        "presentation": pres.to_json(),
    }
    rep.line(_stage_note(s.stage))
    rep.line(f"levels: {list(s.space.counts())}")
    rep.line(f"generators: {len(pres.generators)}  relators: {len(pres.relators)}")
    rep.line(f"abelianization: {ab}")
    return 0


def _rebase(s: Any, base: int) -> Any:
    if not 0 <= base < len(s.space.points[0]):
        raise ParseError(f"base vertex {base} out of range")
    s.pi1 = edge_path_pi1(s.space, base)
    return s


def cmd_holink(args: argparse.Namespace, rep: Report) -> int:
    X = load_object(args.object, args)
    rep.params["dim_cap"] = args.dim_cap if args.dim_cap is not None else 3
    h = holink_index(X, args.p, args.q, stage=args.ex_stage, base=args.base or 0, budget=_budget(args), dim_cap=args.dim_cap)
    H = h.holink.space
    coker = h.cokernel
    rep.data = {
        "stage": args.ex_stage,
        "note": _stage_note(args.ex_stage),
        "levels": list(H.counts()),
        "components": len(set(H.components())),
        "holink_pi1_ab": {"rank": h.holink.group.rank, "torsion": list(h.holink.group.torsion)},
        "stratum_pi1_ab": {"rank": h.stratum.group.rank, "torsion": list(h.stratum.group.torsion)},
        "restriction": h.hom.abelian_matrix(),
        "cokernel": {"rank": coker.rank, "torsion": list(coker.torsion), "order": coker.order},
    }
    rep.line(_stage_note(args.ex_stage))
    rep.line(f"holink levels: {list(H.counts())}  components: {rep.data['components']}")
    rep.line(f"holink pi1^ab: {h.holink.group}")
    rep.line(f"[{args.p}] stratum pi1^ab: {h.stratum.group}")
    rep.line(f"restriction cokernel: {coker} (order {coker.order if coker.order is not None else 'infinite'})")
    return 0


def cmd_refine(args: argparse.Namespace, rep: Report) -> int:
    X = load_object(args.object, args)
    R = refine_stratification(X)
    comps = {q: len(_stratum_components(R.X, q)) for q in R.Q.elements}
    rep.data = {"poset": R.Q.to_json(), "stratum_components": comps, "object": sset_to_json(R.X)}
    rep.line(f"Q: {'; '.join(R.Q.to_text().splitlines())}")
    for q, c in comps.items():
        rep.line(f"stratum {q}: {c} component(s)")
    return 0


def _stratum_components(X: FSSet, q: str) -> list:
    from .constructions import stratum

    return stratum(X, q).components()


def cmd_ih(args: argparse.Namespace, rep: Report) -> int:
    C = load_complex(args.complex)
    pv: Any = 0
    if args.perversity is not None:
        src = args.perversity
        try:
            pv = int(src)
        except ValueError:
            try:
                pv = json.loads(Path(src).read_text() if Path(src).exists() else src)
            except json.JSONDecodeError as exc:
                raise ParseError(f"perversity is neither an integer nor JSON ({exc})") from None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PerversityWarning)
        try:
            pbar = Perversity.of(C, pv) if isinstance(pv, (int, dict)) else None
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        if pbar is None:
            raise ParseError("perversity must be an integer or an object {stratum: value}")
    H = intersection_homology(C, pbar)
    rep.data = {
        "formal_dim": C.formal_dim,
        "strata": [S.to_json() for S in C.strata()],
        "perversity": dict(pbar.values),
        "homology": H.to_json(),
        "warnings": [str(w.message) for w in caught],
    }
    for S in C.strata():
        rep.line(f"stratum {S.id}: dim {S.level} codim {S.codim} p={pbar[S.id]}")
    for w in caught:
        rep.line(f"warning: {w.message}")
    for k, g in enumerate(H.groups):
        rep.line(f"IH_{k}: {g}")
    return 0


def cmd_examples(args: argparse.Namespace, rep: Report) -> int:
    models = []
    for name in sorted(BUILTINS):
        X = builtin(name)
        models.append({"name": name, "kind": "fsset", "nd_counts": _counts(X), "valid": validate(X).ok})
    for name in sorted(IH_BUILTINS):
        C = ih_builtin(name)
        models.append({"name": name, "kind": "complex", "simplices": [len(l) for l in C.simplices], "formal_dim": C.formal_dim})
    rep.data = {"models": models}
    for m in models:
        extra = m.get("nd_counts", m.get("simplices"))
        rep.line(f"builtin:{m['name']:<16} {m['kind']:<8} {extra}")
    if args.write:
        from .corpus import write_corpus

        for path in write_corpus(Path(args.write)):
            rep.line(f"written: {path}")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--poset", help="poset file or inline 'a<b;b<c' text for inline objects")
    common.add_argument("--budget", type=int, default=None, help=f"enumeration budget (default ${BUDGET_ENV} or built-in)")
    common.add_argument("--dim-cap", type=int, default=None, help="truncation dimension for Ex")
    common.add_argument("--ex-stage", type=int, default=0, help="number of Ex iterations before computing")

    p = argparse.ArgumentParser(prog="stratsimp", description="Filtered simplicial sets over posets.")
    p.add_argument("--version", action="version", version=f"stratsimp {__version__}")
    sub = p.add_subparsers(dest="verb", metavar="VERB")
    sub.required = True

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help, description=help)
        sp.set_defaults(fn=fn)
        return sp

    for name, fn, h in (
        ("info", cmd_info, "nd-counts per dimension and a validation verdict"),
        ("validate", cmd_validate, "full validation report"),
        ("lastvertex", cmd_lastvertex, "the last-vertex map sd(X) -> X"),
        ("ex", cmd_ex, "truncated Ex(X)"),
        ("spi0", cmd_spi0, "filtered path components on R(P)"),
        ("refine", cmd_refine, "refine the stratification by path components"),
    ):
        add(name, fn, h).add_argument("object")
    sp = add("subdivide", cmd_subdivide, "filtered subdivision sd(X)")
    sp.add_argument("object")
    sp.add_argument("-o", "--output")
    for name, fn, h in (
        ("classify-horn", cmd_classify, "classify the simplices of sd(Δ^φ) against an admissible horn"),
        ("present-anodyne", cmd_present, "anodyne presentation of sd(Λ) ⊆ sd(Δ)"),
        ("verify-presentation", cmd_verify, "check a presentation certificate"),
    ):
        sp = add(name, fn, h)
        sp.add_argument("--chain", required=True)
        sp.add_argument("--k", type=int, required=True)
        if name != "verify-presentation":
            sp.add_argument("--k-prime", type=int, default=None)
        if name == "present-anodyne":
            sp.add_argument("-o", "--output")
        if name == "verify-presentation":
            sp.add_argument("certificate")
    sp = add("enum-maps", cmd_enum_maps, "enumerate filtered maps A -> X")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("--list", action="store_true")
    sp = add("map-space", cmd_map_space, "levels of Map(A, X)")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("--levels", type=int, default=2)
    sp = add("spi1", cmd_spi1, "edge-path presentation of π1 of Map(Δ^φ, X)")
    sp.add_argument("object")
    sp.add_argument("--chain", required=True)
    sp.add_argument("--base", type=int, default=None)
    sp = add("holink", cmd_holink, "homotopy link of p < q and its restriction to the p-stratum")
    sp.add_argument("object")
    sp.add_argument("--p", required=True)
    sp.add_argument("--q", required=True)
    sp.add_argument("--base", type=int, default=None)
    sp = add("ih", cmd_ih, "intersection homology of a filtered complex")
    sp.add_argument("complex")
    sp.add_argument("--perversity", default=None, help="integer, JSON object or file")
    sp = add("examples", cmd_examples, "list built-in models")
    sp.add_argument("--write", default=None, help="also write the serialized example corpus to a directory")
    return p


def _params(args: argparse.Namespace) -> dict[str, Any]:
    skip = {"fn", "json", "verb", "output", "write"}
    out = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    out["budget"] = _budget(args)
    return out


def run(argv: Sequence[str] | None = None, out: Any = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    rep = Report(args.verb, _params(args))
    try:
        status = args.fn(args, rep)
    except ParseError as exc:
        print(f"stratsimp: error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"stratsimp: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except InvariantBreach as exc:
        print(f"stratsimp: invariant breach: {exc}", file=sys.stderr)
        return 4
    except (ValueError, KeyError) as exc:
        print(f"stratsimp: error: {exc}", file=sys.stderr)
        return 2
    out.write(rep.render(args.json))
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
