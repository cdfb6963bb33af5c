"""Anodyne presentations of sd(Λ_k^φ) ⊆ sd(Δ^φ) and a verifier for presentation certificates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Sequence

from .constructions import horn, is_admissible
from .errors import InvariantBreach
from .fsset import (
    FMap,
    FSSet,
    Key,
    Simplex,
    SSet,
    identity,
    key_from_json,
    key_to_json,
    validate_map,
    word_to_eta,
)
from .poset import PChain, Poset
from .subdivision import SdVertex, sd_simplex

Chain = tuple[SdVertex, ...]

TYPE_II = ("a", "c", "e", "g")
TYPE_I = ("b", "d", "f", "h")
PARTNER = dict(zip(TYPE_II, TYPE_I))


def default_k_prime(phi: Sequence[str], k: int) -> int:
    n = len(phi) - 1
    if k < n and phi[k + 1] == phi[k]:
        return k + 1
    if k > 0 and phi[k - 1] == phi[k]:
        return k - 1
    raise ValueError(f"horn ({list(phi)}, {k}) is not admissible")


def _check(phi: Sequence[str], k: int, kp: int | None) -> int:
    if not is_admissible(phi, k):
        raise ValueError(f"horn ({list(phi)}, {k}) is not admissible")
    if kp is None:
        return default_k_prime(phi, k)
    if kp not in (k - 1, k + 1) or not 0 <= kp < len(phi) or phi[kp] != phi[k]:
        raise ValueError(f"k'={kp} is not a neighbour of {k} with the same filtration")
    return kp


@dataclass(frozen=True)
class _Case:
    label: str
    pos: int  # where ρ inserts (type II) or which index ρ⁻¹ deletes (type I)
    pair: SdVertex | None = None


def _analyse(tau: Chain, n: int, k: int, kp: int) -> _Case:
    """Case analysis of a non-degenerate chain of sd(Δ^N) against the horn Λ_k."""
    full = identity(n)
    dk = tuple(i for i in range(n + 1) if i != k)
    faces = [s for s, _ in tau]
    cols = [q for _, q in tau]
    last = len(tau) - 1
    if faces[-1] not in (full, dk):
        return _Case("Lambda", -1)
    if faces[-1] == dk:
        return _Case("a", last + 1, (full, cols[last]))
    hits = [i for i, s in enumerate(faces) if s == dk]
    if hits:
        j = hits[-1]
        if cols[j] == cols[j + 1]:
            return _Case("b", j + 1)
        return _Case("a", j + 1, (full, cols[j]))
    j = min(i for i, s in enumerate(faces) if s == full)
    if cols[0] != cols[j]:
        l = max(i for i in range(len(tau)) if cols[i] == cols[0])
        m = max(i for i in range(len(tau)) if faces[i] == faces[l])
        if cols[m] == cols[m + 1]:
            return _Case("d", m + 1)
        return _Case("c", m + 1, (faces[m], cols[m + 1]))
    if k not in faces[0]:
        l = max(i for i in range(len(tau)) if k not in faces[i])
        grown = tuple(sorted(set(faces[l]) | {k}))
        if faces[l + 1] == grown:
            return _Case("f", l + 1)
        return _Case("e", l + 1, (grown, cols[0]))
    l = min(i for i in range(len(tau)) if kp in faces[i])
    if l >= 1 and faces[l] == tuple(sorted(set(faces[l - 1]) | {kp})):
        return _Case("h", l - 1)
    return _Case("g", l, (tuple(v for v in faces[l] if v != kp), cols[0]))


def classify_sd_horn(phi: Sequence[str], k: int, kp: int | None = None, P: Poset | None = None) -> dict[Chain, str]:
    P = P or _chain_poset(phi)
    kp = _check(phi, k, kp)
    n = len(phi) - 1
    Y = sd_simplex(phi, P)
    return {c: _analyse(c, n, k, kp).label for c in Y.keys()}


def rho(phi: Sequence[str], k: int, kp: int | None, sigma: Chain) -> Chain:
    kp = _check(phi, k, kp)
    case = _analyse(tuple(sigma), len(phi) - 1, k, kp)
    if case.label not in TYPE_II:
        raise ValueError(f"rho is only defined on type II simplices, got label {case.label}")
    assert case.pair is not None
    return tuple(sigma[: case.pos]) + (case.pair,) + tuple(sigma[case.pos :])


def rho_face_index(phi: Sequence[str], k: int, kp: int | None, sigma: Chain) -> int:
    """The position l with d_l(ρ(σ)) = σ."""
    kp = _check(phi, k, kp)
    return _analyse(tuple(sigma), len(phi) - 1, k, kp).pos


def _chain_poset(phi: Sequence[str]) -> Poset:
    return Poset.from_covers(set(phi), [(a, b) for a, b in zip(phi, phi[1:]) if a != b])


# ---------------------------------------------------------------------------
# ancestral order and ranks


@dataclass(frozen=True)
class AncestralEdge:
    lesser: Chain
    greater: Chain
    rule: str  # face-not-rho | in-rho-boundary | from-horn


def _subchains(c: Chain) -> list[Chain]:
    n = len(c)
    return [tuple(c[i] for i in range(n) if m >> i & 1) for m in range(1, (1 << n) - 1)]


def ancestral_order(
    phi: Sequence[str], k: int, kp: int | None = None, P: Poset | None = None, include_horn_clause: bool = True
) -> list[AncestralEdge]:
    labels = classify_sd_horn(phi, k, kp, P)
    kp = _check(phi, k, kp)
    rho_of = {c: rho(phi, k, kp, c) for c, lab in labels.items() if lab in TYPE_II}
    outside = [c for c, lab in labels.items() if lab != "Lambda"]
    edges: list[AncestralEdge] = []
    for tau in outside:
        for sigma in _subchains(tau):
            if labels[sigma] != "Lambda" and rho_of.get(sigma) != tau:
                edges.append(AncestralEdge(sigma, tau, "face-not-rho"))
    for tau, top in rho_of.items():
        for sigma in _subchains(top):
            if sigma != tau and labels[sigma] != "Lambda":
                edges.append(AncestralEdge(sigma, tau, "in-rho-boundary"))
    if include_horn_clause:
        inside = [c for c, lab in labels.items() if lab == "Lambda"]
        edges.extend(AncestralEdge(s, t, "from-horn") for s in inside for t in outside)
    return edges


def ranks(phi: Sequence[str], k: int, kp: int | None = None, P: Poset | None = None) -> dict[Chain, int]:
    """The rank function F on Lambda (rank 0) and type II simplices."""
    labels = classify_sd_horn(phi, k, kp, P)
    preds: dict[Chain, list[Chain]] = {c: [] for c in labels}
    for e in ancestral_order(phi, k, kp, P, include_horn_clause=False):
        preds[e.greater].append(e.lesser)
    # horn simplices precede everything else; they only contribute rank 0
    below: dict[Chain, int] = {}
    state: dict[Chain, int] = {}

    def best_below(v: Chain) -> int:
        """max F(τ) over τ <ρ v with τ in Lambda ∪ type II (Lambda always qualifies)."""
        if v in below:
            return below[v]
        if state.get(v) == 1:
            raise InvariantBreach(f"cycle in ancestral order through {v}")
        state[v] = 1
        out = 0 if labels[v] != "Lambda" else -1
        for u in preds[v]:
            out = max(out, best_below(u))
            if labels[u] in TYPE_II:
                out = max(out, max(1, best_below(u) + 1))
        state[v] = 2
        below[v] = out
        return out

    F = {c: 0 for c, lab in labels.items() if lab == "Lambda"}
    for c, lab in labels.items():
        if lab in TYPE_II:
            F[c] = max(1, best_below(c) + 1)
    return F


# ---------------------------------------------------------------------------
# presentations


@dataclass
class HornRecord:
    horn_chain: PChain
    horn_index: int
    attach: dict[Key, Simplex]
    fill_keys: tuple[Key, Key]  # (new top simplex, new missing face)

    def to_json(self) -> dict[str, Any]:
        return {
            "horn_chain": list(self.horn_chain),
            "horn_index": self.horn_index,
            "attach": [[key_to_json(a), key_to_json(y.base), list(y.word)] for a, y in sorted(self.attach.items())],
            "fill_keys": [key_to_json(k) for k in self.fill_keys],
        }


@dataclass
class AnodynePresentation:
    stages: list[list[HornRecord]] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {"meta": self.meta, "stages": [[r.to_json() for r in st] for st in self.stages]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @property
    def fill_count(self) -> int:
        return sum(len(s) for s in self.stages)


def presentation_from_json(data: dict[str, Any], Y: SSet) -> AnodynePresentation:
    stages = []
    for st in data["stages"]:
        recs = []
        for r in st:
            attach = {}
            for a, base, word in r["attach"]:
                base = key_from_json(base)
                attach[key_from_json(a)] = Simplex(base, word_to_eta(word, Y.dims[base]) if base in Y.dims else tuple(word))
            recs.append(
                HornRecord(tuple(r["horn_chain"]), int(r["horn_index"]), attach, tuple(key_from_json(k) for k in r["fill_keys"]))  # type: ignore[arg-type]
            )
        stages.append(recs)
    return AnodynePresentation(stages, dict(data.get("meta", {})))


def build_presentation(phi: Sequence[str], k: int, kp: int | None = None, P: Poset | None = None) -> AnodynePresentation:
    P = P or _chain_poset(phi)
    kp = _check(phi, k, kp)
    labels = classify_sd_horn(phi, k, kp, P)
    F = ranks(phi, k, kp, P)
    top_rank = max((F[c] for c, lab in labels.items() if lab in TYPE_II), default=0)
    stages: list[list[HornRecord]] = [[] for _ in range(top_rank)]
    for sigma in sorted((c for c, lab in labels.items() if lab in TYPE_II), key=lambda c: (len(c), repr(c))):
        top = rho(phi, k, kp, sigma)
        l = rho_face_index(phi, k, kp, sigma)
        psi = tuple(q for _, q in top)
        H = horn(psi, l, P)
        attach = {s: Simplex(tuple(top[i] for i in s), identity(len(s) - 1)) for s in H.keys()}
        stages[F[sigma] - 1].append(HornRecord(psi, l, attach, (top, sigma)))
    return AnodynePresentation(stages, {"phi": list(phi), "k": k, "k_prime": kp})


@dataclass
class VerifyResult:
    ok: bool
    problems: list[str]

    def __bool__(self) -> bool:
        return self.ok


def verify_presentation(X: SSet, Y: SSet, incl: FMap, pres: AnodynePresentation) -> VerifyResult:
    problems: list[str] = []
    rep = validate_map(incl)
    if not rep.ok:
        return VerifyResult(False, [f"inclusion is not a valid map: {rep.summary()}"])
    if not incl.is_injective():
        return VerifyResult(False, ["inclusion is not a monomorphism"])
    current = {y.base for y in incl.images.values()}
    P = Y.poset if isinstance(Y, FSSet) else None
    for si, stage in enumerate(pres.stages):
        new: set[Key] = set()
        for ri, rec in enumerate(stage):
            where = f"stage {si} record {ri}"
            psi, j = tuple(rec.horn_chain), rec.horn_index
            try:
                admissible = is_admissible(psi, j)
            except ValueError as exc:
                problems.append(f"{where}: {exc}")
                continue
            if not admissible:
                problems.append(f"{where}: horn ({list(psi)}, {j}) is not admissible")
                continue
            top, miss = rec.fill_keys
            if top not in Y.dims or miss not in Y.dims:
                problems.append(f"{where}: fill keys are not simplices of the target")
                continue
            if Y.dims[top] != len(psi) - 1 or (isinstance(Y, FSSet) and Y.filt[top] != psi):
                problems.append(f"{where}: filled simplex does not have shape {list(psi)}")
                continue
            if top in current or miss in current or top in new or miss in new or top == miss:
                problems.append(f"{where}: fill keys already present")
                continue
            if Y.faces[top][j] != Y.nd_simplex(miss):
                problems.append(f"{where}: missing face d_{j} of the filled simplex is not {miss!r}")
                continue
            H = horn(psi, j, P) if P is not None else None
            if H is None or set(rec.attach) != set(H.dims):
                problems.append(f"{where}: attaching map is not defined on the horn")
                continue
            amap = FMap(H, Y, dict(rec.attach))
            arep = validate_map(amap)
            if not arep.ok:
                problems.append(f"{where}: attaching map invalid: {arep.violations[0]}")
                continue
            if any(y.base not in current for y in rec.attach.values()):
                problems.append(f"{where}: attaching map leaves the current stage")
                continue
            n = len(psi) - 1
            full = identity(n)
            bad = [i for i in range(n + 1) if i != j and Y.faces[top][i] != rec.attach[full[:i] + full[i + 1 :]]]
            if bad:
                problems.append(f"{where}: filled simplex does not extend the attaching map (faces {bad})")
                continue
            new |= {top, miss}
        current |= new
    leftover = set(Y.dims) - current
    if leftover:
        problems.append(f"replay misses {len(leftover)} simplices of the target")
    return VerifyResult(not problems, problems)
