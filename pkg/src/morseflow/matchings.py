"""Acyclic partial matchings and the Morse systems they induce.

A matching pairs cells with faces; the classical kind requires codimension 1.
The induced system of atoms on the entrance path category is validated
against four axioms (exhaustion, order, lifting, switching), and each of its
arrows is graded for mildness of its restriction category.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .categories import (
    NoAtom,
    PCategory,
    atom,
    find_homotopy_extremal,
    full_subcategory,
)
from .complexes import Complex, ValidationReport

CERTIFIED = "CERTIFIED"
ACYCLIC = "ACYCLIC"
FAIL = "FAIL"


class BadPair(Exception):
    """A matched pair violates the face or codimension requirement."""


@dataclass(frozen=True)
class Matching:
    pairs: tuple  # (upper, lower) cell pairs
    kind: str = "classical"  # or "generalized"

    def __post_init__(self):
        if self.kind not in ("classical", "generalized"):
            raise ValueError(f"unknown matching kind {self.kind!r}")
        flat = [c for p in self.pairs for c in p]
        if len(flat) != len(set(flat)):
            raise ValueError("matching is not a partial bijection: a cell occurs twice")

    @staticmethod
    def from_json(text: str) -> "Matching":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        try:
            kind = doc["kind"]
            pairs = tuple((str(u), str(l)) for u, l in doc["pairs"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"matching file: expected kind and pairs ({exc})") from exc
        return Matching(pairs, kind)

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "pairs": [list(p) for p in self.pairs]}, indent=2)


def check_pairs(c: Complex, m: Matching):
    """Raise BadPair unless every pair is a face pair of the right codimension."""
    for u, l in m.pairs:
        if u not in c.dim_of or l not in c.dim_of:
            raise BadPair(f"pair ({u}, {l}) references an unknown cell")
        if not c.is_face(u, l):
            raise BadPair(f"{l} is not a face of {u}")
        if m.kind == "classical" and c.dim(u) - c.dim(l) != 1:
            raise BadPair(f"classical pair ({u}, {l}) must drop dimension by exactly 1")


def check_acyclic(c: Complex, m: Matching) -> ValidationReport:
    """Empty report iff the flow relation on matched lower cells has no cycle."""
    check_pairs(c, m)
    report = ValidationReport()
    partner = {l: u for u, l in m.pairs}
    lowers = sorted(partner)
    # d -> d' whenever d is a face of the partner of d'
    succ = {
        d: [d2 for d2 in lowers if d2 != d and c.is_face(partner[d2], d)]
        for d in lowers
    }
    # iterative cycle detection with an explicit witness
    color = {d: 0 for d in lowers}  # 0 new, 1 active, 2 done
    parent = {}
    for start in lowers:
        if color[start]:
            continue
        stack = [(start, iter(succ[start]))]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == 0:
                    color[nxt] = 1
                    parent[nxt] = node
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
                if color[nxt] == 1:
                    cycle = [nxt, node]
                    cur = node
                    while cur != nxt:
                        cur = parent[cur]
                        cycle.append(cur)
                    cycle.reverse()
                    report.add(
                        "cycle",
                        "matching flow relation has a cycle: " + " < ".join(cycle),
                        tuple(cycle),
                    )
                    return report
            if not advanced:
                color[node] = 2
                stack.pop()
    return report


# ---------------------------------------------------------------------------
# Morse systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MorseSystem:
    sigma: tuple  # Morphism arrows, sorted
    rel: frozenset  # (f0, f1) pairs, f0 != f1, meaning f0 comes before f1
    critical: tuple  # object ids
    span: tuple  # (arrow, frozenset of objects) pairs, aligned with sigma

    def span_of(self, f) -> frozenset:
        for g, s in self.span:
            if g == f:
                return s
        raise KeyError(f)

    def all_singleton_homs(self, cat: PCategory) -> bool:
        return all(len(cat.hom(f.source, f.target)) == 1 for f in self.sigma)


def morse_system_from_arrows(cat: PCategory, arrows) -> MorseSystem:
    """Derive the order relation, critical objects and spans of a system."""
    sigma = tuple(sorted(arrows))
    rel = frozenset(
        (f0, f1)
        for f0 in sigma
        for f1 in sigma
        if f0 != f1 and not cat.hom(f0.source, f1.target).is_empty()
    )
    spans = []
    spanned = set()
    for f in sigma:
        s = frozenset(
            w
            for w in cat.objects
            if not cat.hom(f.source, w).is_empty() and not cat.hom(w, f.target).is_empty()
        )
        spans.append((f, s))
        spanned |= s
    critical = tuple(sorted(o for o in cat.objects if o not in spanned))
    return MorseSystem(sigma, rel, critical, tuple(spans))


def matching_to_morse_system(c: Complex, m: Matching, cat: PCategory) -> MorseSystem:
    """Atoms of hom(upper, lower) for each matched pair, with derived data."""
    check_pairs(c, m)
    arrows = []
    for u, l in m.pairs:
        a = atom(cat, u, l)
        if a is None:
            raise BadPair(f"hom({u}, {l}) is empty")
        arrows.append(a)
    return morse_system_from_arrows(cat, arrows)


def validate_morse_system(cat: PCategory, ms: MorseSystem) -> ValidationReport:
    """Exhaustively check the four axioms; each violation carries a witness."""
    report = ValidationReport()
    sigma = ms.sigma

    # exhaustion
    for f in sigma:
        if f.source == f.target:
            report.add("exhaustion", f"{f} is an endomorphism", (repr(f),))
            continue
        try:
            a = atom(cat, f.source, f.target)
        except NoAtom:
            a = None
        if a != f:
            report.add("exhaustion", f"{f} is not the atom of its hom-poset", (repr(f),))
        between = ms.span_of(f)
        for g in sigma:
            if g == f:
                continue
            for obj in (g.source, g.target):
                if obj in between:
                    report.add(
                        "exhaustion",
                        f"{g} touches {obj}, which lies between the endpoints of {f}",
                        (repr(f), repr(g), obj),
                    )

    # order: the relation generates a partial order iff its digraph is acyclic
    succ = {f: [g for g in sigma if (f, g) in ms.rel] for f in sigma}
    state = {f: 0 for f in sigma}

    def dfs(f, trail):
        state[f] = 1
        for g in succ[f]:
            if state[g] == 1:
                cyc = trail[trail.index(g):] + [g]
                report.add(
                    "order",
                    "order relation has a cycle: " + " -> ".join(repr(x) for x in cyc),
                    tuple(repr(x) for x in cyc),
                )
                return True
            if state[g] == 0 and dfs(g, trail + [g]):
                return True
        state[f] = 2
        return False

    for f in sigma:
        if state[f] == 0 and dfs(f, [f]):
            break

    # lifting
    for f0 in sigma:
        for f1 in sigma:
            if f0 == f1:
                continue
            h_gs = cat.hom(f0.source, f1.source).elements
            h_gps = cat.hom(f0.target, f1.target).elements
            h_ps = cat.hom(f0.target, f1.source).elements
            for g in h_gs:
                for gp in h_gps:
                    if not cat.leq(cat.compose(f0, gp), cat.compose(g, f1)):
                        continue
                    if not any(
                        cat.leq(cat.compose(f0, p), g) and cat.leq(gp, cat.compose(p, f1))
                        for p in h_ps
                    ):
                        report.add(
                            "lifting",
                            f"square ({f0!r}, {g!r}, {gp!r}, {f1!r}) does not split",
                            (repr(f0), repr(g), repr(gp), repr(f1)),
                        )

    # switching
    for f0 in sigma:
        for f1 in sigma:
            if f0 == f1:
                continue
            if cat.hom(f0.source, f1.source).is_empty():
                continue
            if cat.hom(f0.target, f1.target).is_empty():
                continue
            try:
                h = atom(cat, f0.source, f1.source)
                ell = atom(cat, f0.target, f1.target)
            except NoAtom:
                report.add("switching", "atom missing for switching square", (repr(f0), repr(f1)))
                continue
            side_a = cat.compose(f0, ell)
            side_b = cat.compose(h, f1)
            for v in cat.hom(f0.source, f1.target).elements:
                if not (cat.leq(side_a, v) and cat.leq(side_b, v)):
                    continue
                q_hom = cat.hom(f0.target, f1.source)
                if q_hom.is_empty():
                    report.add(
                        "switching",
                        f"no morphism {f0.target} -> {f1.source} below {v!r}",
                        (repr(f0), repr(f1), repr(v)),
                    )
                    continue
                try:
                    q = atom(cat, f0.target, f1.source)
                except NoAtom:
                    report.add("switching", "hom has no atom", (f0.target, f1.source))
                    continue
                through = cat.compose(cat.compose(f0, q), f1)
                if not cat.leq(through, v):
                    report.add(
                        "switching",
                        f"{through!r} is not below {v!r}",
                        (repr(f0), repr(f1), repr(v)),
                    )
    return report


# ---------------------------------------------------------------------------
# Restriction categories and mildness
# ---------------------------------------------------------------------------


def restriction_category(cat: PCategory, ms: MorseSystem, f) -> PCategory:
    """Full subcategory on objects reachable from source(f) but not above target(f)."""
    if f not in set(ms.sigma):
        raise ValueError(f"{f!r} is not in the system")
    objs = [
        z
        for z in cat.objects
        if not cat.hom(f.source, z).is_empty() and cat.hom(z, f.target).is_empty()
    ]
    return full_subcategory(cat, objs)


@dataclass
class MildnessEntry:
    arrow: object
    finite: bool
    loopfree: bool
    verdict: str
    detail: str

    def as_dict(self):
        return {
            "arrow": repr(self.arrow),
            "finite": self.finite,
            "loopfree": self.loopfree,
            "verdict": self.verdict,
            "detail": self.detail,
        }


@dataclass
class MildnessReport:
    entries: list

    @property
    def all_mild(self) -> bool:
        return all(e.verdict in (CERTIFIED, ACYCLIC) and e.finite and e.loopfree for e in self.entries)

    def as_dict(self):
        return {"all_mild": self.all_mild, "entries": [e.as_dict() for e in self.entries]}


def check_mildness(cat: PCategory, ms: MorseSystem, max_nerve_dim: int = 4) -> MildnessReport:
    """Grade each system arrow by the shape of its restriction category.

    CERTIFIED: a homotopy-extremal object exists, or the order complex of the
    reachability poset collapses greedily to a point.  ACYCLIC: all reduced
    nerve homology vanishes (contractibility uncertified).  FAIL otherwise.
    """
    from .nerves import geometric_nerve, greedy_collapses_to_point, normalized_chain_complex, order_complex
    from .homology import homology
    from .rings import QQ

    entries = []
    for f in ms.sigma:
        sub = restriction_category(cat, ms, f)
        finite = True  # finite by construction; recorded for the report
        loopfree = True
        for a in sub.objects:
            for b in sub.objects:
                if a != b and not sub.hom(a, b).is_empty() and not sub.hom(b, a).is_empty():
                    loopfree = False
        if not loopfree:
            entries.append(MildnessEntry(f, finite, loopfree, FAIL, "restriction category has a loop"))
            continue
        if not sub.objects:
            entries.append(MildnessEntry(f, finite, loopfree, FAIL, "restriction category is empty"))
            continue
        extremal = find_homotopy_extremal(sub)
        if extremal is not None:
            entries.append(
                MildnessEntry(f, finite, loopfree, CERTIFIED, f"homotopy-{extremal[1]} object {extremal[0]}")
            )
            continue
        # reachability poset of the restriction category
        objs = list(sub.objects)
        oc = order_complex(objs, lambda a, b: a == b or not sub.hom(a, b).is_empty())
        if greedy_collapses_to_point(oc):
            entries.append(MildnessEntry(f, finite, loopfree, CERTIFIED, "order complex collapses to a point"))
            continue
        nerve = geometric_nerve(sub, max_nerve_dim)
        summary = homology(normalized_chain_complex(nerve, QQ))
        betti = summary.betti()[: max_nerve_dim]
        if betti and betti[0] == 1 and all(b == 0 for b in betti[1:]):
            entries.append(MildnessEntry(f, finite, loopfree, ACYCLIC, f"reduced homology vanishes to degree {len(betti) - 1}"))
        else:
            entries.append(MildnessEntry(f, finite, loopfree, FAIL, f"nerve Betti numbers {betti}"))
    return MildnessReport(entries)
