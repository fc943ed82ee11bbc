"""Zigzags, reduction moves, localized hom-posets and the discrete flow category.

A zigzag alternates forward morphisms of the base category with backward
system arrows.  Two zigzags represent the same localized morphism when they
are connected by cancellation moves: a column (g_i, f_i, g_(i+1)) contracts
through a splitting point a whenever g_i ends with p: a -> y_i, g_(i+1)
starts with q: x_i -> a, and f_i lies below q o p.  The order on classes is
generated by the componentwise order of same-shape zigzags together with
column erasures (the longer zigzag sits below), closed through the classes.

For systems whose arrows span singleton hom-posets (classical matchings,
codimension 1) the strictly descending enumeration is complete and no length
bound is needed; otherwise enumeration is truncated and a stabilization loop
compares successive bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .categories import HomPoset, PCategory
from .matchings import MorseSystem


class OrderViolation(Exception):
    """Antisymmetry of the localized order failed; carries a witness pair."""


# ---------------------------------------------------------------------------
# Zigzags
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Zigzag:
    rights: tuple  # g_0 .. g_(k+1), morphisms of the base category
    lefts: tuple  # f_0 .. f_k, system arrows (k may be -1)

    def __post_init__(self):
        if len(self.rights) != len(self.lefts) + 1:
            raise ValueError("a zigzag needs one more forward arrow than backward arrows")
        for i, f in enumerate(self.lefts):
            if self.rights[i].target != f.target:
                raise ValueError(f"column {i}: forward target {self.rights[i].target} != {f.target}")
            if self.rights[i + 1].source != f.source:
                raise ValueError(f"column {i}: next forward source != {f.source}")

    @property
    def source(self) -> str:
        return self.rights[0].source

    @property
    def target(self) -> str:
        return self.rights[-1].target

    def key(self):
        return (
            len(self.lefts),
            tuple(g.label for g in self.rights),
            tuple(f.label for f in self.lefts),
        )

    def __repr__(self):
        return f"Zigzag({zigzag_to_text(self)!r})"


def zigzag_to_text(z: Zigzag) -> str:
    words = list(z.rights[0].label)
    out = " > ".join(words)
    for f, g in zip(z.lefts, z.rights[1:]):
        out += " < " + f.source
        for cell in g.label[1:]:
            out += " > " + cell
    return out


def zigzag_from_text(cat: PCategory, ms: MorseSystem, text: str) -> Zigzag:
    """Parse the alternating `a > b < c > d` syntax back into a zigzag."""
    tokens = text.replace("<", " < ").replace(">", " > ").split()
    if not tokens or tokens[0] in ("<", ">"):
        raise ValueError("zigzag text must start with a cell")
    by_source = {f.source: f for f in ms.sigma}

    def resolve(path):
        path = tuple(path)
        for g in cat.hom(path[0], path[-1]).elements:
            if g.label == path:
                return g
        raise ValueError(f"no morphism with cell sequence {path}")

    rights, lefts = [], []
    path = [tokens[0]]
    i = 1
    while i < len(tokens):
        sep, cell = tokens[i], tokens[i + 1]
        if sep == ">":
            path.append(cell)
        elif sep == "<":
            rights.append(resolve(path))
            f = by_source.get(cell)
            if f is None or f.target != path[-1]:
                raise ValueError(f"no system arrow {cell} -> {path[-1]}")
            lefts.append(f)
            path = [cell]
        else:
            raise ValueError(f"unexpected token {sep!r}")
        i += 2
    rights.append(resolve(path))
    return Zigzag(tuple(rights), tuple(lefts))


# ---------------------------------------------------------------------------
# Moves
# ---------------------------------------------------------------------------


def _contractions(cat: PCategory, z: Zigzag):
    """All one-step cancellations of a column through a common splitting point."""
    seen = set()
    for i, f in enumerate(z.lefts):
        g1, g2 = z.rights[i], z.rights[i + 1]
        for p_head, a, p in cat.splittings(g1):
            for q, a2, h_tail in cat.splittings(g2):
                if a != a2:
                    continue
                if not cat.leq(f, cat.compose(q, p)):
                    continue
                merged = cat.compose(p_head, h_tail)
                out = Zigzag(
                    z.rights[:i] + (merged,) + z.rights[i + 2:],
                    z.lefts[:i] + z.lefts[i + 1:],
                )
                if out not in seen:
                    seen.add(out)
                    yield out


def reduce_zigzag(cat: PCategory, z: Zigzag) -> Zigzag:
    """Leftmost-first rewriting to a fixed point.

    Moves: removal of backward identities, forward cancellation (g ends with
    the arrow it meets) and its mirror (the next forward morphism starts with
    the arrow).  The result is irreducible for these moves.
    """
    changed = True
    while changed:
        changed = False
        for i, f in enumerate(z.lefts):
            g1, g2 = z.rights[i], z.rights[i + 1]
            if cat.is_identity(f):
                merged = cat.compose(g1, g2)
            elif any(p == f for _, _, p in cat.splittings(g1)):
                head = next(h for h, _, p in cat.splittings(g1) if p == f)
                merged = cat.compose(head, g2)
            elif any(q == f for q, _, _ in cat.splittings(g2)):
                tail = next(t for q, _, t in cat.splittings(g2) if q == f)
                merged = cat.compose(g1, tail)
            else:
                continue
            z = Zigzag(
                z.rights[:i] + (merged,) + z.rights[i + 2:],
                z.lefts[:i] + z.lefts[i + 1:],
            )
            changed = True
            break
    return z


def _erasures(cat: PCategory, z: Zigzag):
    """Order moves deleting one column; the longer zigzag lies below the result."""
    seen = set()
    for i, f in enumerate(z.lefts):
        g1, g2 = z.rights[i], z.rights[i + 1]
        for r in cat.hom(f.target, g2.target).elements:
            if cat.leq(g2, cat.compose(f, r)):
                out = Zigzag(
                    z.rights[:i] + (cat.compose(g1, r),) + z.rights[i + 2:],
                    z.lefts[:i] + z.lefts[i + 1:],
                )
                if out not in seen:
                    seen.add(out)
                    yield out
        for r in cat.hom(g1.source, f.source).elements:
            if cat.leq(g1, cat.compose(r, f)):
                out = Zigzag(
                    z.rights[:i] + (cat.compose(r, g2),) + z.rights[i + 2:],
                    z.lefts[:i] + z.lefts[i + 1:],
                )
                if out not in seen:
                    seen.add(out)
                    yield out


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def enumerate_zigzags(cat: PCategory, ms: MorseSystem, w: str, z: str, max_len=4):
    """All normal-form zigzags from w to z.

    With singleton arrow hom-posets, chains of backward arrows are strictly
    descending and the enumeration is complete whatever the bound; otherwise
    at most ``max_len`` backward arrows are used (and a bound is required).
    """
    singleton = ms.all_singleton_homs(cat)
    if max_len is None and not singleton:
        raise ValueError("a length bound is required for this system")
    chains = [()]

    def extend(chain):
        chains.append(chain)
        if max_len is not None and len(chain) >= max_len:
            return
        last = chain[-1]
        for f in ms.sigma:
            if singleton:
                if f in chain or (last, f) not in ms.rel:
                    continue
            else:
                if f != last and (last, f) not in ms.rel:
                    continue
            extend(chain + (f,))

    if max_len is None or max_len >= 1:
        for f in ms.sigma:
            extend((f,))

    out = []
    for chain in chains:
        if not chain:
            out.extend(Zigzag((g,), ()) for g in cat.hom(w, z).elements)
            continue
        slots = []
        src = w
        feasible = True
        for f in chain:
            els = cat.hom(src, f.target).elements
            if not els:
                feasible = False
                break
            slots.append(els)
            src = f.source
        if feasible:
            last = cat.hom(src, z).elements
            feasible = bool(last)
        if not feasible:
            continue
        slots.append(last)
        for combo in product(*slots):
            out.append(Zigzag(tuple(combo), chain))
    return sorted(set(out), key=Zigzag.key)


# ---------------------------------------------------------------------------
# Classes and localized hom-posets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZigzagClass:
    canonical: Zigzag
    members: frozenset

    @property
    def source(self) -> str:
        return self.canonical.source

    @property
    def target(self) -> str:
        return self.canonical.target

    @property
    def label(self) -> tuple:
        return ("[" + zigzag_to_text(self.canonical) + "]",)

    def key(self):
        return self.canonical.key()

    def __repr__(self):
        return f"[{zigzag_to_text(self.canonical)}]"


def _partition_into_classes(cat: PCategory, zigzags):
    parent = {z: z for z in zigzags}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    pool = set(zigzags)
    reducible = set()
    for zg in zigzags:
        for tgt in _contractions(cat, zg):
            reducible.add(zg)
            if tgt not in pool:
                raise AssertionError(f"contraction left the enumerated set: {tgt!r}")
            union(zg, tgt)
    groups: dict = {}
    for zg in zigzags:
        groups.setdefault(find(zg), []).append(zg)
    classes = []
    member_to_class: dict = {}
    for members in groups.values():
        irreducible = [m for m in members if m not in reducible]
        canonical = min(irreducible, key=Zigzag.key)
        cls = ZigzagClass(canonical, frozenset(members))
        classes.append(cls)
        for m in members:
            member_to_class[m] = cls
    classes.sort(key=ZigzagClass.key)
    return classes, member_to_class


def _loc_hom(cat: PCategory, ms: MorseSystem, w: str, z: str, max_len=4):
    zigzags = enumerate_zigzags(cat, ms, w, z, max_len)
    classes, member_to_class = _partition_into_classes(cat, zigzags)

    rel = {(c, c) for c in classes}
    by_shape: dict = {}
    for zg in zigzags:
        by_shape.setdefault(zg.lefts, []).append(zg)
    for shaped in by_shape.values():
        for z1 in shaped:
            for z2 in shaped:
                if z1 is z2:
                    continue
                if all(cat.leq(g1, g2) for g1, g2 in zip(z1.rights, z2.rights)):
                    rel.add((member_to_class[z1], member_to_class[z2]))
    for zg in zigzags:
        for tgt in _erasures(cat, zg):
            rel.add((member_to_class[zg], member_to_class[tgt]))

    rel = close_order_relation(classes, rel)
    return HomPoset(tuple(classes), rel), member_to_class


def close_order_relation(elements, rel) -> frozenset:
    """Reflexive-transitive closure with an antisymmetry check.

    Raises OrderViolation (with the witness pair) when two distinct elements
    end up comparable in both directions.
    """
    rel = set(rel)
    rel.update((e, e) for e in elements)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    for (a, b) in rel:
        if a != b and (b, a) in rel:
            raise OrderViolation(
                f"localized order is not antisymmetric between {a!r} and {b!r}"
            )
    return frozenset(rel)


def hom_poset_loc(cat: PCategory, ms: MorseSystem, w: str, z: str, max_len=4) -> HomPoset:
    """Hom-poset of the localization between two objects."""
    return _loc_hom(cat, ms, w, z, max_len)[0]


def zigzag_class_of(hom: HomPoset, z: Zigzag) -> ZigzagClass:
    for cls in hom.elements:
        if z in cls.members:
            return cls
    raise KeyError(f"{z!r} is in no class of this hom-poset")


# ---------------------------------------------------------------------------
# Essential chains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EssentialChain:
    arrows: tuple  # descending system arrows; empty means the trivial chain

    def __repr__(self):
        if not self.arrows:
            return "(1)"
        return "(" + " > ".join(repr(f) for f in self.arrows) + ")"


def essential_chain(cat: PCategory, z: Zigzag) -> EssentialChain:
    """Backward arrows that are neither left- nor right-redundant.

    The arrow at column j is left-redundant when some h into its source
    satisfies h o f_j => g_j, and right-redundant when some l out of its
    target satisfies f_j o l => g_(j+1).
    """
    essential = []
    for j, f in enumerate(z.lefts):
        g_before, g_after = z.rights[j], z.rights[j + 1]
        left = any(
            cat.leq(cat.compose(h, f), g_before)
            for h in cat.hom(g_before.source, f.source).elements
        )
        right = False
        if not left:
            right = any(
                cat.leq(cat.compose(f, ell), g_after)
                for ell in cat.hom(f.target, g_after.target).elements
            )
        if not left and not right:
            essential.append(f)
    return EssentialChain(tuple(essential))


# ---------------------------------------------------------------------------
# Flow categories
# ---------------------------------------------------------------------------


@dataclass
class FlowCategory:
    category: PCategory
    system: MorseSystem
    max_len: object  # int or None
    status: str  # "complete" for singleton systems, else "bounded"
    _lookups: dict  # (m, m') -> member-to-class dict

    @property
    def objects(self):
        return self.category.objects

    def hom(self, a: str, b: str) -> HomPoset:
        return self.category.hom(a, b)


def flow_category(cat: PCategory, ms: MorseSystem, max_len=4) -> FlowCategory:
    """Full localized subcategory on the critical objects."""
    critical = ms.critical
    singleton = ms.all_singleton_homs(cat)
    effective = None if singleton else max_len
    homs = {}
    lookups = {}
    for m in critical:
        for m2 in critical:
            hp, lookup = _loc_hom(cat, ms, m, m2, effective)
            if not hp.is_empty():
                homs[(m, m2)] = hp
            lookups[(m, m2)] = lookup
    identities = {}
    for m in critical:
        ident = Zigzag((cat.identity(m),), ())
        identities[m] = lookups[(m, m)][ident]

    def compose(c1: ZigzagClass, c2: ZigzagClass):
        z1, z2 = c1.canonical, c2.canonical
        joined = Zigzag(
            z1.rights[:-1] + (cat.compose(z1.rights[-1], z2.rights[0]),) + z2.rights[1:],
            z1.lefts + z2.lefts,
        )
        reduced = joined
        while True:
            nxt = next(iter(_contractions(cat, reduced)), None)
            if nxt is None:
                break
            reduced = nxt
        lookup = lookups[(z1.source, z2.target)]
        if reduced not in lookup:
            raise ValueError(
                "composite zigzag leaves the enumerated range; raise the length bound"
            )
        return lookup[reduced]

    pcat = PCategory(critical, homs, compose, identities, name="flow")
    return FlowCategory(pcat, ms, effective, "complete" if singleton else "bounded", lookups)


def _flow_signature(flow: FlowCategory):
    sig = {}
    for m in flow.objects:
        for m2 in flow.objects:
            hp = flow.hom(m, m2)
            keys = {c.canonical.key() for c in hp.elements}
            rel = {
                (a.canonical.key(), b.canonical.key())
                for (a, b) in hp.relation
                if a != b
            }
            sig[(m, m2)] = (keys, rel)
    return sig


def stabilized_flow(cat: PCategory, ms: MorseSystem, start_len=4, cap=8, nerve_dim=3):
    """Flow category with a stabilization verdict.

    Singleton systems are complete outright.  Otherwise the bound is raised
    until the classes, their order and the truncated nerve homology agree at
    two consecutive bounds; the verdict is then "stable", else "unstable".
    """
    from .nerves import geometric_nerve, normalized_chain_complex
    from .homology import homology
    from .rings import QQ

    if ms.all_singleton_homs(cat):
        return flow_category(cat, ms, None), "complete"

    def betti_of(flow):
        skel = geometric_nerve(flow.category, nerve_dim)
        return homology(normalized_chain_complex(skel, QQ)).betti()

    length = start_len
    current = flow_category(cat, ms, length)
    cur_sig, cur_betti = _flow_signature(current), betti_of(current)
    while length + 1 <= cap:
        nxt = flow_category(cat, ms, length + 1)
        nxt_sig, nxt_betti = _flow_signature(nxt), betti_of(nxt)
        if cur_sig == nxt_sig and cur_betti == nxt_betti:
            return nxt, "stable"
        current, cur_sig, cur_betti = nxt, nxt_sig, nxt_betti
        length += 1
    return current, "unstable"
