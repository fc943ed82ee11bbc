"""Finite poset-enriched categories with explicit hom-posets.

Morphisms are hashable tokens carrying their endpoints.  Path-backed
categories (entrance paths, face posets) use the cell sequence as the token;
hand-built categories use arbitrary labels plus a composition table.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product


class NoAtom(Exception):
    """A nonempty hom-poset has no atom (the category is not cellular)."""


@dataclass(frozen=True, order=True)
class Morphism:
    source: str
    target: str
    label: tuple

    def __repr__(self):
        return f"<{' > '.join(map(str, self.label))}>" if self.label else f"<{self.source}->{self.target}>"


def identity_morphism(obj: str) -> Morphism:
    return Morphism(obj, obj, (obj,))


@dataclass(frozen=True)
class HomPoset:
    """Explicit finite poset of morphisms; leq pairs are stored closed."""

    elements: tuple
    relation: frozenset  # (f, g) pairs meaning f => g, reflexive-transitive

    @staticmethod
    def empty() -> "HomPoset":
        return HomPoset((), frozenset())

    @staticmethod
    def build(elements, pairs) -> "HomPoset":
        """Close the given pairs reflexively and transitively; must stay antisymmetric."""
        elements = tuple(elements)
        rel = {(e, e) for e in elements}
        rel.update(pairs)
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
                raise ValueError(f"hom-poset order is not antisymmetric: {a!r} <=> {b!r}")
        return HomPoset(elements, frozenset(rel))

    def __len__(self):
        return len(self.elements)

    def is_empty(self) -> bool:
        return not self.elements

    def leq(self, f, g) -> bool:
        return (f, g) in self.relation

    def minimum(self):
        for f in self.elements:
            if all(self.leq(f, g) for g in self.elements):
                return f
        return None

    def maximum(self):
        for f in self.elements:
            if all(self.leq(g, f) for g in self.elements):
                return f
        return None

    def covers(self):
        """Covering pairs (f, g) of the strict order, for compact reports."""
        strict = {(a, b) for (a, b) in self.relation if a != b}
        out = []
        for a, b in sorted(strict, key=_pair_key):
            if not any((a, c) in strict and (c, b) in strict for c in self.elements if c not in (a, b)):
                out.append((a, b))
        return out

    def check_partial_order(self):
        for f in self.elements:
            if (f, f) not in self.relation:
                raise ValueError(f"relation not reflexive at {f}")
        for (a, b) in self.relation:
            if a != b and (b, a) in self.relation:
                raise ValueError(f"relation not antisymmetric: {a} <=> {b}")
            for (c, d) in self.relation:
                if b == c and (a, d) not in self.relation:
                    raise ValueError("relation not transitive")


def _pair_key(pair):
    a, b = pair
    return (sort_key(a), sort_key(b))


def sort_key(el):
    """Deterministic ordering key for morphism-like tokens."""
    key = getattr(el, "key", None)
    if key is not None:
        return key() if callable(key) else key
    return (el.source, el.target, el.label)


class PCategory:
    """Small category enriched over posets, stored extensionally."""

    def __init__(self, objects, homs, compose_fn, identities, splittings_fn=None, name=""):
        self.objects = tuple(objects)
        self._homs = dict(homs)
        self._compose = compose_fn
        self._identities = dict(identities)
        self._splittings = splittings_fn
        self.name = name

    # -- structure ---------------------------------------------------------

    def hom(self, a: str, b: str) -> HomPoset:
        return self._homs.get((a, b), HomPoset.empty())

    def identity(self, a: str):
        return self._identities[a]

    def is_identity(self, f) -> bool:
        return f == self._identities.get(f.source) if hasattr(f, "source") else False

    def compose(self, f, g):
        """Diagrammatic composition: f: x -> y, then g: y -> z."""
        if f.target != g.source:
            raise ValueError(f"cannot compose {f} with {g}")
        return self._compose(f, g)

    def leq(self, f, g) -> bool:
        return self.hom(f.source, f.target).leq(f, g)

    def splittings(self, f):
        """All factorizations f = p o q as (p, mid, q), including the trivial ones.

        Path-backed categories cut the stored sequence; a generic category
        enumerates its composition table.
        """
        if self._splittings is not None:
            return self._splittings(f)
        out = []
        for mid in self.objects:
            for p in self.hom(f.source, mid).elements:
                for q in self.hom(mid, f.target).elements:
                    if self.compose(p, q) == f:
                        out.append((p, mid, q))
        return out

    # -- axioms ------------------------------------------------------------

    def check_axioms(self):
        """Exhaustive check of the enrichment axioms (desk-scale only)."""
        for (a, b), hp in self._homs.items():
            hp.check_partial_order()
            for f in hp.elements:
                if (f.source, f.target) != (a, b):
                    raise ValueError(f"{f} stored under wrong hom ({a}, {b})")
        for a in self.objects:
            ida = self.identity(a)
            for b in self.objects:
                for f in self.hom(a, b).elements:
                    if self.compose(ida, f) != f or self.compose(f, self.identity(b)) != f:
                        raise ValueError(f"identity law fails at {f}")
        for a, b, c in product(self.objects, repeat=3):
            hab, hbc = self.hom(a, b), self.hom(b, c)
            for f in hab.elements:
                for g in hbc.elements:
                    fg = self.compose(f, g)
                    if fg not in set(self.hom(a, c).elements):
                        raise ValueError(f"composition not closed at {f}, {g}")
            # monotonicity
            for f1 in hab.elements:
                for f2 in hab.elements:
                    if not hab.leq(f1, f2):
                        continue
                    for g1 in hbc.elements:
                        for g2 in hbc.elements:
                            if hbc.leq(g1, g2) and not self.leq(self.compose(f1, g1), self.compose(f2, g2)):
                                raise ValueError("composition is not monotone")
        for a, b, c, d in product(self.objects, repeat=4):
            for f in self.hom(a, b).elements:
                for g in self.hom(b, c).elements:
                    for h in self.hom(c, d).elements:
                        if self.compose(self.compose(f, g), h) != self.compose(f, self.compose(g, h)):
                            raise ValueError("composition not associative")


# ---------------------------------------------------------------------------
# Path-backed categories from a complex
# ---------------------------------------------------------------------------


def _subsequence(short: tuple, long: tuple) -> bool:
    it = iter(long)
    return all(x in it for x in short)


def _path_compose(f: Morphism, g: Morphism) -> Morphism:
    return Morphism(f.source, g.target, f.label + g.label[1:])


def _path_splittings(f: Morphism):
    out = []
    for i in range(len(f.label)):
        mid = f.label[i]
        out.append(
            (
                Morphism(f.source, mid, f.label[: i + 1]),
                mid,
                Morphism(mid, f.target, f.label[i:]),
            )
        )
    return out


def entrance_path_category(c) -> PCategory:
    """Entrance paths (strictly descending cell sequences) ordered by subsequence."""
    paths = {}  # (src, dst) -> list of label tuples
    ids = c.ids()

    def extend(prefix):
        last = prefix[-1]
        key = (prefix[0], last)
        paths.setdefault(key, []).append(prefix)
        for nxt in c.strict_faces(last):
            extend(prefix + (nxt,))

    for cid in ids:
        extend((cid,))
    homs = {}
    identities = {cid: identity_morphism(cid) for cid in ids}
    for (a, b), labels in paths.items():
        els = sorted(Morphism(a, b, lab) for lab in labels)
        pairs = [
            (f, g)
            for f in els
            for g in els
            if f != g and _subsequence(f.label, g.label)
        ]
        homs[(a, b)] = HomPoset.build(els, pairs)
    return PCategory(ids, homs, _path_compose, identities, _path_splittings, name="entrance_paths")


def face_poset_category(c) -> PCategory:
    """One morphism per strict face relation; tokens do not decompose."""
    ids = c.ids()
    identities = {cid: identity_morphism(cid) for cid in ids}
    homs = {}
    for a in ids:
        homs[(a, a)] = HomPoset.build([identities[a]], [])
        for b in c.strict_faces(a):
            homs[(a, b)] = HomPoset.build([Morphism(a, b, (a, b))], [])

    def compose(f, g):
        if f.source == f.target:
            return g
        if g.source == g.target:
            return f
        return Morphism(f.source, g.target, (f.source, g.target))

    def splittings(f):
        if f.source == f.target:
            return [(f, f.source, f)]
        return [
            (identities[f.source], f.source, f),
            (f, f.target, identities[f.target]),
        ]

    return PCategory(ids, homs, compose, identities, splittings, name="face_poset")


def poset_as_pcategory(elements, leq) -> PCategory:
    """View a finite poset as a p-category with singleton hom-posets."""
    els = list(elements)
    names = {e: f"p{i}" for i, e in enumerate(els)}
    ids = [names[e] for e in els]
    back = {names[e]: e for e in els}
    identities = {n: identity_morphism(n) for n in ids}
    homs = {}
    for a in els:
        for b in els:
            if a == b:
                homs[(names[a], names[a])] = HomPoset.build([identities[names[a]]], [])
            elif leq(a, b):
                na, nb = names[a], names[b]
                homs[(na, nb)] = HomPoset.build([Morphism(na, nb, (na, nb))], [])

    def compose(f, g):
        if f.source == f.target:
            return g
        if g.source == g.target:
            return f
        return Morphism(f.source, g.target, (f.source, g.target))

    cat = PCategory(ids, homs, compose, identities, name="poset")
    cat.poset_element = back  # object id -> original poset element
    return cat


def full_subcategory(cat: PCategory, objects) -> PCategory:
    objects = tuple(objects)
    keep = set(objects)
    homs = {
        (a, b): hp
        for (a, b), hp in cat._homs.items()
        if a in keep and b in keep
    }
    identities = {a: cat.identity(a) for a in objects}
    return PCategory(objects, homs, cat._compose, identities, cat._splittings, name=cat.name + "|sub")


# ---------------------------------------------------------------------------
# Atoms and homotopy-extremal objects
# ---------------------------------------------------------------------------


def atom(cat: PCategory, x: str, y: str):
    """The minimum, weakly indecomposable element of hom(x, y), if any.

    Returns None for an empty hom-poset and raises NoAtom when the hom-poset
    is nonempty but no element satisfies the atom conditions.
    """
    hp = cat.hom(x, y)
    if hp.is_empty():
        return None
    f = hp.minimum()
    if f is not None and _weakly_indecomposable(cat, f) and (x != y or cat.is_identity(f)):
        return f
    raise NoAtom(f"hom({x}, {y}) has no atom")


def _weakly_indecomposable(cat: PCategory, f) -> bool:
    x, y = f.source, f.target
    for z in cat.objects:
        for g in cat.hom(x, z).elements:
            for h in cat.hom(z, y).elements:
                if cat.leq(cat.compose(g, h), f):
                    if z == x and cat.is_identity(g) and h == f:
                        continue
                    if z == y and g == f and cat.is_identity(h):
                        continue
                    return False
    return True


def is_cellular(cat: PCategory) -> bool:
    """Every nonempty hom-poset contains an atom."""
    for a in cat.objects:
        for b in cat.objects:
            try:
                atom(cat, a, b)
            except NoAtom:
                return False
    return True


def find_homotopy_extremal(cat: PCategory):
    """An object whose hom-posets all have bottoms (or all have tops), if any.

    Returns (object, "minimal" | "maximal") or None.  Such an object forces
    the classifying space of the category to be contractible.
    """
    for w in cat.objects:
        ok = True
        for z in cat.objects:
            hp = cat.hom(w, z)
            bot = hp.minimum() if not hp.is_empty() else None
            if bot is None or (w == z and not cat.is_identity(bot)):
                ok = False
                break
        if ok:
            return w, "minimal"
    for z in cat.objects:
        ok = True
        for w in cat.objects:
            hp = cat.hom(w, z)
            top = hp.maximum() if not hp.is_empty() else None
            if top is None or (w == z and not cat.is_identity(top)):
                ok = False
                break
        if ok:
            return z, "maximal"
    return None
