"""Geometric nerves, order complexes and their normalized chain complexes."""

from __future__ import annotations

from dataclasses import dataclass

from .categories import PCategory, sort_key
from .homology import ChainComplex
from .rings import Mat, Ring


@dataclass(frozen=True)
class Simplex:
    """n-simplex of a nerve: objects x_0..x_n plus morphisms f_ij for i < j.

    ``fs[i]`` lists the morphisms from vertex i to vertices i+1..n.  Order
    complexes of posets carry no morphism data (``fs`` is None): their
    simplices are strict chains and are never degenerate.
    """

    objects: tuple
    fs: tuple | None

    @property
    def dim(self) -> int:
        return len(self.objects) - 1

    def f(self, i: int, j: int):
        return self.fs[i][j - i - 1]

    def face(self, k: int) -> "Simplex":
        objs = self.objects[:k] + self.objects[k + 1:]
        if self.fs is None:
            return Simplex(objs, None)
        kept = [i for i in range(self.dim + 1) if i != k]
        fs = tuple(
            tuple(self.f(kept[a], kept[b]) for b in range(a + 1, len(kept)))
            for a in range(len(kept) - 1)
        )
        return Simplex(objs, fs)

    def key(self):
        if self.fs is None:
            return (self.objects, ())
        return (self.objects, tuple(tuple(sort_key(m) for m in row) for row in self.fs))


def is_degenerate(cat: PCategory | None, s: Simplex) -> bool:
    """A simplex collapses at k when vertices k, k+1 repeat with identity glue."""
    if s.fs is None:
        return False
    for k in range(s.dim):
        if s.objects[k] != s.objects[k + 1]:
            continue
        if not cat.is_identity(s.f(k, k + 1)):
            continue
        if any(s.f(i, k) != s.f(i, k + 1) for i in range(k)):
            continue
        if any(s.f(k, j) != s.f(k + 1, j) for j in range(k + 2, s.dim + 1)):
            continue
        return True
    return False


@dataclass
class SimplicialSetSkeleton:
    maxdim: int
    simplices: dict  # dim -> list of Simplex (degenerate ones included)
    cat: PCategory | None = None

    def nondegenerate(self, d: int):
        return [s for s in self.simplices.get(d, []) if not is_degenerate(self.cat, s)]

    def sizes(self):
        return {d: len(self.nondegenerate(d)) for d in range(self.maxdim + 1)}


def geometric_nerve(cat: PCategory, maxdim: int) -> SimplicialSetSkeleton:
    """Simplices are tuples of objects with compatible morphism triangles.

    Beyond dimension 2 a simplex exists exactly when all its triangles do, so
    each dimension extends the previous one by a vertex.
    """
    objects = sorted(cat.objects)
    simplices = {0: [Simplex((x,), ()) for x in objects]}
    for d in range(1, maxdim + 1):
        level = []
        for s in simplices[d - 1]:
            for x in objects:
                hom_last = cat.hom(s.objects[-1], x)
                if hom_last.is_empty():
                    continue
                choices = [None] * d  # choices[i] = f_(i, d)

                def fill(i, acc):
                    if i < 0:
                        fs = tuple(
                            s.fs[j] + (acc[j],) for j in range(d - 1)
                        ) + ((acc[d - 1],),)
                        level.append(Simplex(s.objects + (x,), fs))
                        return
                    for m in cat.hom(s.objects[i], x).elements:
                        ok = all(
                            cat.leq(m, cat.compose(s.f(i, j), acc[j]))
                            for j in range(i + 1, d)
                        )
                        if ok:
                            acc2 = list(acc)
                            acc2[i] = m
                            fill(i - 1, acc2)

                fill(d - 1, choices)
        level.sort(key=Simplex.key)
        simplices[d] = level
    return SimplicialSetSkeleton(maxdim, simplices, cat)


def order_complex(elements, leq, maxdim: int | None = None) -> SimplicialSetSkeleton:
    """Chains of a finite poset, enumerated directly."""
    elements = sorted(elements, key=_poset_key)
    if maxdim is None:
        maxdim = max(len(elements) - 1, 0)
    strict = {
        (a, b)
        for a in elements
        for b in elements
        if a != b and leq(a, b)
    }
    simplices = {0: [Simplex((a,), None) for a in elements]}
    for d in range(1, maxdim + 1):
        level = []
        for s in simplices[d - 1]:
            last = s.objects[-1]
            for b in elements:
                if (last, b) in strict:
                    level.append(Simplex(s.objects + (b,), None))
        simplices[d] = level
    return SimplicialSetSkeleton(maxdim, simplices, None)


def _poset_key(el):
    try:
        return (0, sort_key(el))
    except AttributeError:
        return (1, repr(el))


def normalized_chain_complex(skel: SimplicialSetSkeleton, ring: Ring) -> ChainComplex:
    """Generators are the nondegenerate simplices; degenerate faces are dropped."""
    gens = {d: skel.nondegenerate(d) for d in range(skel.maxdim + 1)}
    index = {d: {s: i for i, s in enumerate(gens[d])} for d in gens}
    ranks = tuple(len(gens[d]) for d in range(skel.maxdim + 1))
    boundaries = {}
    for d in range(1, skel.maxdim + 1):
        rows = [[ring.zero] * ranks[d] for _ in range(ranks[d - 1])]
        for j, s in enumerate(gens[d]):
            for k in range(d + 1):
                face = s.face(k)
                if is_degenerate(skel.cat, face):
                    continue
                i = index[d - 1][face]
                coeff = ring.normalize(1 if k % 2 == 0 else -1)
                rows[i][j] = ring.add(rows[i][j], coeff)
        boundaries[d] = Mat.from_rows(rows) if ranks[d - 1] else Mat.zeros(0, ranks[d])
    labels = tuple(tuple(repr(s.objects) for s in gens[d]) for d in range(skel.maxdim + 1))
    return ChainComplex(ring, ranks, boundaries, labels=labels)


def greedy_collapses_to_point(skel: SimplicialSetSkeleton) -> bool:
    """Elementary collapses of the chain complex of a poset, greedily applied.

    Works on order complexes (no morphism data).  Returns True when the
    complex collapses to a single vertex; False is inconclusive.
    """
    cells = set()
    for d in range(skel.maxdim + 1):
        for s in skel.nondegenerate(d):
            cells.add(s.objects)
    if not cells:
        return False

    def faces(tup):
        return [tup[:k] + tup[k + 1:] for k in range(len(tup))] if len(tup) > 1 else []

    changed = True
    while changed:
        changed = False
        cofaces: dict = {}
        for c in cells:
            for f in faces(c):
                cofaces.setdefault(f, []).append(c)
        for f, over in sorted(cofaces.items()):
            if len(over) == 1 and f in cells:
                cells.discard(f)
                cells.discard(over[0])
                changed = True
                break
    return len(cells) == 1 and len(next(iter(cells))) == 1
