"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import math
from itertools import combinations

ACCEPTANCE_LINES: list = []  # per-criterion pass/fail lines, shown in the summary

from morseflow import Cell, Complex, Matching, Mat, check_acyclic
from morseflow.cosheaves import Cosheaf
from morseflow.rings import mat_inverse


def cell_name(vertices) -> str:
    return "s" + "_".join(str(v) for v in vertices)


def simplicial_to_complex(facets) -> Complex:
    """Face poset of the simplicial complex generated by the given facets."""
    faces = set()
    for f in facets:
        f = tuple(sorted(set(f)))
        for size in range(1, len(f) + 1):
            faces.update(combinations(f, size))
    cells = [Cell(cell_name(f), len(f) - 1) for f in faces]
    covers = [
        (cell_name(a), cell_name(b))
        for a in faces
        for b in faces
        if len(b) == len(a) - 1 and set(b) <= set(a)
    ]
    return Complex(cells, covers)


RP2_FACETS = [
    (1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 6), (1, 5, 6),
    (2, 3, 6), (2, 4, 5), (2, 5, 6), (3, 4, 5), (3, 4, 6),
]


def random_complex(rng, max_cells=12) -> Complex:
    """Random small simplicial complex, returned as a face poset."""
    n = rng.randint(3, 5)
    vertices = list(range(1, n + 1))
    facets = [(v,) for v in vertices]
    for e in combinations(vertices, 2):
        if rng.random() < 0.6:
            facets.append(e)
    for t in combinations(vertices, 3):
        if all(tuple(sorted(p)) in facets for p in combinations(t, 2)) and rng.random() < 0.4:
            facets.append(t)
    cx = simplicial_to_complex(facets)
    while len(cx.cells) > max_cells:
        top = max(c.dim for c in cx.cells)
        tops = [c.id for c in cx.cells if c.dim == top]
        drop = rng.choice(tops)
        keep = [c for c in cx.cells if c.id != drop]
        covers = [(u, l) for (u, l) in cx.covers if drop not in (u, l)]
        cx = Complex(keep, covers)
    return cx


def random_acyclic_matching(rng, cx: Complex, max_pairs=None) -> Matching:
    """Greedy random matching kept acyclic pair by pair."""
    covers = sorted(cx.covers)
    rng.shuffle(covers)
    chosen: list = []
    used: set = set()
    for u, l in covers:
        if u in used or l in used:
            continue
        candidate = Matching(tuple(chosen + [(u, l)]), "classical")
        if check_acyclic(cx, candidate).ok:
            chosen.append((u, l))
            used.update((u, l))
            if max_pairs is not None and len(chosen) >= max_pairs:
                break
    return Matching(tuple(chosen), "classical")


def count_descending_chains(cx: Complex, x: str, y: str) -> int:
    """Brute-force count of strictly descending cell chains from x to y."""
    memo: dict = {}

    def go(a):
        if a == y:
            return 1
        if a in memo:
            return memo[a]
        total = 0
        for z in cx.strict_faces(a):
            if z == y or cx.is_face(z, y):
                total += go(z)
        memo[a] = total
        return total

    return go(x)


def det_int(rows) -> int:
    """Integer determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def minors_gcd_invariant_factors(m: Mat) -> list[int]:
    """Invariant factors via gcds of k x k minors: f_k = d_k / d_(k-1)."""
    rows, cols = m.rows, m.cols
    data = [list(map(int, r)) for r in m.data]
    out = []
    d_prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in combinations(range(rows), k):
            for ci in combinations(range(cols), k):
                sub = [[data[i][j] for j in ci] for i in ri]
                g = math.gcd(g, det_int(sub))
            if g == 1:
                break
        if g == 0:
            break
        out.append(g // d_prev)
        d_prev = g
    return out


def random_int_matrix(rng, rows, cols, lo=-4, hi=4) -> Mat:
    return Mat.from_rows([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]) if rows else Mat(0, cols, ())


def random_invertible(rng, n, ring) -> Mat:
    while True:
        m = Mat.from_rows([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if det_int(m.data) != 0:
            return m.normalized(ring)


def random_twisted_cosheaf(rng, cx: Complex, ring, rank=None) -> Cosheaf:
    """Constant cosheaf conjugated by a random invertible matrix per cell.

    Functoriality holds by construction and every map is invertible, so any
    matching has invertible matched extensions.
    """
    rank = rank or rng.randint(1, 2)
    twist = {cid: random_invertible(rng, rank, ring) for cid in cx.ids()}
    inv = {cid: mat_inverse(twist[cid], ring) for cid in cx.ids()}
    maps = {
        (u, l): twist[l].mul(inv[u], ring)
        for (u, l) in cx.covers
    }
    return Cosheaf(ring, {cid: rank for cid in cx.ids()}, maps)


def cycle_graph_complex(n: int) -> Complex:
    """Cyclic graph with n vertices and n edges (a combinatorial circle)."""
    cells = [Cell(f"v{i}", 0) for i in range(n)] + [Cell(f"e{i}", 1) for i in range(n)]
    covers = []
    for i in range(n):
        covers.append((f"e{i}", f"v{i}"))
        covers.append((f"e{i}", f"v{(i + 1) % n}"))
    return Complex(cells, covers)
