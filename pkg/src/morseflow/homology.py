"""Chain complexes over exact rings, Smith normal form, Betti numbers and torsion."""

from __future__ import annotations

from dataclasses import dataclass

from .rings import Mat, Ring, rank_over_field


class NotAComplex(Exception):
    """Raised when consecutive boundary maps fail to compose to zero."""


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def _gcdext(a: int, b: int):
    """Extended gcd: returns (g, s, t) with s*a + t*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def smith_normal_form(m: Mat, pivot: str = "min"):
    """Diagonalize an integer matrix: returns (U, D, V) with U*M*V = D.

    U and V are unimodular and the diagonal of D is a divisibility chain of
    non-negative integers.  ``pivot`` selects the pivot heuristic: "min"
    (smallest absolute value, limits entry growth) or "first".
    """
    a = [[int(x) for x in row] for row in m.data]
    nr, nc = m.rows, m.cols
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def row_op(i, j, s, t, s2, t2):
        # rows i, j <- (s*rowi + t*rowj, s2*rowi + t2*rowj)
        for mat in (a, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [s * x + t * y for x, y in zip(ri, rj)]
            mat[j] = [s2 * x + t2 * y for x, y in zip(ri, rj)]

    def col_op(i, j, s, t, s2, t2):
        for mat in (a, v):
            for row in mat:
                x, y = row[i], row[j]
                row[i] = s * x + t * y
                row[j] = s2 * x + t2 * y

    def find_pivot(t):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x != 0:
                    if pivot == "first":
                        return i, j
                    if best is None or abs(x) < abs(best[2]):
                        best = (i, j, x)
        return (best[0], best[1]) if best else None

    t = 0
    while t < min(nr, nc):
        loc = find_pivot(t)
        if loc is None:
            break
        pi, pj = loc
        if pi != t:
            a[t], a[pi] = a[pi], a[t]
            u[t], u[pi] = u[pi], u[t]
        if pj != t:
            for mat in (a, v):
                for row in mat:
                    row[t], row[pj] = row[pj], row[t]
        while True:
            # clear column t
            for i in range(t + 1, nr):
                if a[i][t] == 0:
                    continue
                p, x = a[t][t], a[i][t]
                if x % p == 0:
                    q = x // p
                    a[i] = [y - q * z for y, z in zip(a[i], a[t])]
                    u[i] = [y - q * z for y, z in zip(u[i], u[t])]
                else:
                    g, s, tt = _gcdext(p, x)
                    row_op(t, i, s, tt, -(x // g), p // g)
            # clear row t
            for j in range(t + 1, nc):
                if a[t][j] == 0:
                    continue
                p, x = a[t][t], a[t][j]
                if x % p == 0:
                    q = x // p
                    for mat in (a, v):
                        for row in mat:
                            row[j] -= q * row[t]
                else:
                    g, s, tt = _gcdext(p, x)
                    col_op(t, j, s, tt, -(x // g), p // g)
            if any(a[i][t] != 0 for i in range(t + 1, nr)):
                continue
            if any(a[t][j] != 0 for j in range(t + 1, nc)):
                continue
            # enforce divisibility: pivot must divide the rest of the block
            bad = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % a[t][t] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            u[t] = [x + y for x, y in zip(u[t], u[bad])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    return (
        Mat.from_rows(u) if nr else Mat(0, 0, ()),
        Mat(nr, nc, tuple(tuple(row) for row in a)),
        Mat.from_rows(v) if nc else Mat(0, 0, ()),
    )


def invariant_factors(m: Mat) -> list[int]:
    """Nonzero diagonal entries of the Smith form, in divisibility order.

    Unit pivots are eliminated with a fast sparse pass first; incidence-style
    matrices reduce almost entirely this way and only a small core ever
    reaches the dense routine.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, row in enumerate(m.data):
        for j, x in enumerate(row):
            if x:
                rows.setdefault(i, {})[j] = int(x)
                cols.setdefault(j, set()).add(i)
    units = 0
    while True:
        loc = None
        for i, row in rows.items():
            for j, x in row.items():
                if x in (1, -1):
                    loc = (i, j, x)
                    break
            if loc:
                break
        if not loc:
            break
        pi, pj, pv = loc
        prow = rows.pop(pi)
        for j in prow:
            cols[j].discard(pi)
        for i in list(cols.get(pj, ())):
            row = rows[i]
            f = row[pj] * pv  # pv is its own inverse
            for j, x in prow.items():
                nx = row.get(j, 0) - f * x
                if nx:
                    row[j] = nx
                    cols.setdefault(j, set()).add(i)
                else:
                    row.pop(j, None)
                    cols.get(j, set()).discard(i)
            if not row:
                del rows[i]
        cols.pop(pj, None)
        units += 1
    live_rows = sorted(rows)
    live_cols = sorted({j for row in rows.values() for j in row})
    core = Mat.from_rows(
        [[rows[i].get(j, 0) for j in live_cols] for i in live_rows]
    ) if live_rows else Mat(0, 0, ())
    factors = [1] * units
    if core.rows and core.cols:
        _, d, _ = smith_normal_form(core)
        factors.extend(int(d[i, i]) for i in range(min(d.rows, d.cols)) if d[i, i] != 0)
    factors.sort()
    return factors


def integer_rank(m: Mat) -> int:
    return len(invariant_factors(m))


# ---------------------------------------------------------------------------
# Chain complexes and homology summaries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainComplex:
    """Free chain complex: ranks per degree and boundaries d_n: C_n -> C_(n-1)."""

    ring: Ring
    ranks: tuple[int, ...]
    boundaries: dict  # degree n >= 1 -> Mat of shape ranks[n-1] x ranks[n]
    labels: tuple = ()  # optional generator names per degree, for reports

    def __post_init__(self):
        for n, d in self.boundaries.items():
            if n < 1 or n >= len(self.ranks):
                raise ValueError(f"boundary degree {n} out of range")
            if (d.rows, d.cols) != (self.ranks[n - 1], self.ranks[n]):
                raise ValueError(
                    f"d_{n} has shape {d.rows}x{d.cols}, expected "
                    f"{self.ranks[n - 1]}x{self.ranks[n]}"
                )

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def boundary(self, n: int) -> Mat:
        if 1 <= n <= self.top and n in self.boundaries:
            return self.boundaries[n]
        rows = self.ranks[n - 1] if 1 <= n <= self.top else 0
        cols = self.ranks[n] if 0 <= n <= self.top else 0
        return Mat.zeros(rows, cols, self.ring.zero)

    def check_boundary_squares_to_zero(self):
        for n in range(2, self.top + 1):
            prod = self.boundary(n - 1).mul(self.boundary(n), self.ring)
            if not prod.is_zero(self.ring):
                raise NotAComplex(f"d_{n-1} o d_{n} != 0")


@dataclass(frozen=True)
class HomologySummary:
    """Per-degree Betti number and (over Z) torsion coefficients."""

    ring_name: str
    groups: tuple  # tuple of (betti, torsion tuple)

    def betti(self) -> tuple[int, ...]:
        return tuple(b for b, _ in self.groups)

    def torsion(self) -> tuple:
        return tuple(t for _, t in self.groups)

    def group_str(self, n: int) -> str:
        b, tors = self.groups[n]
        parts = []
        sym = "Z" if self.ring_name == "Z" else self.ring_name
        if b == 1:
            parts.append(sym)
        elif b > 1:
            parts.append(f"{sym}^{b}")
        parts.extend(f"Z/{t}" for t in tors)
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return ", ".join(f"H_{n} = {self.group_str(n)}" for n in range(len(self.groups)))


def homology(cc: ChainComplex) -> HomologySummary:
    """Betti numbers (and torsion over Z) of an exact chain complex."""
    cc.check_boundary_squares_to_zero()
    ring = cc.ring
    top = cc.top
    if ring.is_field():
        ranks = {n: rank_over_field(cc.boundary(n).normalized(ring), ring) for n in range(1, top + 1)}
        groups = []
        for n in range(top + 1):
            b = cc.ranks[n] - ranks.get(n, 0) - ranks.get(n + 1, 0)
            groups.append((b, ()))
        return HomologySummary(ring.name, tuple(groups))
    factor_lists = {n: invariant_factors(cc.boundary(n)) for n in range(1, top + 1)}
    groups = []
    for n in range(top + 1):
        rank_dn = len(factor_lists.get(n, []))
        rank_dn1 = len(factor_lists.get(n + 1, []))
        betti = cc.ranks[n] - rank_dn - rank_dn1
        torsion = tuple(f for f in factor_lists.get(n + 1, []) if f > 1)
        groups.append((betti, torsion))
    return HomologySummary(ring.name, tuple(groups))


def betti_numbers(cc: ChainComplex) -> tuple[int, ...]:
    return homology(cc).betti()
