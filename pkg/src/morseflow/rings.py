"""Exact coefficient rings and small dense matrices.

Everything is computed with arbitrary-precision integers, exact rationals
or prime-field residues; there is no floating point anywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class NotInvertible(Exception):
    """A map that must be invertible over the coefficient ring is not."""


class Ring:
    """Base class for the supported exact coefficient rings."""

    name: str

    def normalize(self, x):
        raise NotImplementedError

    def add(self, a, b):
        return self.normalize(a + b)

    def sub(self, a, b):
        return self.normalize(a - b)

    def mul(self, a, b):
        return self.normalize(a * b)

    def neg(self, a):
        return self.normalize(-a)

    @property
    def zero(self):
        return self.normalize(0)

    @property
    def one(self):
        return self.normalize(1)

    def is_zero(self, a):
        return self.normalize(a) == self.zero

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_field(self) -> bool:
        raise NotImplementedError

    def parse_scalar(self, token):
        """Parse a JSON scalar: an int, or a 'p/q' string."""
        if isinstance(token, bool):
            raise ValueError("booleans are not ring elements")
        if isinstance(token, int):
            return self.normalize(token)
        if isinstance(token, str):
            num, _, den = token.partition("/")
            if den:
                return self.normalize(Fraction(int(num), int(den)))
            return self.normalize(int(num))
        raise ValueError(f"cannot parse ring element {token!r}")

    def format_scalar(self, a):
        a = self.normalize(a)
        if isinstance(a, Fraction):
            if a.denominator == 1:
                return int(a)
            return f"{a.numerator}/{a.denominator}"
        return int(a)

    def __repr__(self):
        return self.name


class IntegerRing(Ring):
    name = "Z"

    def normalize(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return int(x)
        return int(x)

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if not self.is_unit(a):
            raise NotInvertible(f"{a} is not a unit in Z")
        return a

    def is_field(self):
        return False


class RationalField(Ring):
    name = "Q"

    def normalize(self, x):
        return Fraction(x)

    def is_unit(self, a):
        return Fraction(a) != 0

    def inv(self, a):
        a = Fraction(a)
        if a == 0:
            raise NotInvertible("0 is not invertible")
        return 1 / a

    def is_field(self):
        return True


class PrimeField(Ring):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"Fp:{p}"

    def normalize(self, x):
        if isinstance(x, Fraction):
            den = self.normalize(x.denominator)
            return self.mul(x.numerator % self.p, self.inv(den))
        return int(x) % self.p

    def is_unit(self, a):
        return self.normalize(a) != 0

    def inv(self, a):
        a = self.normalize(a)
        if a == 0:
            raise NotInvertible(f"0 is not invertible in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def is_field(self):
        return True


ZZ = IntegerRing()
QQ = RationalField()


def ring_from_name(name: str) -> Ring:
    if name == "Z":
        return ZZ
    if name == "Q":
        return QQ
    if name.startswith("Fp:"):
        return PrimeField(int(name.split(":", 1)[1]))
    raise ValueError(f"unknown ring {name!r}; expected Z, Q or Fp:<p>")


@dataclass(frozen=True)
class Mat:
    """Immutable dense matrix; the shape is explicit so empty matrices work."""

    rows: int
    cols: int
    data: tuple  # tuple of row tuples

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("matrix data does not match shape")

    @staticmethod
    def from_rows(rows) -> "Mat":
        data = tuple(tuple(r) for r in rows)
        n = len(data[0]) if data else 0
        return Mat(len(data), n, data)

    @staticmethod
    def zeros(rows: int, cols: int, zero=0) -> "Mat":
        return Mat(rows, cols, tuple(tuple(zero for _ in range(cols)) for _ in range(rows)))

    @staticmethod
    def identity(n: int, one=1, zero=0) -> "Mat":
        return Mat(n, n, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def mul(self, other: "Mat", ring: Ring) -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
        rows = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = ring.zero
                for k in range(self.cols):
                    acc = ring.add(acc, ring.mul(self.data[i][k], other.data[k][j]))
                row.append(acc)
            rows.append(tuple(row))
        return Mat(self.rows, other.cols, tuple(rows))

    def add(self, other: "Mat", ring: Ring) -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in add")
        return Mat(
            self.rows,
            self.cols,
            tuple(
                tuple(ring.add(self.data[i][j], other.data[i][j]) for j in range(self.cols))
                for i in range(self.rows)
            ),
        )

    def scale(self, c, ring: Ring) -> "Mat":
        return Mat(
            self.rows,
            self.cols,
            tuple(tuple(ring.mul(c, x) for x in row) for row in self.data),
        )

    def is_zero(self, ring: Ring) -> bool:
        return all(ring.is_zero(x) for row in self.data for x in row)

    def normalized(self, ring: Ring) -> "Mat":
        return Mat(
            self.rows,
            self.cols,
            tuple(tuple(ring.normalize(x) for x in row) for row in self.data),
        )


def mat_inverse(m: Mat, ring: Ring) -> Mat:
    """Inverse of a square matrix over the ring.

    Over Z the inverse must again be integral (determinant +-1), otherwise
    NotInvertible is raised.
    """
    if m.rows != m.cols:
        raise NotInvertible("only square matrices can be inverted")
    n = m.rows
    a = [[Fraction(x) for x in row] for row in m.data]
    inv = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise NotInvertible("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        d = a[col][col]
        a[col] = [x / d for x in a[col]]
        inv[col] = [x / d for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    try:
        rows = tuple(tuple(ring.normalize(x) for x in row) for row in inv)
    except ValueError as exc:
        raise NotInvertible(f"inverse is not defined over {ring.name}") from exc
    return Mat(n, n, rows)


def rank_over_field(m: Mat, ring: Ring) -> int:
    """Rank by Gaussian elimination with exact field arithmetic."""
    if not ring.is_field():
        raise ValueError("rank_over_field requires a field")
    rows = [list(map(ring.normalize, row)) for row in m.data]
    rank = 0
    col = 0
    nrows, ncols = m.rows, m.cols
    while rank < nrows and col < ncols:
        piv = next((r for r in range(rank, nrows) if not ring.is_zero(rows[r][col])), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = ring.inv(rows[rank][col])
        rows[rank] = [ring.mul(inv, x) for x in rows[rank]]
        for r in range(nrows):
            if r != rank and not ring.is_zero(rows[r][col]):
                f = rows[r][col]
                rows[r] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank
