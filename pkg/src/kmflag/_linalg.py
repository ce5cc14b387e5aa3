"""Exact linear algebra over the rationals for small dense systems.

Vectors are plain lists of int or Fraction; results are normalized to
primitive integer vectors where a scale-free answer makes sense.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def primitive(vec):
    """Scale a rational vector to a primitive integer vector, first nonzero
    entry positive."""
    scale = 1
    for x in vec:
        if isinstance(x, Fraction):
            scale = scale * x.denominator // gcd(scale, x.denominator)
    ints = [int(x * scale) if isinstance(x, Fraction) else x * scale for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return [0] * len(vec)
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        g = -g
    return [x // g for x in ints]


class RowSpan:
    """Incrementally maintained reduced row-echelon span of integer rows."""

    def __init__(self, width: int):
        self.width = width
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def residual(self, vec):
        """Reduce a copy of vec against the span; exact, returns a new list."""
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = Fraction(v[p], row[p])
                v = [x - f * y if y else x for x, y in zip(v, row)]
        return v

    def contains(self, vec) -> bool:
        return not any(self.residual(vec))

    def add(self, vec) -> bool:
        """Add vec to the span; True if the dimension grew."""
        v = self.residual(vec)
        p = next((i for i, x in enumerate(v) if x), None)
        if p is None:
            return False
        v = primitive(v)
        for row in self.rows:
            if row[p]:
                f = Fraction(row[p], v[p])
                for i in range(p, self.width):
                    if v[i]:
                        row[i] -= f * v[i]
        # keep rows primitive integers after back-elimination
        self.rows = [primitive(r) for r in self.rows]
        pos = next((k for k, q in enumerate(self.pivots) if q > p), len(self.pivots))
        self.rows.insert(pos, v)
        self.pivots.insert(pos, p)
        return True


def kernel_basis(rows, width: int):
    """Primitive integer basis of {v : R v = 0} for the given equation rows."""
    span = RowSpan(width)
    for r in rows:
        span.add(r)
    pivot_set = set(span.pivots)
    basis = []
    for free in range(width):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * width
        v[free] = Fraction(1)
        for row, p in zip(span.rows, span.pivots):
            if row[free]:
                v[p] = -Fraction(row[free], row[p])
        basis.append(primitive(v))
    return basis


def solve_right(a_rows, b_rows, ncols: int):
    """Solve A X = B for one X (free coordinates zero); A given as rows of
    length ncols, B as rows aligned with A.  Raises ValueError when
    inconsistent.  X is returned as a list of ncols rows of rationals."""
    m = len(a_rows)
    k = len(b_rows[0]) if m and b_rows else 0
    aug = [list(ar) + list(br) for ar, br in zip(a_rows, b_rows)]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, m) if aug[i][col]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = Fraction(aug[r][col]) if aug[r][col] != 1 else None
        if pv is not None:
            aug[r] = [x / pv if x else x for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][col]:
                f = aug[i][col]
                row_r = aug[r]
                aug[i] = [x - f * y if y else x for x, y in zip(aug[i], row_r)]
        pivots.append(col)
        r += 1
    for i in range(r, m):
        if any(aug[i][ncols:]):
            raise ValueError("inconsistent linear system")
    x = [[0] * k for _ in range(ncols)]
    for idx, col in enumerate(pivots):
        x[col] = aug[idx][ncols:]
    return x
