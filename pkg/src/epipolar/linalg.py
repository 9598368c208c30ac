"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`; vectors are tuples of fractions and
matrices are immutable :class:`RationalMatrix` values. Everything here is exact:
no floating point is involved anywhere in this module.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateConfigurationError, DimensionError

Rational = Fraction
RationalVector = tuple  # tuple[Fraction, ...]


def q(value) -> Fraction:
    """Coerce ints, fractions and decimal strings to an exact Fraction.

    Floats are rejected: they would silently import binary rounding error.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip().replace("−", "-"))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def vector(values: Iterable) -> RationalVector:
    v = tuple(q(x) for x in values)
    if not v:
        raise DimensionError("vectors must have length >= 1")
    return v


def homogenize(a, b) -> RationalVector:
    """Affine point (a, b) -> (a, b, 1)."""
    return (q(a), q(b), Fraction(1))


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DimensionError("matrix dimensions must be positive")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise DimensionError("empty matrix")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, tuple(q(x) for r in rows for x in r))

    @classmethod
    def from_vector(cls, v: Sequence, rows: int = 3, cols: int = 3) -> "RationalMatrix":
        """Reshape a row-major vector (the ``vec`` convention: rows concatenated)."""
        return cls(rows, cols, tuple(q(x) for x in v))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "RationalMatrix":
        return cls.from_rows(cols).T

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> RationalVector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> RationalVector:
        return self.entries[j::self.cols]

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def vec(self) -> RationalVector:
        return self.entries

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(
            self.cols, self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
        )

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(self.rows, self.cols,
                              tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(self.rows, self.cols,
                              tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def scale(self, c) -> "RationalMatrix":
        c = q(c)
        return RationalMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            cols = [other.column(j) for j in range(other.cols)]
            return RationalMatrix(
                self.rows, other.cols,
                tuple(_dot(self.row(i), c) for i in range(self.rows) for c in cols),
            )
        v = tuple(other)
        if len(v) != self.cols:
            raise DimensionError(f"cannot multiply {self.shape} by vector of length {len(v)}")
        return tuple(_dot(self.row(i), v) for i in range(self.rows))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def to_float(self):
        import numpy as np
        return np.array([[float(x) for x in self.row(i)] for i in range(self.rows)])

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"RationalMatrix([{body}])"


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def dot(a: Sequence, b: Sequence) -> Fraction:
    if len(a) != len(b):
        raise DimensionError("length mismatch")
    return _dot(a, b)


def cross(a: Sequence, b: Sequence) -> RationalVector:
    if len(a) != 3 or len(b) != 3:
        raise DimensionError("cross product needs 3-vectors")
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def skew(v: Sequence) -> RationalMatrix:
    """The cross-product matrix ``[v]_x`` with ``skew(v) @ w == cross(v, w)``."""
    if len(v) != 3:
        raise DimensionError(f"skew needs a 3-vector, got length {len(v)}")
    v1, v2, v3 = (q(x) for x in v)
    z = Fraction(0)
    return RationalMatrix(3, 3, (z, -v3, v2, v3, z, -v1, -v2, v1, z))


def kron_row(y: Sequence, x: Sequence) -> RationalVector:
    """The row ``y^T (x) x^T`` so that ``kron_row(y, x) . vec(F) == y^T F x``."""
    return tuple(a * b for a in y for b in x)


# -- elimination -------------------------------------------------------------

def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list:
    out = []
    for r in rows:
        den = math.lcm(*(Fraction(x).denominator for x in r)) if r else 1
        out.append([int(Fraction(x) * den) for x in r])
    return out


def _bareiss_echelon(a: list) -> tuple:
    """In-place fraction-free row echelon form of an integer matrix.

    Returns (pivot columns, last pivot). Every stored entry is a minor of the
    input, so all divisions are exact.
    """
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            aic = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c + 1, ncols):
                row_i[j] = (piv * row_i[j] - aic * row_r[j]) // prev
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return pivots, prev


def rank(m: RationalMatrix) -> int:
    """Exact rank via fraction-free (Bareiss) elimination."""
    a = _integer_rows([m.row(i) for i in range(m.rows)])
    pivots, _ = _bareiss_echelon(a)
    return len(pivots)


def det(m: RationalMatrix) -> Fraction:
    if m.rows != m.cols:
        raise DimensionError("determinant of a non-square matrix")
    if m.rows == 3:
        a, b, c, d, e, f, g, h, i = m.entries
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    rows = [m.row(i) for i in range(m.rows)]
    scale = Fraction(1)
    for r in rows:
        scale /= math.lcm(*(x.denominator for x in r))
    a = _integer_rows(rows)
    sign = 1
    n = m.rows
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1] * scale


def rref(m: RationalMatrix) -> tuple:
    """Reduced row echelon form. Returns (list of nonzero rows, pivot columns)."""
    a = [list(m.row(i)) for i in range(m.rows)]
    pivots = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        p = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in a[:r]], pivots


def kernel_basis(m: RationalMatrix) -> list:
    """Canonical basis of the right null space.

    The basis is itself in reduced row echelon form (as the rows of a
    ``k x cols`` matrix), so it depends only on the null space and not on how
    it was computed.
    """
    rows, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    if not free:
        return []
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = -row[f]
        basis.append(v)
    canon, _ = rref(RationalMatrix.from_rows(basis))
    return canon


def left_kernel_basis(m: RationalMatrix) -> list:
    return kernel_basis(m.T)


def inverse(m: RationalMatrix) -> RationalMatrix:
    if m.rows != m.cols:
        raise DimensionError("inverse of a non-square matrix")
    n = m.rows
    aug = RationalMatrix.from_rows(
        [list(m.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    )
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ZeroDivisionError("matrix is singular")
    return RationalMatrix.from_rows([r[n:] for r in rows])


def stack(vectors: Sequence[Sequence]) -> RationalMatrix:
    return RationalMatrix.from_rows([list(v) for v in vectors])


def proportional(a: Sequence, b: Sequence) -> bool:
    """True iff a and b are linearly dependent (a ~ b, or either is zero)."""
    return all(x == 0 for x in cross(a, b)) if len(a) == 3 else rank(stack([a, b])) < 2


# -- projective maps of the plane ------------------------------------------

def solve_projectivity(pairs: Sequence) -> RationalMatrix:
    """Invertible H with ``H x_i ~ y_i`` for four pairs of homogeneous 3-vectors.

    Points need not be affine. Requires that no three of the x's and no three
    of the y's are linearly dependent.
    """
    pairs = [(vector(x), vector(y)) for x, y in pairs]
    if len(pairs) != 4:
        raise DimensionError("a projectivity of the plane needs exactly 4 pairs")
    for side, pts in (("source", [p[0] for p in pairs]), ("target", [p[1] for p in pairs])):
        for trip in itertools.combinations(pts, 3):
            if det(stack(trip)) == 0:
                raise DegenerateConfigurationError(f"three {side} points are collinear")
    # y x (H x) = 0, three rows per pair, unknown vec(H)
    rows = []
    for x, y in pairs:
        for k in range(3):
            row = [Fraction(0)] * 9
            i, j = (k + 1) % 3, (k + 2) % 3
            # (y x Hx)_k = y_i (Hx)_j - y_j (Hx)_i
            for c in range(3):
                row[3 * j + c] += y[i] * x[c]
                row[3 * i + c] -= y[j] * x[c]
            rows.append(row)
    ker = kernel_basis(RationalMatrix.from_rows(rows))
    assert len(ker) == 1, "four points in general position fix H up to scale"
    h = RationalMatrix.from_vector(ker[0])
    assert det(h) != 0
    return h


class Collinearity(enum.IntEnum):
    ALL_EQUAL = 1
    COLLINEAR = 2
    GENERAL = 3


def collinearity_class(points: Sequence) -> Collinearity:
    if not points:
        raise DimensionError("need at least one point")
    return Collinearity(rank(stack(points)))


def are_collinear(points: Sequence) -> bool:
    return rank(stack(points)) <= 2


def line_normalizer(points: Sequence, anchor: Sequence) -> RationalMatrix:
    """Affine map sending the line through ``points`` to the line ``{x1 = 0}``.

    ``anchor`` is sent to the origin ``(0, 0, 1)``. The linear part is a
    permutation composed with a shear, so the result stays rational. Every
    point on the line maps to something of the form ``(0, alpha, 1)``.
    """
    anchor = vector(anchor)
    pts = [vector(p) for p in points]
    for p in pts + [anchor]:
        if p[2] != 1:
            raise DegenerateConfigurationError("line_normalizer expects affine points")
    if not are_collinear(pts + [anchor]):
        raise DegenerateConfigurationError("points are not collinear with the anchor")
    d = next(((p[0] - anchor[0], p[1] - anchor[1]) for p in pts
              if (p[0], p[1]) != (anchor[0], anchor[1])), None)
    if d is None or d[0] == 0:
        # already vertical (or no direction to respect)
        w = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    else:
        w = ((-d[1] / d[0], Fraction(1)), (Fraction(1), Fraction(0)))
    z = (-(w[0][0] * anchor[0] + w[0][1] * anchor[1]),
         -(w[1][0] * anchor[0] + w[1][1] * anchor[1]))
    return RationalMatrix.from_rows([
        [w[0][0], w[0][1], z[0]],
        [w[1][0], w[1][1], z[1]],
        [0, 0, 1],
    ])
