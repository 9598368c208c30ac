"""Homogeneous forms of low degree and linear pencils of 3x3 matrices.

A :class:`CubicForm` stores a homogeneous polynomial over the rationals as a
mapping from exponent tuples to nonzero coefficients. Despite the name it
represents forms of any degree 0..3, since 2x2 minors (degree 2) and linear
entries (degree 1) of a pencil flow through the same code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import ContractViolation, DimensionError
from .linalg import RationalMatrix, q, rank, stack

MAX_DEGREE = 3
MAX_VARS = 9


@dataclass(frozen=True)
class CubicForm:
    nvars: int
    degree: int
    terms: tuple = ()  # sorted ((exponents, coeff), ...), coeffs nonzero

    def __post_init__(self):
        if not 1 <= self.nvars <= MAX_VARS:
            raise DimensionError(f"nvars must be in 1..{MAX_VARS}")
        if not 0 <= self.degree <= MAX_DEGREE:
            raise DimensionError(f"degree must be in 0..{MAX_DEGREE}")
        for exps, c in self.terms:
            if len(exps) != self.nvars or sum(exps) != self.degree:
                raise DimensionError(f"bad monomial {exps} for a degree-{self.degree} form")
            if c == 0:
                raise ValueError("zero coefficients must not be stored")

    @classmethod
    def from_dict(cls, nvars: int, degree: int, coeffs: dict) -> "CubicForm":
        items = sorted(((tuple(e), q(c)) for e, c in coeffs.items() if c != 0), reverse=True)
        return cls(nvars, degree, tuple(items))

    @classmethod
    def linear(cls, coeffs: Sequence) -> "CubicForm":
        n = len(coeffs)
        return cls.from_dict(n, 1, {_unit(n, i): c for i, c in enumerate(coeffs)})

    @classmethod
    def constant(cls, nvars: int, c) -> "CubicForm":
        return cls.from_dict(nvars, 0, {(0,) * nvars: c})

    @property
    def coeffs(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.coeffs.get(tuple(exps), Fraction(0))

    def __add__(self, other: "CubicForm") -> "CubicForm":
        self._compatible(other)
        out = self.coeffs
        for e, c in other.terms:
            out[e] = out.get(e, Fraction(0)) + c
        return CubicForm.from_dict(self.nvars, self.degree, out)

    def __neg__(self) -> "CubicForm":
        return self.scale(-1)

    def __sub__(self, other: "CubicForm") -> "CubicForm":
        return self + (-other)

    def scale(self, c) -> "CubicForm":
        c = q(c)
        return CubicForm.from_dict(self.nvars, self.degree, {e: c * v for e, v in self.terms})

    def __mul__(self, other: "CubicForm") -> "CubicForm":
        if self.nvars != other.nvars:
            raise DimensionError("forms in different numbers of variables")
        out: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return CubicForm.from_dict(self.nvars, self.degree + other.degree, out)

    def __pow__(self, k: int) -> "CubicForm":
        result = CubicForm.constant(self.nvars, 1)
        for _ in range(k):
            result = result * self
        return result

    def __call__(self, u: Sequence) -> Fraction:
        if len(u) != self.nvars:
            raise DimensionError("wrong number of arguments")
        exact = not any(isinstance(x, float) for x in u)
        u = [q(x) for x in u] if exact else [float(x) for x in u]
        total = Fraction(0) if exact else 0.0
        for exps, c in self.terms:
            term = c if exact else float(c)
            for x, k in zip(u, exps):
                if k:
                    term = term * x ** k
            total += term
        return total

    def derivative(self, i: int) -> "CubicForm":
        """Partial derivative with respect to u_i (degree drops by one)."""
        if self.degree == 0:
            raise ContractViolation("cannot differentiate a constant form")
        out: dict = {}
        for exps, c in self.terms:
            if exps[i]:
                e = list(exps)
                e[i] -= 1
                out[tuple(e)] = c * exps[i]
        return CubicForm.from_dict(self.nvars, self.degree - 1, out)

    def substitute(self, images: Sequence["CubicForm"]) -> "CubicForm":
        """Compose with a linear change of variables ``u_i -> images[i]``."""
        if len(images) != self.nvars:
            raise DimensionError("need one image per variable")
        n = images[0].nvars
        total = CubicForm.from_dict(n, self.degree, {})
        for exps, c in self.terms:
            term = CubicForm.constant(n, c)
            for img, k in zip(images, exps):
                if k:
                    term = term * img ** k
            total = total + term
        return total

    def coefficient_list(self) -> list:
        """All coefficients in descending lexicographic monomial order, zeros included."""
        return [self.coefficient(e) for e in monomials(self.nvars, self.degree)]

    def _compatible(self, other):
        if (self.nvars, self.degree) != (other.nvars, other.degree):
            raise DimensionError("forms differ in number of variables or degree")

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.terms:
            mono = "*".join(f"u{i + 1}" + (f"^{k}" if k > 1 else "")
                            for i, k in enumerate(exps) if k)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _unit(n: int, i: int) -> tuple:
    return tuple(int(j == i) for j in range(n))


def monomials(nvars: int, degree: int) -> list:
    """Exponent tuples of the given degree, descending lexicographic."""
    out = [e for e in itertools.product(range(degree, -1, -1), repeat=nvars) if sum(e) == degree]
    return out


# -- cubes of linear forms ---------------------------------------------------

@dataclass(frozen=True)
class LinearFormCube:
    """``scale * (linear . u)**3`` with ``linear`` normalised to a leading 1."""

    scale: Fraction
    linear: tuple

    def expand(self) -> CubicForm:
        return (CubicForm.linear(self.linear) ** 3).scale(self.scale)


def cube_of_linear(f: CubicForm) -> Optional[LinearFormCube]:
    if f.degree != 3 or f.is_zero():
        raise ContractViolation("cube_of_linear needs a nonzero form of degree 3")
    n = f.nvars
    grads = [f.derivative(j) for j in range(n)]
    i = next(j for j, g in enumerate(grads) if not g.is_zero())
    gi = grads[i]
    # pick a monomial of the pivot gradient to read off candidate ratios
    e0, c0 = gi.terms[0]
    lam = []
    for j, gj in enumerate(grads):
        if j == i:
            lam.append(Fraction(1))
            continue
        r = gj.coefficient(e0) / c0
        if gj != gi.scale(r):
            return None
        lam.append(r)
    c = f.coefficient(tuple(3 * int(j == i) for j in range(n)))
    if c == 0:
        return None
    cand = LinearFormCube(c, tuple(lam))
    if cand.expand() != f:
        return None
    return cand


# -- pencils ---------------------------------------------------------------

@dataclass(frozen=True)
class Pencil:
    """The linear family ``M(u) = sum_i u_i A_i`` of 3x3 matrices.

    ``dropped`` lists positions (in the parent pencil) removed by
    :func:`restrict_pencil` because they became linearly dependent.
    """

    basis: tuple
    dropped: tuple = ()
    kept: tuple = field(default=())

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence]) -> "Pencil":
        return cls(tuple(RationalMatrix.from_vector(v) for v in vectors))

    @property
    def t(self) -> int:
        return len(self.basis)

    def evaluate(self, u: Sequence) -> RationalMatrix:
        if len(u) != self.t:
            raise DimensionError(f"pencil has {self.t} parameters, got {len(u)}")
        out = RationalMatrix.zeros(3, 3)
        for ui, a in zip(u, self.basis):
            if ui:
                out = out + a.scale(ui)
        return out

    def is_independent(self) -> bool:
        return not self.basis or rank(stack([a.vec for a in self.basis])) == self.t

    def entry_forms(self) -> list:
        """3x3 nested list of the linear forms M(u)[r][c]."""
        return [[CubicForm.linear([a[r, c] for a in self.basis]) for c in range(3)]
                for r in range(3)]


_PERMS = [((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
          ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)]


def det_pencil(p: Pencil) -> CubicForm:
    """The cubic form ``det(M(u))``, computed symbolically by the Leibniz formula."""
    if p.t == 0:
        raise ContractViolation("empty pencil")
    m = p.entry_forms()
    total = CubicForm.from_dict(p.t, 3, {})
    for perm, sign in _PERMS:
        term = m[0][perm[0]] * m[1][perm[1]] * m[2][perm[2]]
        total = total + (term if sign > 0 else -term)
    return total


def minor_indices() -> list:
    pairs = list(itertools.combinations(range(3), 2))
    return [(r, c) for r in pairs for c in pairs]


def minor_forms(p: Pencil) -> list:
    """All nine 2x2 minors of M(u) as quadratic forms, in row-pair-major order."""
    m = p.entry_forms()
    return [(((r1, r2), (c1, c2)), m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1])
            for (r1, r2), (c1, c2) in minor_indices()]


def grid_points(t: int, radius: int = 3) -> Iterator[tuple]:
    """Points of {-radius..radius}^t, sparsest and smallest first.

    Ordering by (support size, max |entry|) means a point where a nonzero form
    of low degree is nonzero is usually found after a handful of evaluations.
    """
    values = [0] + [s * k for k in range(1, radius + 1) for s in (1, -1)]
    for support in range(1, t + 1):
        for size in range(1, radius + 1):
            for idx in itertools.combinations(range(t), support):
                nz = [v for v in values if v and abs(v) <= size]
                for choice in itertools.product(nz, repeat=support):
                    if max(abs(v) for v in choice) != size:
                        continue
                    u = [0] * t
                    for i, v in zip(idx, choice):
                        u[i] = v
                    yield tuple(Fraction(x) for x in u)


def nonzero_point(f: CubicForm, radius: int = 3) -> Optional[tuple]:
    """A grid point where ``f`` does not vanish, or None if ``f`` is zero."""
    if f.is_zero():
        return None
    for u in grid_points(f.nvars, radius):
        if f(u) != 0:
            return u
    raise RuntimeError("nonzero form vanished on the whole search grid; radius too small")


def minor2_witness(p: Pencil, radius: int = 3) -> Optional[tuple]:
    """First 2x2 minor of M(u) that is a nonzero polynomial, and a point where it is nonzero.

    Returns ``((row_pair, col_pair), u)`` with 0-based indices, or None when
    every matrix in the family has rank at most one.
    """
    if p.t == 0:
        return None
    for idx, form in minor_forms(p):
        if not form.is_zero():
            return idx, nonzero_point(form, radius)
    return None


def restrict_pencil(p: Pencil, b: Sequence) -> Pencil:
    """Restrict the family to the hyperplane ``b . u = 0``.

    Each ``A_i`` becomes ``A_i - (b_i / b.b) sum_j b_j A_j``; members that are
    dependent on earlier ones are dropped and their positions recorded.
    """
    b = [q(x) for x in b]
    if len(b) != p.t:
        raise DimensionError("restriction vector has wrong length")
    if all(x == 0 for x in b):
        raise ContractViolation("restriction vector must be nonzero")
    bb = sum(x * x for x in b)
    s = p.evaluate(b)
    images = [a - s.scale(bi / bb) for a, bi in zip(p.basis, b)]
    kept, dropped = [], []
    for i, a in enumerate(images):
        trial = [images[k].vec for k in kept] + [a.vec]
        if not a.is_zero() and rank(stack(trial)) == len(trial):
            kept.append(i)
        else:
            dropped.append(i)
    return Pencil(tuple(images[i] for i in kept), tuple(dropped), tuple(kept))


def substitution_matrix(p: Pencil, b: Sequence, u: Sequence) -> RationalMatrix:
    """Evaluate ``M(u - (b.u / b.b) b)`` directly from the parent pencil."""
    b = [q(x) for x in b]
    u = [q(x) for x in u]
    bu = sum(x * y for x, y in zip(b, u))
    bb = sum(x * x for x in b)
    return p.evaluate([ui - bu / bb * bi for ui, bi in zip(u, b)])
