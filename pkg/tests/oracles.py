"""Independent reference computations in sympy, used only by the tests."""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy as sp


def to_sympy(rows) -> sp.Matrix:
    return sp.Matrix([[sp.Rational(v.numerator, v.denominator) if isinstance(v, Fraction) else sp.Rational(v)
                       for v in r] for r in rows])


def z_matrix(pairs) -> sp.Matrix:
    """Kronecker rows y (x) x, built directly from the affine data."""
    rows = []
    for (x1, x2), (y1, y2) in pairs:
        x = [sp.Rational(str(x1)), sp.Rational(str(x2)), 1]
        y = [sp.Rational(str(y1)), sp.Rational(str(y2)), 1]
        rows.append([a * b for a in y for b in x])
    return sp.Matrix(rows)


def kernel_pencil(pairs):
    """Symbolic 3x3 matrix sum u_i A_i over a sympy kernel basis, and the symbols."""
    basis = z_matrix(pairs).nullspace()
    us = sp.symbols(f"u1:{len(basis) + 1}")
    m = sp.zeros(3, 3)
    for u, v in zip(us, basis):
        m += u * v.reshape(3, 3)
    return m, us, basis


def all_minors_vanish(pairs) -> bool:
    """True iff every 2x2 minor of the kernel pencil is the zero polynomial."""
    m, _, _ = kernel_pencil(pairs)
    for r in itertools.combinations(range(3), 2):
        for c in itertools.combinations(range(3), 2):
            if sp.expand(m.extract(list(r), list(c)).det()) != 0:
                return False
    return True


def rank_by_minors(a) -> int:
    """Rank of a 3x3 Fraction matrix from determinant and 2x2 minors only."""
    rows = [list(r) for r in a]
    d = (rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
         - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
         + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]))
    if d != 0:
        return 3
    for r in itertools.combinations(range(3), 2):
        for c in itertools.combinations(range(3), 2):
            if rows[r[0]][c[0]] * rows[r[1]][c[1]] - rows[r[0]][c[1]] * rows[r[1]][c[0]] != 0:
                return 2
    return 0 if all(v == 0 for r in rows for v in r) else 1


def grid_has_rank_two(basis, radius: int = 3) -> bool:
    """Exhaustive search over {-radius..radius}^t for a rank-2 pencil member."""
    t = len(basis)
    mats = [[[Fraction(int(v.p), int(v.q)) for v in b[3 * i:3 * i + 3]] for i in range(3)] for b in basis]
    for u in itertools.product(range(-radius, radius + 1), repeat=t):
        if not any(u):
            continue
        a = [[sum(ui * m[i][j] for ui, m in zip(u, mats)) for j in range(3)] for i in range(3)]
        if rank_by_minors(a) == 2:
            return True
    return False
