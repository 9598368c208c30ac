import itertools
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from epipolar.errors import ContractViolation
from epipolar.forms import (
    CubicForm,
    LinearFormCube,
    Pencil,
    cube_of_linear,
    det_pencil,
    grid_points,
    minor2_witness,
    minor_forms,
    restrict_pencil,
)
from epipolar.linalg import RationalMatrix, det, rank

small = st.fractions(min_value=-4, max_value=4, max_denominator=3)
vec9 = st.lists(small, min_size=9, max_size=9)

IDENTITY = (1, 0, 0, 0, 1, 0, 0, 0, 1)
SHIFT = (0, 1, 0, 0, 0, 1, 0, 0, 0)
RANK_THREE_MEMBER = (0, 1, 2, 5, 4, -2, -15, 3, 11)


def sympy_det(vectors):
    us = sp.symbols(f"u1:{len(vectors) + 1}")
    m = sum((u * sp.Matrix(3, 3, [sp.Rational(str(v)) for v in vec]) for u, vec in zip(us, vectors)),
            sp.zeros(3, 3))
    return sp.Poly(sp.expand(m.det()), *us), us


def as_sympy(form: CubicForm, us):
    return sp.Poly(sum(sp.Rational(c.numerator, c.denominator) * sp.prod([u ** e for u, e in zip(us, ex)])
                       for ex, c in form.terms) + 0 * us[0], *us)


def test_det_of_identity_and_shift_is_pure_cube():
    d = det_pencil(Pencil.from_vectors([IDENTITY, SHIFT]))
    assert d == CubicForm.from_dict(2, 3, {(3, 0): 1})


def test_det_of_fixture_pencil_is_cube_of_linear_form():
    d = det_pencil(Pencil.from_vectors([IDENTITY, RANK_THREE_MEMBER]))
    assert [d.coefficient(e) for e in [(3, 0), (2, 1), (1, 2), (0, 3)]] == [1, 15, 75, 125]
    cube = cube_of_linear(d)
    assert cube.scale == 1 and tuple(cube.linear) == (1, 5)


@given(st.lists(vec9, min_size=1, max_size=4))
def test_det_pencil_matches_sympy(vectors):
    poly, us = sympy_det(vectors)
    assert as_sympy(det_pencil(Pencil.from_vectors(vectors)), us) == poly


@pytest.mark.parametrize("seed", range(100))
def test_det_pencil_evaluates_like_det(seed):
    rng = random.Random(seed)
    t = rng.randint(1, 5)
    vecs = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(9)] for _ in range(t)]
    p = Pencil.from_vectors(vecs)
    u = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(t)]
    assert det_pencil(p)(u) == det(p.evaluate(u))


@given(small.filter(lambda v: v != 0), st.lists(small, min_size=3, max_size=3).filter(any))
def test_cube_roundtrip(c, b):
    f = LinearFormCube(c, tuple(b)).expand()
    cube = cube_of_linear(f)
    assert cube is not None and cube.expand() == f


def test_square_times_other_linear_is_not_a_cube():
    l1 = CubicForm.linear([1, 2])
    l2 = CubicForm.linear([1, -1])
    assert cube_of_linear(l1 * l1 * l2) is None


def test_cube_detection_requires_nonzero_cubic():
    with pytest.raises(ContractViolation):
        cube_of_linear(CubicForm.from_dict(2, 3, {}))


def test_form_evaluation_and_derivative():
    f = CubicForm.from_dict(2, 3, {(2, 1): 3, (0, 3): -1})
    assert f([2, 1]) == 11
    assert f.derivative(0) == CubicForm.from_dict(2, 2, {(1, 1): 6})


def test_nine_two_by_two_minors():
    forms = minor_forms(Pencil.from_vectors([IDENTITY]))
    assert len(forms) == 9
    nonzero = [idx for idx, f in forms if not f.is_zero()]
    assert nonzero == [((0, 1), (0, 1)), ((0, 2), (0, 2)), ((1, 2), (1, 2))]


def test_grid_points_cover_full_box():
    pts = list(grid_points(2, radius=1))
    assert len(pts) == 8 and len(set(pts)) == 8
    assert all(any(p) for p in pts)


def test_minor_witness_found_on_shift_pencil():
    found = minor2_witness(Pencil.from_vectors([SHIFT]))
    (rows, cols), u = found
    a = Pencil.from_vectors([SHIFT]).evaluate(u)
    assert a[rows[0], cols[0]] * a[rows[1], cols[1]] - a[rows[0], cols[1]] * a[rows[1], cols[0]] != 0


def test_rank_one_pencil_has_no_minor_witness():
    # span of e1 e1^T and e1 e2^T: every member is e1 v^T
    p = Pencil.from_vectors([(1, 0, 0, 0, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0, 0, 0, 0)])
    assert minor2_witness(p) is None
    for u in itertools.product(range(-3, 4), repeat=2):
        assert rank(p.evaluate(u)) <= 1


def test_restriction_to_cube_hyperplane():
    p = Pencil.from_vectors([IDENTITY, RANK_THREE_MEMBER])
    r = restrict_pencil(p, (1, 5))
    # the member with u1 + 5 u2 = 0 is M - 5 I, which has rank one
    assert r.t == 1
    m = r.basis[0]
    assert rank(m) == 1
    assert rank(RationalMatrix.from_vector(RANK_THREE_MEMBER) - RationalMatrix.identity(3).scale(5)) == 1
    assert m.scale(Fraction(1, m[0, 0])) == RationalMatrix.from_rows([[1, Fraction(-1, 5), Fraction(-2, 5)],
                                                                     [-1, Fraction(1, 5), Fraction(2, 5)],
                                                                     [3, Fraction(-3, 5), Fraction(-6, 5)]])


def test_restriction_rejects_zero_normal():
    with pytest.raises(ContractViolation):
        restrict_pencil(Pencil.from_vectors([IDENTITY]), (0,))
