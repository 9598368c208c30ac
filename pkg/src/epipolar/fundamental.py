"""Existence of fundamental matrices for a set of point correspondences.

The decision itself is exact. Only the NOT_A_CUBE branch may produce a
witness with irrational entries; that witness is reported in floating point
together with its singular-value gap and epipolar residuals.
"""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from . import roots
from .common import CorrespondenceSet, Tolerances, Verdict
from .errors import ContractViolation
from .forms import (
    CubicForm,
    Pencil,
    cube_of_linear,
    det_pencil,
    grid_points,
    minor2_witness,
    nonzero_point,
    restrict_pencil,
)
from .linalg import (
    RationalMatrix,
    are_collinear,
    cross,
    det,
    inverse,
    kernel_basis,
    rank,
    skew,
    solve_projectivity,
    stack,
)

log = logging.getLogger(__name__)


class Branch(str, enum.Enum):
    M9_EMPTY = "M9_EMPTY"
    M8_POINT = "M8_POINT"
    DZERO_MINOR = "DZERO_MINOR"
    DZERO_NO_MINOR = "DZERO_NO_MINOR"
    NOT_A_CUBE = "NOT_A_CUBE"
    CUBE_MINOR = "CUBE_MINOR"
    CUBE_NO_MINOR = "CUBE_NO_MINOR"


@dataclass(frozen=True)
class ReducedProblem:
    Z: RationalMatrix
    selected: tuple
    m_prime: int
    source: CorrespondenceSet

    @property
    def pairs(self) -> CorrespondenceSet:
        return self.source.subset(self.selected)


@dataclass(frozen=True)
class WitnessF:
    matrix: Any  # RationalMatrix when exact, 3x3 ndarray when numeric
    kind: str  # "EXACT" | "NUMERIC"
    residual: float = 0.0
    sigma_ratios: Optional[tuple] = None  # (s2/s1, s3/s1), numeric only

    @property
    def exact(self) -> bool:
        return self.kind == "EXACT"


@dataclass(frozen=True)
class FundamentalDecision:
    verdict: Verdict
    branch: Branch
    certificate: dict = field(default_factory=dict)
    witness: Optional[WitnessF] = None
    reduced: Optional[ReducedProblem] = None


def build_reduced(c: CorrespondenceSet) -> ReducedProblem:
    """Keep the lexicographically first maximal set of independent Kronecker rows."""
    z = c.Z
    selected: list = []
    for i in range(z.rows):
        trial = [z.row(j) for j in selected] + [z.row(i)]
        if rank(stack(trial)) == len(trial):
            selected.append(i)
        if len(selected) == 9:
            break
    zr = stack([z.row(i) for i in selected])
    return ReducedProblem(zr, tuple(selected), len(selected), c)


def kernel_pencil(reduced: ReducedProblem) -> Pencil:
    return Pencil.from_vectors(kernel_basis(reduced.Z))


# -- witnesses -------------------------------------------------------------

def _unit_max(a: np.ndarray) -> np.ndarray:
    return a / np.max(np.abs(a))


def epipolar_residual(z: RationalMatrix, f) -> float:
    """max |y_i^T F x_i| with F scaled to unit max-abs entry."""
    if isinstance(f, RationalMatrix):
        vals = z @ f.vec
        if all(v == 0 for v in vals):
            return 0.0
        f = f.to_float()
    fv = _unit_max(np.asarray(f, dtype=float)).reshape(-1)
    return float(np.max(np.abs(z.to_float() @ fv)))


def sigma_ratios(f: np.ndarray) -> tuple:
    s = np.linalg.svd(np.asarray(f, dtype=float), compute_uv=False)
    return float(s[1] / s[0]), float(s[2] / s[0])


def exact_witness(f: RationalMatrix, z: Optional[RationalMatrix] = None) -> WitnessF:
    if rank(f) != 2:
        raise AssertionError("exact witness must have rank two")
    if z is not None and any(v != 0 for v in z @ f.vec):
        raise AssertionError("exact witness violates an epipolar constraint")
    return WitnessF(f, "EXACT", 0.0)


def _char_poly(n: RationalMatrix) -> list:
    tr = n[0, 0] + n[1, 1] + n[2, 2]
    c2 = sum(n[i, i] * n[j, j] - n[i, j] * n[j, i] for i, j in ((0, 1), (0, 2), (1, 2)))
    return [Fraction(1), -tr, c2, -det(n)]


def _is_cube(p: list) -> bool:
    r = -p[1] / 3
    return p == [Fraction(1), -3 * r, 3 * r * r, -r ** 3]


def extract_rank2_on_line(p: Pencil, d: CubicForm, tol: Tolerances = Tolerances(),
                          z: Optional[RationalMatrix] = None) -> tuple:
    """Find a rank-two member of a pencil whose determinant is not ``c * l**3``.

    Picks ``g`` with ``d(g) != 0`` and a direction ``h`` so that the cubic
    ``det(M(h) - lam M(g))`` is not a perfect cube, then takes a real root of
    it. A rational root gives an exact witness; otherwise the smallest real
    (necessarily simple) root gives a numeric one.

    Returns ``(witness, info)`` where ``info`` records g, h and the root.
    """
    if d.is_zero() or cube_of_linear(d) is not None:
        raise ContractViolation("determinant must be nonzero and not a cube of a linear form")
    g = nonzero_point(d, tol.grid_radius)
    b = p.evaluate(g)
    b_inv = inverse(b)
    for h in grid_points(p.t, tol.grid_radius):
        if rank(stack([g, h])) < 2:
            continue
        a = p.evaluate(h)
        chi = _char_poly(b_inv @ a)
        if _is_cube(chi):
            continue
        intervals = roots.isolate_real_roots(chi)
        irrational = []
        for lo, hi in intervals:
            r = roots.rational_root_in(chi, lo, hi)
            if r is None:
                irrational.append((lo, hi))
                continue
            f = a - b.scale(r)
            if rank(f) == 2:
                u = tuple(hi_ - r * gi for hi_, gi in zip(h, g))
                info = {"g": g, "h": h, "root": r, "u": u}
                return exact_witness(f, z), info
        for lo, hi in irrational:
            lam = roots.to_float_root(chi, lo, hi)
            f = _unit_max(a.to_float() - lam * b.to_float())
            s21, s31 = sigma_ratios(f)
            res = epipolar_residual(z, f) if z is not None else 0.0
            if s31 < tol.tol_rank < s21 and res < tol.tol_res:
                info = {"g": g, "h": h, "root": lam, "root_interval": (lo, hi)}
                return WitnessF(f, "NUMERIC", res, (s21, s31)), info
            log.debug("numeric root %r at h=%r failed the rank gap check", lam, h)
    raise RuntimeError("no line with a usable rank-two point on the search grid")


# -- the decision ------------------------------------------------------------

def _minor_certificate(found) -> dict:
    (rows, cols), u = found
    return {"minor_rows": rows, "minor_cols": cols, "u": u}


def decide_fundamental(c: CorrespondenceSet, tol: Tolerances = Tolerances()) -> FundamentalDecision:
    red = build_reduced(c)
    mp = red.m_prime
    if mp == 9:
        return FundamentalDecision(Verdict.NOT_EXISTS, Branch.M9_EMPTY,
                                   {"kernel_dim": 0}, None, red)
    if mp == 8:
        (v,) = kernel_basis(red.Z)
        a = RationalMatrix.from_vector(v)
        r = rank(a)
        cert = {"kernel_point": a, "rank": r}
        if r == 2:
            return FundamentalDecision(Verdict.EXISTS, Branch.M8_POINT, cert,
                                       exact_witness(a, red.Z), red)
        return FundamentalDecision(Verdict.NOT_EXISTS, Branch.M8_POINT, cert, None, red)

    pencil = kernel_pencil(red)
    d = det_pencil(pencil)
    cert: dict = {"kernel_basis": pencil.basis, "det": d}
    if d.is_zero():
        found = minor2_witness(pencil, tol.grid_radius)
        if found is None:
            return FundamentalDecision(Verdict.NOT_EXISTS, Branch.DZERO_NO_MINOR, cert, None, red)
        cert.update(_minor_certificate(found))
        w = exact_witness(pencil.evaluate(found[1]), red.Z)
        return FundamentalDecision(Verdict.EXISTS, Branch.DZERO_MINOR, cert, w, red)

    cube = cube_of_linear(d)
    if cube is None:
        w, info = extract_rank2_on_line(pencil, d, tol, red.Z)
        cert["line"] = info
        return FundamentalDecision(Verdict.EXISTS, Branch.NOT_A_CUBE, cert, w, red)

    cert["cube"] = {"c": cube.scale, "b": cube.linear}
    restricted = restrict_pencil(pencil, cube.linear)
    cert["restricted_basis"] = restricted.basis
    cert["dropped"] = restricted.dropped
    found = minor2_witness(restricted, tol.grid_radius)
    if found is None:
        return FundamentalDecision(Verdict.NOT_EXISTS, Branch.CUBE_NO_MINOR, cert, None, red)
    cert.update(_minor_certificate(found))
    w = exact_witness(restricted.evaluate(found[1]), red.Z)
    return FundamentalDecision(Verdict.EXISTS, Branch.CUBE_MINOR, cert, w, red)


# -- geometric classifiers ----------------------------------------------------

@dataclass(frozen=True)
class GeometricCertificate:
    """Why the kernel lies in the rank-one variety.

    kind is one of ``"y_collinear_on_tau"`` (y's in tau collinear, x's off tau
    equal), ``"x_collinear_on_tau"`` (roles swapped), ``"all_x_collinear"`` or
    ``"all_y_collinear"``. ``tau`` holds indices into the original pairs.
    """

    kind: str
    tau: tuple


def _all_equal(points) -> bool:
    return all(p == points[0] for p in points)


def classify_rank_one_kernel(c: CorrespondenceSet) -> Optional[GeometricCertificate]:
    red = build_reduced(c)
    mp = red.m_prime
    if mp not in (6, 7):
        raise ContractViolation(f"classifier needs rank(Z) in {{6, 7}}, got {mp}")
    sel = red.selected
    xs = [c.pairs[i][0] for i in sel]
    ys = [c.pairs[i][1] for i in sel]
    if mp == 6:
        x_col, y_col = are_collinear(xs), are_collinear(ys)
        assert not (x_col and y_col), "both sides collinear forces rank(Z) <= 4"
        if x_col:
            return GeometricCertificate("all_x_collinear", sel)
        if y_col:
            return GeometricCertificate("all_y_collinear", sel)
        return None
    n = len(sel)
    for mask in range(1, 2 ** n - 1):
        tau = [i for i in range(n) if mask >> i & 1]
        rest = [i for i in range(n) if not mask >> i & 1]
        for kind, line_side, eq_side in (("y_collinear_on_tau", ys, xs),
                                         ("x_collinear_on_tau", xs, ys)):
            if _all_equal([eq_side[i] for i in rest]) and \
                    (len(tau) < 3 or are_collinear([line_side[i] for i in tau])):
                return GeometricCertificate(kind, tuple(sel[i] for i in tau))
    return None


def fundamental_from_homography(c: CorrespondenceSet, h: RationalMatrix) -> Optional[WitnessF]:
    """``F = [b]_x H`` when the columns ``y_i x H x_i`` have rank below three."""
    if det(h) == 0:
        raise ContractViolation("homography must be invertible")
    cols = [cross(y, h @ x) for x, y in c.pairs]
    mt = stack(cols)  # m x 3, rows are the columns of the 3 x m matrix
    if rank(mt) == 3:
        return None
    b = kernel_basis(mt)[0]
    f = skew(b) @ h
    return exact_witness(f, c.Z)


def _no_collinear_triple(points) -> bool:
    return not any(det(stack(t)) == 0 for t in itertools.combinations(points, 3))


def six_point_generic(c: CorrespondenceSet) -> Optional[tuple]:
    """Search four-point subsets in general position on both sides; returns (tau, witness)."""
    if c.m != 6:
        raise ContractViolation("six_point_generic needs exactly six pairs")
    for tau in itertools.combinations(range(6), 4):
        sub = c.subset(tau)
        if _no_collinear_triple(sub.xs) and _no_collinear_triple(sub.ys):
            h = solve_projectivity(sub.pairs)
            w = fundamental_from_homography(c, h)
            assert w is not None, "four exact incidences leave at most two nonzero columns"
            return tau, w
    return None
